#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dsnls/fields.hpp"
#include "dsnls/trajectory.hpp"

namespace ds {

/// eps |x|^{-2/alpha}, capped at eps rho^{-2/alpha} inside |x| < rho.
struct HomogeneousData {
  double eps = 1.0;
  double alpha = 2.0;
  double core_cutoff = 0.0;
  double degree() const noexcept { return 2.0 / alpha; }
};

Field homogeneous_field(const HomogeneousData& hd, const GridSpec& spec);

/// Smooth low-pass partition: 1 below k0, 0 above k1, C-infinity in between.
double smooth_window(double k, double k0, double k1) noexcept;

struct SpectralWindow {
  double k0 = 0.0;
  double k1 = 0.0;
};

/// eps |x|^{-p} synthesized from its exact transform
///   c |xi|^{p-n},  c = pi^{p-n/2} Gamma((n-p)/2) / Gamma(p/2),
/// times smooth_window(|xi|), with the xi = 0 mode removed. When match_radius
/// is positive a constant is added so the mean of u - eps|x|^{-p} over the
/// shell of width 2h around that radius vanishes.
Field spectral_homogeneous_field(const GridSpec& spec, double p, double eps, SpectralWindow w,
                                 double match_radius = 0.0);

/// Which gamma factor normalizes the oscillatory coefficients B_k.
enum class BkNormalization { GammaA, GammaB };
/// Phase conventions of the two double-integral remainders.
///  ConjugatePhases: R1 ~ e^{-i a pi/2} (-i - s tau/y)^..., R2 ~ e^{i b pi/2} e^{-i n pi/4} (i - s tau/y)^...
///  CommonPhase:     both with e^{i a pi/2} (-i - s tau/y)^..., R2 normalized by Gamma(l+2-b)
enum class RemainderForm { ConjugatePhases, CommonPhase };

const char* to_string(BkNormalization v);
const char* to_string(RemainderForm v);

/// Constants of the explicit free evolution of |x|^{-p} in dimension n.
struct SeriesParams {
  int n = 2;
  double p = 1.0;
  int m = -1;            // order of the |x|^{-p} series; -1 selects the default
  int l = -1;            // order of the oscillatory series; -1 selects the default
  int quad_nodes = 48;   // per axis of the (tau, s) tensor rule
  BkNormalization bk = BkNormalization::GammaA;
  RemainderForm remainder = RemainderForm::ConjugatePhases;

  double a() const noexcept { return 0.5 * p; }
  double b() const noexcept { return 0.5 * (n - p); }
  /// Fills defaulted orders (smallest admissible plus two guard terms) and validates.
  SeriesParams resolved() const;
  void validate() const;
};

struct CwTerms {
  cplx series1, remainder1;   // |x|^{-p} branch, before the |x|^{-p} factor
  cplx series2, remainder2;   // oscillatory branch, before its prefactor
  cplx smooth;                // |x|^{-p} (series1 + remainder1)
  cplx oscillatory;           // e^{iy} |x|^{p-n} (4t)^{n/2-p} (series2 + remainder2)
  cplx total() const { return smooth + oscillatory; }
};

/// Below this value of |x|^2 / 4t the asymptotic series is not used.
inline constexpr double kSeriesFloor = 0.5;

class CwSeries {
 public:
  explicit CwSeries(const SeriesParams& sp);

  const SeriesParams& params() const noexcept { return sp_; }
  double A(int k) const;
  double B(int k) const;

  CwTerms terms(double r, double t) const;
  cplx operator()(double r, double t) const { return terms(r, t).total(); }

 private:
  struct Rule {
    std::vector<double> tau, wtau, s, ws;
  };
  cplx remainder(const Rule& q, double y, double power, cplx kappa) const;

  SeriesParams sp_;
  Rule r1_, r2_;
};

/// e^{it Laplacian} |x|^{-p} at the point x (first n coordinates), t > 0.
cplx cw_free_evolution(const Vec3& x, double t, const SeriesParams& sp);

/// The series sampled on a grid where |x|^2/4t >= kSeriesFloor; zero inside.
Field cw_field(const GridSpec& spec, double t, const SeriesParams& sp);

struct OracleVariantError {
  BkNormalization bk;
  RemainderForm remainder;
  double max_rel_error;
};

struct OracleComparison {
  int n = 2;
  double p = 1.0;
  double t = 0.5;
  double r_min = 2.0, r_max = 0.0;
  SpectralWindow window;
  std::size_t points = 0;
  std::vector<OracleVariantError> variants;  // all four combinations
  /// Errors are |series - fft| / |x|^{-p} over the annulus.
  double error(BkNormalization bk, RemainderForm rf) const;
  /// Variants whose error is within tol; more than one means this case does
  /// not discriminate between them.
  std::vector<OracleVariantError> passing(double tol) const;
};

SpectralWindow default_oracle_window(const GridSpec& spec, double t);

/// Compares the series with an FFT free evolution of spectrally synthesized
/// |x|^{-p} data on r_min <= |x| <= r_max (r_max = 0 means L/4). The slowly
/// varying difference between the synthesized data and |x|^{-p} on the box
/// is subtracted as a static correction.
OracleComparison compare_with_fft(const GridSpec& spec, double p, double t, double r_min = 2.0, double r_max = 0.0,
                                  std::optional<SpectralWindow> window = std::nullopt, int quad_nodes = 48);

/// Picks the normalization that passes every comparison; nullopt if none or
/// if the cases disagree.
std::optional<BkNormalization> resolve_bk(const std::vector<OracleComparison>& cases, double tol);

/// sigma = 2/alpha when alpha >= 4/n, else n - 2/alpha.
double predicted_sigma(double alpha, int n);

/// Least-squares slope of log|f| against log(1+|x|) over L/8 <= |x| <= L/4, negated.
double profile_decay_fit(const Field& profile, double alpha, int n);

struct DistributionReport {
  double target_exponent = 0.0;    // -alpha (n+2)/2
  double fitted_exponent = 0.0;
  double lambda_lo = 0.0, lambda_hi = 0.0;
  double span_decades = 0.0;
  std::vector<double> lambdas, distribution, bound;  // bound = lambda^{target}
  double constant_min = 0.0, constant_max = 0.0;     // of distribution * lambda^{-target}
  std::vector<std::string> flags;
  bool within(double tol) const { return std::abs(fitted_exponent - target_exponent) <= tol; }
};

/// lambda_lo = max|u(T)| (later times would still add mass below it) and
/// lambda_hi = max|u(t_min)|, t_min = max(4 dt, (2h)^2) (earlier slices are
/// resolution limited). The fit uses `points` log-spaced levels in between.
DistributionReport distribution_bound_check(const Trajectory& u, double alpha, int n, std::size_t points = 24);

struct ScalingOptions {
  double exclusion_radius = 0.0;  // drop |x| < radius from the norms
};

struct ScalingSample {
  double time;
  double residual;
};

/// Per matched time t (with beta^2 t on the slice grid) the relative residual
/// described below; beta = 1 gives zeros at every slice.
std::vector<ScalingSample> scaling_residual_series(const Trajectory& u, double beta, double alpha,
                                                   const ScalingOptions& opts = {});

/// max over matched times of ||beta^{2/alpha} u(beta x, beta^2 t) - u(x, t)||_2 / ||u(t)||_2,
/// both norms over the half box |x_i| < L_i/4.
double scaling_residual(const Trajectory& u, double beta, double alpha, const ScalingOptions& opts = {});

}  // namespace ds
