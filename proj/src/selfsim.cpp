#include "dsnls/selfsim.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <map>
#include <memory>
#include <numbers>

#include "dsnls/errors.hpp"
#include "dsnls/lorentz.hpp"
#include "dsnls/propagator.hpp"

namespace ds {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double max_spacing(const GridSpec& g) {
  double h = 0.0;
  for (int a = 0; a < g.dim; ++a) h = std::max(h, g.spacing(a));
  return h;
}

double min_length(const GridSpec& g) {
  double L = g.length[0];
  for (int a = 1; a < g.dim; ++a) L = std::min(L, g.length[a]);
  return L;
}

double radius(const Vec3& x, int n) {
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
  return std::sqrt(r2);
}

// (x)_k, valid for any real x including nonpositive integers.
double poch(double x, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= x + j;
  return v;
}

double factorial(int k) { return gsl_sf_fact(unsigned(k)); }

// Radii are cached on a quantized r^2 so grid points related by symmetry share
// one series evaluation.
long long radius_key(double r2, double h) { return std::llround(r2 / (1e-9 * h * h)); }

}  // namespace

Field homogeneous_field(const HomogeneousData& hd, const GridSpec& spec) {
  spec.validate();
  if (!(hd.eps > 0.0)) throw ConfigError("homogeneous data: eps must be positive");
  if (!(hd.alpha > 0.0)) throw ConfigError("homogeneous data: alpha must be positive");
  if (!(hd.degree() < spec.dim)) throw ConfigError("homogeneous data: 2/alpha must be below the dimension");
  const double h = max_spacing(spec);
  if (hd.core_cutoff < 2.0 * h * (1.0 - 1e-12))
    throw ConfigError("homogeneous data: core_cutoff must be at least two grid spacings (" +
                      std::to_string(2.0 * h) + ")");
  const double p = hd.degree(), rho = hd.core_cutoff;
  const int n = spec.dim;
  return Field::sample(spec, [&](const Vec3& x) { return hd.eps * std::pow(std::max(radius(x, n), rho), -p); });
}

double smooth_window(double k, double k0, double k1) noexcept {
  if (k <= k0) return 1.0;
  if (k >= k1) return 0.0;
  const double s = (k - k0) / (k1 - k0);
  const auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double fa = f(1.0 - s), fb = f(s);
  return fa / (fa + fb);
}

Field spectral_homogeneous_field(const GridSpec& spec, double p, double eps, SpectralWindow w, double match_radius) {
  spec.validate();
  const int n = spec.dim;
  if (!(p > 0.0 && p < n)) throw ArgumentError("spectral_homogeneous_field: need 0 < p < n");
  if (!(w.k1 > w.k0 && w.k0 >= 0.0)) throw ArgumentError("spectral_homogeneous_field: need 0 <= k0 < k1");
  const double c = eps * std::pow(kPi, p - 0.5 * n) * gsl_sf_gamma(0.5 * (n - p)) / gsl_sf_gamma(0.5 * p);
  std::vector<cplx> coeffs(spec.size());
  detail::for_each_mode(spec, [&](std::size_t i, double a, double b, double cc) {
    const double k = std::sqrt(a * a + b * b + cc * cc);
    coeffs[i] = k > 0.0 ? c * std::pow(k, p - n) * smooth_window(k, w.k0, w.k1) : 0.0;
  });
  Field u = inverse_transform(SpectralField(spec, std::move(coeffs))).real_part();
  if (match_radius <= 0.0) return u;

  const double h = max_spacing(spec);
  double acc = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = radius(spec.position(i), n);
    if (std::abs(r - match_radius) < h) {
      acc += u[i].real() - eps * std::pow(r, -p);
      ++cnt;
    }
  }
  if (cnt == 0) throw ArgumentError("spectral_homogeneous_field: match radius shell holds no grid points");
  const double shift = acc / double(cnt);
  std::vector<cplx> v(u.samples().begin(), u.samples().end());
  for (auto& z : v) z -= shift;
  return Field(spec, std::move(v), 0.0);
}

const char* to_string(BkNormalization v) { return v == BkNormalization::GammaA ? "gamma_a" : "gamma_b"; }
const char* to_string(RemainderForm v) {
  return v == RemainderForm::ConjugatePhases ? "conjugate_phases" : "common_phase";
}

void SeriesParams::validate() const {
  if (n != 2 && n != 3) throw ConfigError("series: n must be 2 or 3");
  if (!(p > 0.0 && p < n)) throw ConfigError("series: need 0 < p < n");
  if (m < 0 || l < 0) throw ConfigError("series: orders must be nonnegative");
  if (!(m + 2 > b())) throw ConfigError("series: need m + 2 > b");
  if (!(l + 2 > a())) throw ConfigError("series: need l + 2 > a");
  if (quad_nodes < 4 || quad_nodes > 400) throw ConfigError("series: quad_nodes must lie in [4, 400]");
}

SeriesParams SeriesParams::resolved() const {
  SeriesParams s = *this;
  const auto minimal = [](double c) { return std::max(0, int(std::floor(c - 2.0)) + 1); };
  if (s.m < 0) s.m = minimal(b()) + 2;
  if (s.l < 0) s.l = minimal(a()) + 2;
  s.validate();
  return s;
}

CwSeries::CwSeries(const SeriesParams& sp) : sp_(sp.resolved()) {
  const auto build = [&](int order, double tau_exp) {
    Rule q;
    const auto nq = std::size_t(sp_.quad_nodes);
    std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> lag(
        gsl_integration_fixed_alloc(gsl_integration_fixed_laguerre, nq, 0.0, 1.0, tau_exp, 0.0),
        &gsl_integration_fixed_free);
    std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> jac(
        gsl_integration_fixed_alloc(gsl_integration_fixed_jacobi, nq, 0.0, 1.0, double(order), 0.0),
        &gsl_integration_fixed_free);
    if (!lag || !jac) throw NumericalError("series: quadrature rule allocation failed");
    const double* tn = gsl_integration_fixed_nodes(lag.get());
    const double* tw = gsl_integration_fixed_weights(lag.get());
    const double* sn = gsl_integration_fixed_nodes(jac.get());
    const double* sw = gsl_integration_fixed_weights(jac.get());
    q.tau.assign(tn, tn + nq);
    q.wtau.assign(tw, tw + nq);
    q.s.assign(sn, sn + nq);
    q.ws.assign(sw, sw + nq);
    return q;
  };
  r1_ = build(sp_.m, sp_.m + 1 - sp_.b());
  r2_ = build(sp_.l, sp_.l + 1 - sp_.a());
}

double CwSeries::A(int k) const { return poch(sp_.a(), k) * poch(1.0 - sp_.b(), k) / factorial(k); }

double CwSeries::B(int k) const {
  const double a = sp_.a(), b = sp_.b();
  const double pref = sp_.bk == BkNormalization::GammaA ? gsl_sf_gamma(b) / gsl_sf_gamma(a) : 1.0;
  return pref * poch(b, k) * poch(1.0 - a, k) / factorial(k);
}

// int_0^inf int_0^1 (1-s)^order (kappa - s tau / y)^{-power} e^{-tau} tau^{tau_exp} ds dtau;
// the weights already carry (1-s)^order and tau^{tau_exp} e^{-tau}.
cplx CwSeries::remainder(const Rule& q, double y, double power, cplx kappa) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < q.tau.size(); ++i) {
    cplx inner = 0.0;
    for (std::size_t j = 0; j < q.s.size(); ++j) inner += q.ws[j] * std::pow(kappa - q.s[j] * q.tau[i] / y, -power);
    acc += q.wtau[i] * inner;
  }
  return acc;
}

CwTerms CwSeries::terms(double r, double t) const {
  if (!(t > 0.0)) throw ArgumentError("cw_free_evolution: t must be positive");
  if (!(r > 0.0)) throw ArgumentError("cw_free_evolution: x must be nonzero");
  const double y = r * r / (4.0 * t);
  if (y < kSeriesFloor)
    throw ArgumentError("cw_free_evolution: |x|^2/4t = " + std::to_string(y) +
                        " is below the series floor; use the FFT free evolution instead");
  const int n = sp_.n, m = sp_.m, l = sp_.l;
  const double p = sp_.p, a = sp_.a(), b = sp_.b();

  CwTerms out{};
  for (int k = 0; k <= m; ++k) out.series1 += A(k) * std::polar(1.0, k * kPi / 2.0) * std::pow(y, -k);
  for (int k = 0; k <= l; ++k) out.series2 += B(k) * std::polar(1.0, -(n + 2.0 * k) * kPi / 4.0) * std::pow(y, -k);

  const double c1 = poch(a, m + 1) * gsl_sf_gammainv(1.0 - b) / factorial(m);
  const cplx i1 = remainder(r1_, y, a + m + 1, -kI);
  if (sp_.remainder == RemainderForm::ConjugatePhases) {
    out.remainder1 = c1 * std::polar(1.0, -a * kPi / 2.0) * std::pow(y, -(m + 1)) * i1;
    const double c2 = B(l + 1) * (l + 1) * gsl_sf_gammainv(l + 2 - a);
    const cplx i2 = remainder(r2_, y, b + l + 1, kI);
    out.remainder2 = c2 * std::polar(1.0, b * kPi / 2.0 - n * kPi / 4.0) * std::pow(y, -(l + 1)) * i2;
  } else {
    out.remainder1 = c1 * std::polar(1.0, a * kPi / 2.0) * std::pow(y, -(m + 1)) * i1;
    const double c2 = B(l + 1) * (l + 1) * gsl_sf_gammainv(l + 2 - b);
    const cplx i2 = remainder(r2_, y, b + l + 1, -kI);
    out.remainder2 = c2 * std::polar(1.0, a * kPi / 2.0) * std::pow(y, -(l + 1)) * i2;
  }
  out.smooth = std::pow(r, -p) * (out.series1 + out.remainder1);
  out.oscillatory = std::polar(1.0, y) * std::pow(r, p - n) * std::pow(4.0 * t, 0.5 * n - p) *
                    (out.series2 + out.remainder2);
  return out;
}

cplx cw_free_evolution(const Vec3& x, double t, const SeriesParams& sp) {
  return CwSeries(sp)(radius(x, sp.n), t);
}

Field cw_field(const GridSpec& spec, double t, const SeriesParams& sp) {
  spec.validate();
  if (spec.dim != sp.n) throw ArgumentError("cw_field: grid dimension differs from the series dimension");
  const CwSeries cw(sp);
  const double h = max_spacing(spec);
  std::map<long long, cplx> cache;
  std::vector<cplx> v(spec.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 x = spec.position(i);
    double r2 = 0.0;
    for (int a = 0; a < spec.dim; ++a) r2 += x[a] * x[a];
    if (r2 / (4.0 * t) < kSeriesFloor) continue;
    const auto key = radius_key(r2, h);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, cw(std::sqrt(r2), t)).first;
    v[i] = it->second;
  }
  return Field(spec, std::move(v), t);
}

double OracleComparison::error(BkNormalization bk, RemainderForm rf) const {
  for (const auto& v : variants)
    if (v.bk == bk && v.remainder == rf) return v.max_rel_error;
  throw ArgumentError("OracleComparison: variant not evaluated");
}

std::vector<OracleVariantError> OracleComparison::passing(double tol) const {
  std::vector<OracleVariantError> out;
  for (const auto& v : variants)
    if (v.max_rel_error <= tol) out.push_back(v);
  return out;
}

SpectralWindow default_oracle_window(const GridSpec& spec, double t) {
  const double L = min_length(spec);
  double nyq = kInf;
  for (int a = 0; a < spec.dim; ++a) nyq = std::min(nyq, double(spec.points[a]) / (2.0 * spec.length[a]));
  // A mode xi travels 4 pi |xi| t; the transition band is placed so its
  // packets sit beyond the annulus but have not wrapped around the box.
  const double speed = 4.0 * kPi * t;
  SpectralWindow w{1.15 * (0.25 * L) / speed, std::min(0.95 * nyq, 0.9 * (0.75 * L) / speed)};
  if (!(w.k1 > w.k0)) throw ArgumentError("default_oracle_window: grid too coarse for this time");
  return w;
}

OracleComparison compare_with_fft(const GridSpec& spec, double p, double t, double r_min, double r_max,
                                  std::optional<SpectralWindow> window, int quad_nodes) {
  spec.validate();
  const int n = spec.dim;
  OracleComparison cmp;
  cmp.n = n;
  cmp.p = p;
  cmp.t = t;
  cmp.r_min = r_min;
  cmp.r_max = r_max > 0.0 ? r_max : 0.25 * min_length(spec);
  cmp.window = window ? *window : default_oracle_window(spec, t);
  if (r_min * r_min / (4.0 * t) < kSeriesFloor) throw ArgumentError("compare_with_fft: annulus reaches below the series floor");

  const Field u0 = spectral_homogeneous_field(spec, p, 1.0, cmp.window);
  const Field ut = free_evolve(u0, t, 1.0);

  std::vector<CwSeries> series;
  for (auto bk : {BkNormalization::GammaA, BkNormalization::GammaB})
    for (auto rf : {RemainderForm::ConjugatePhases, RemainderForm::CommonPhase}) {
      SeriesParams sp;
      sp.n = n;
      sp.p = p;
      sp.bk = bk;
      sp.remainder = rf;
      sp.quad_nodes = quad_nodes;
      series.emplace_back(sp);
      cmp.variants.push_back({bk, rf, 0.0});
    }

  const double h = max_spacing(spec);
  std::map<long long, std::vector<cplx>> cache;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double r = radius(spec.position(i), n);
    if (r < cmp.r_min || r > cmp.r_max) continue;
    const double env = std::pow(r, -p);
    const cplx est = ut[i] - (u0[i] - env);
    const auto key = radius_key(r * r, h);
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<cplx> vals;
      for (const auto& s : series) vals.push_back(s(r, t));
      it = cache.emplace(key, std::move(vals)).first;
    }
    for (std::size_t v = 0; v < series.size(); ++v)
      cmp.variants[v].max_rel_error = std::max(cmp.variants[v].max_rel_error, std::abs(est - it->second[v]) / env);
    ++cmp.points;
  }
  if (cmp.points == 0) throw ArgumentError("compare_with_fft: annulus holds no grid points");
  return cmp;
}

std::optional<BkNormalization> resolve_bk(const std::vector<OracleComparison>& cases, double tol) {
  std::optional<BkNormalization> chosen;
  for (auto bk : {BkNormalization::GammaA, BkNormalization::GammaB}) {
    const bool ok = !cases.empty() && std::all_of(cases.begin(), cases.end(), [&](const OracleComparison& c) {
      return std::min(c.error(bk, RemainderForm::ConjugatePhases), c.error(bk, RemainderForm::CommonPhase)) <= tol;
    });
    if (ok) {
      if (chosen) return std::nullopt;  // both pass everywhere: not resolved
      chosen = bk;
    }
  }
  return chosen;
}

double predicted_sigma(double alpha, int n) {
  return alpha >= 4.0 / n ? 2.0 / alpha : n - 2.0 / alpha;
}

double profile_decay_fit(const Field& profile, double alpha, int n) {
  const GridSpec& g = profile.spec();
  if (g.dim != n) throw ArgumentError("profile_decay_fit: dimension mismatch");
  if (!(alpha > 0.0)) throw ArgumentError("profile_decay_fit: alpha must be positive");
  const double L = min_length(g), h = max_spacing(g);
  const double lo = L / 8.0, hi = L / 4.0;
  if (lo < 4.0 * h) throw NumericalError("profile_decay_fit: annulus under-resolved (L/8 below four cells)");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = radius(g.position(i), n);
    if (r < lo || r > hi) continue;
    const double v = std::abs(profile[i]);
    if (!(v > 0.0)) throw NumericalError("profile_decay_fit: profile vanishes inside the fit annulus");
    const double x = std::log1p(r), yv = std::log(v);
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    ++cnt;
  }
  if (cnt < 32) throw NumericalError("profile_decay_fit: annulus under-resolved (fewer than 32 samples)");
  const double c = double(cnt);
  return -(c * sxy - sx * sy) / (c * sxx - sx * sx);
}

DistributionReport distribution_bound_check(const Trajectory& u, double alpha, int n, std::size_t points) {
  if (u.empty()) throw ArgumentError("distribution_bound_check: empty trajectory");
  if (u.spec().dim != n) throw ArgumentError("distribution_bound_check: dimension mismatch");
  if (points < 3) throw ArgumentError("distribution_bound_check: need at least three levels");
  DistributionReport rep;
  rep.target_exponent = -alpha * (n + 2) / 2.0;

  const double h = max_spacing(u.spec());
  const double t_min = std::max(4.0 * u.dt(), 4.0 * h * h);
  auto j_min = std::size_t(std::ceil(t_min / u.dt() - 1e-9));
  if (j_min >= u.size()) {
    rep.flags.push_back("trajectory shorter than the resolution time; using the first slice");
    j_min = 0;
  }
  rep.lambda_lo = u.back().max_abs();
  rep.lambda_hi = u[j_min].max_abs();
  if (!(rep.lambda_hi > rep.lambda_lo) || !(rep.lambda_lo > 0.0)) {
    rep.flags.push_back("empty resolved lambda range");
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.span_decades = std::log10(rep.lambda_hi / rep.lambda_lo);
  if (rep.span_decades < 1.0) rep.flags.push_back("resolved lambda range spans less than one decade");

  const SampledMeasureSpace s = SampledMeasureSpace::from_trajectory(u);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  rep.constant_min = kInf;
  for (std::size_t k = 0; k < points; ++k) {
    const double lam = rep.lambda_lo * std::pow(rep.lambda_hi / rep.lambda_lo, double(k) / double(points - 1));
    const double d = distribution_function(s, lam);
    rep.lambdas.push_back(lam);
    rep.distribution.push_back(d);
    rep.bound.push_back(std::pow(lam, rep.target_exponent));
    if (d <= 0.0) continue;
    const double c = d * std::pow(lam, -rep.target_exponent);
    rep.constant_min = std::min(rep.constant_min, c);
    rep.constant_max = std::max(rep.constant_max, c);
    const double x = std::log(lam), y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) {
    rep.flags.push_back("too few nonzero distribution values to fit");
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const double c = double(cnt);
  rep.fitted_exponent = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  return rep;
}

std::vector<ScalingSample> scaling_residual_series(const Trajectory& u, double beta, double alpha,
                                                   const ScalingOptions& opts) {
  if (u.empty()) throw ArgumentError("scaling_residual: empty trajectory");
  if (!(beta > 0.0)) throw ArgumentError("scaling_residual: beta must be positive");
  if (!(alpha > 0.0)) throw ArgumentError("scaling_residual: alpha must be positive");
  std::vector<ScalingSample> out;
  if (beta == 1.0) {
    for (std::size_t j = 0; j < u.size(); ++j) out.push_back({u.time(j), 0.0});
    return out;
  }
  if (std::abs(u.t0()) > 1e-12) throw ArgumentError("scaling_residual: trajectory must start at t = 0");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double s = beta * beta * double(j);
    const double k = std::round(s);
    if (std::abs(s - k) <= 1e-9 * std::max(1.0, s) && k < double(u.size())) pairs.emplace_back(j, std::size_t(k));
  }
  if (pairs.size() < 2) throw ArgumentError("scaling_residual: beta^2 t does not land on the slice grid");

  const GridSpec& g = u.spec();
  std::vector<char> mask(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    bool in = radius(x, g.dim) >= opts.exclusion_radius;
    for (int a = 0; a < g.dim; ++a) in = in && std::abs(x[a]) < 0.25 * g.length[a];
    mask[i] = in;
  }
  const double amp = std::pow(beta, 2.0 / alpha);
  for (auto [j, k] : pairs) {
    const Field scaled = spectral_resample(u[k], beta).field;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!mask[i]) continue;
      num += std::norm(amp * scaled[i] - u[j][i]);
      den += std::norm(u[j][i]);
    }
    out.push_back({u.time(j), den > 0.0 ? std::sqrt(num / den) : 0.0});
  }
  return out;
}

double scaling_residual(const Trajectory& u, double beta, double alpha, const ScalingOptions& opts) {
  double worst = 0.0;
  for (const auto& s : scaling_residual_series(u, beta, alpha, opts)) worst = std::max(worst, s.residual);
  return worst;
}

}  // namespace ds
