#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dsnls/grid.hpp"
#include "dsnls/trajectory.hpp"

namespace ds {

/// Exponents (q, r, qt, rt) in (1, inf]; the forcing is measured in the dual
/// pair (qt', rt').
struct ExponentQuad {
  double q = 4.0, r = 4.0, qt = 4.0, rt = 4.0;
  int n = 2;

  static double dual(double e) { return std::isinf(e) ? 1.0 : e / (e - 1.0); }
  double qt_dual() const { return dual(qt); }
  double rt_dual() const { return dual(rt); }
  /// (q, r) and (qt, rt) exchanged.
  ExponentQuad swapped() const { return {qt, rt, q, r, n}; }
};

struct Admissibility {
  bool admissible = true;
  std::vector<std::string> violated;  // in checking order
};

Admissibility is_admissible(const ExponentQuad& e);

struct Prop3Window {
  bool inside = false;
  double lo = 0.0, hi = 0.0;  // open window for r
  double p = 0.0;             // from 1/p - 1/r = 2/(n+2)
};

/// 2(n+1)/n < r < 2(n+1)(n+2)/n^2 and the induced forcing exponent p.
Prop3Window prop3_window(double r, int n);

struct StrichartzConfig {
  GridSpec grid = GridSpec::cube(2, 256, 24.0);
  std::vector<double> betas{0.25, 0.5, 1.0, 2.0, 4.0};
  std::size_t samples = 1;
  std::uint64_t seed = 1;
  int modes = 12;         // plane waves per forcing
  double width = 1.0;     // Gaussian envelope e^{-pi |x|^2 / width^2}
  double kband = 0.5;     // wavevector components ~ N(0, kband)
  double tau = 0.25;      // forcing active on 0 < s < tau with profile sin^2(pi s / tau)
  double window = 4.0;    // time window T = window * tau (before rescaling)
  std::size_t slices = 48;
  double delta = 1.0;
  double amplitude = 1.0; // 0 gives the zero forcing
};

struct StrichartzRow {
  double beta;
  std::size_t sample;
  double ratio_G;
  double ratio_TT;
  bool skipped;
};

struct StrichartzReport {
  ExponentQuad quad;
  std::uint64_t seed = 0;
  std::vector<StrichartzRow> rows;
  double spread_G = 0.0;   // max / min over every non-skipped row
  double spread_TT = 0.0;
  std::size_t skipped = 0;

  std::string to_csv() const;  // q,r,qt,rt,beta,sample,ratio_G,ratio_TTstar
};

/// Random band-limited forcing number `sample` of the seeded family, rescaled
/// as F(beta x, beta^2 t) on the window [0, window*tau/beta^2].
Trajectory strichartz_forcing(const StrichartzConfig& cfg, std::size_t sample, double beta);

/// Ratios ||G F_beta||_{L^q L^r} / ||F_beta||_{L^qt' L^rt'} and the same for TT*.
StrichartzReport strichartz_ratio_sweep(const ExponentQuad& e, const StrichartzConfig& cfg);

}  // namespace ds
