#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dsnls/fields.hpp"
#include "dsnls/nonlocal.hpp"
#include "dsnls/trajectory.hpp"

namespace ds {

/// Coefficients of  i u_t + delta d1^2 u + sum_{j>=2} dj^2 u = chi |u|^alpha u + b u E(|u|^alpha).
/// chi = 0 is accepted so the linear and pure-nonlocal reductions can be run.
struct ModelParams {
  double delta = 1.0;
  double chi = 1.0;
  double b = 0.0;
  double m = 1.0;
  double alpha = 2.0;
  int dim = 2;

  /// Open window (4(n+1)/(n(n+2)), 4(n+1)/n^2) for alpha.
  static std::pair<double, double> alpha_window(int n);
  /// Every violated constraint, one message each; empty when valid.
  std::vector<std::string> violations() const;
  void validate() const;  // ConfigError joining violations()

  MultiplierParams multiplier() const { return {m, dim}; }
  bool is_linear() const noexcept { return chi == 0.0 && b == 0.0; }
  /// Exponent alpha(n+2)/2 of the weak space-time norm.
  double critical_exponent() const noexcept { return alpha * (dim + 2) / 2.0; }
};

/// psi(xi) = 4 pi^2 (delta xi1^2 + sum_{j>=2} xi_j^2)
double dispersion_symbol(double xi0, double xi1, double xi2, double delta) noexcept;

/// U(t) f = F^{-1}[e^{-i t psi} F f]; the result is tagged f.time() + t.
Field free_evolve(const Field& f, double t, double delta);

/// ||U(t1) U(t2) f - U(t1 + t2) f||_2 / ||f||_2 (0 for f = 0).
double group_property_check(const Field& f, double t1, double t2, double delta);

/// Exact solution of i u_t = chi|u|^alpha u + b u E(|u|^alpha) over dt: a
/// pointwise phase rotation. With dealias, the real potential is 2/3-masked.
Field nonlinear_phase_step(const Field& f, double dt, const ModelParams& mp, bool dealias = false);

struct SplitStepOptions {
  int order = 2;               // 1 Lie, 2 Strang
  std::size_t store_every = 1;
  bool dealias = false;
};

/// Integrates from u0 over [u0.time(), u0.time() + T] with steps of dt.
Trajectory split_step_evolve(const Field& u0, double T, double dt, const ModelParams& mp,
                             const SplitStepOptions& opts = {});

/// Advances by `steps` steps of dt (dt may be negative for time reversal).
Field split_step_advance(const Field& u0, double dt, std::size_t steps, const ModelParams& mp, int order = 2,
                         bool dealias = false);

/// Number of steps T/dt, checked to be integral within 1e-9.
std::size_t integral_steps(double T, double dt, const char* where);

}  // namespace ds
