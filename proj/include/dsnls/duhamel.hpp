#pragma once

#include <string>
#include <vector>

#include "dsnls/propagator.hpp"
#include "dsnls/trajectory.hpp"

namespace ds {

/// G(F)(t) = int_0^t U(t - s) F(s) ds by the recursive trapezoid update, per mode.
Trajectory duhamel_G(const Trajectory& F, double delta);

/// (TT* F)(t_j) = sum_k w_k U(t_j - t_k) F(t_k) with trapezoid weights; F is
/// taken as zero outside the stored window.
Trajectory tt_star(const Trajectory& F, double delta);

/// Slice-wise chi |u|^alpha u + b u E(|u|^alpha).
Field nonlinearity(const Field& u, const ModelParams& mp);
Trajectory nonlinearity(const Trajectory& u, const ModelParams& mp);

/// Free trajectory U(t_j) u0 on t_j = j dt, j = 0..steps.
Trajectory free_trajectory(const Field& u0, double dt, std::size_t steps, double delta);

/// (Phi u)(t) = U(t) u0 - i G(N(u))(t)
Trajectory picard_map(const Field& u0, const Trajectory& u, const ModelParams& mp);

struct PicardReport {
  std::size_t iterates = 0;
  std::vector<double> weak_distances;  // weak space-time norm of u^{k} - u^{k-1}
  std::vector<double> l2_distances;    // sup_t L2 of the same difference
  bool converged = false;
  double contraction_ratio = 0.0;      // exp(slope) of a least-squares fit of log distance
  double residual_weak = 0.0;          // ||u - Phi(u)|| for the returned iterate
  double residual_l2 = 0.0;
  double ball_ratio = 0.0;             // max_k weak(u^k) / weak(U(t) u0)
  double weak_exponent = 0.0;

  std::string to_csv() const;  // columns iter, weak_dist, l2_dist
};

struct PicardResult {
  Trajectory solution;
  PicardReport report;
};

PicardResult picard_solve(const Field& u0, const ModelParams& mp, double T, double dt, std::size_t max_iter,
                          double tol);

/// Least-squares geometric ratio of a positive sequence (0 if fewer than two
/// positive entries).
double geometric_fit_ratio(const std::vector<double>& d);

struct ScatteringResult {
  Field u_plus;
  double tail = 0.0;  // ||v(T) - v(T/2)||_2 with v(t) = U(-t) u(t)
};

/// u+ = u0 - i int_0^T U(-tau) N(u(tau)) dtau on the stored window.
ScatteringResult scattering_limits(const Trajectory& u, const ModelParams& mp);

/// sup over interior slices of the centred-difference residual of the PDE,
/// divided by sup_j ||u_j||_2.
double pde_residual(const Trajectory& u, const ModelParams& mp);

}  // namespace ds
