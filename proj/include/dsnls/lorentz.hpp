#pragma once

#include <utility>
#include <vector>

#include "dsnls/fields.hpp"
#include "dsnls/trajectory.hpp"

namespace ds {

/// Nonnegative sample values, each carrying the same measure.
class SampledMeasureSpace {
 public:
  SampledMeasureSpace(std::vector<double> values, double cell_measure);
  static SampledMeasureSpace from_field(const Field& f);
  /// Pools every slice with cell measure dt * cellvol.
  static SampledMeasureSpace from_trajectory(const Trajectory& u);

  const std::vector<double>& values() const noexcept { return values_; }
  double cell_measure() const noexcept { return cell_; }
  /// Values sorted in descending order (computed lazily, cached).
  const std::vector<double>& sorted_desc() const;

 private:
  std::vector<double> values_;
  double cell_;
  mutable std::vector<double> sorted_;
};

/// mu{|f| > lambda}
double distribution_function(const SampledMeasureSpace& s, double lambda);
/// sup_lambda lambda * mu{|f| > lambda}^{1/p}, attained at sample values.
double weak_lp_norm(const SampledMeasureSpace& s, double p);
double weak_lp_norm(const Field& f, double p);
double weak_spacetime_norm(const Trajectory& u, double p);

/// (sum_j dt ||u_j||_r^q)^{1/q}; q or r may be infinite.
double mixed_norm(const Trajectory& u, double q, double r);

/// Threshold K-functional: min over c of ||a 1_{|a|>c}||_{p0} + t ||a 1_{|a|<=c}||_{p1},
/// with c ranging over the sample values (plus c = 0). p1 may be infinite.
class KFunctional {
 public:
  KFunctional(const SampledMeasureSpace& s, double p0, double p1);
  double operator()(double t) const;
  /// Same objective at an arbitrary threshold c.
  double at_threshold(double t, double c) const;
  /// sup over the given t values of t^{-theta} k(t).
  double sup_weighted(const std::vector<double>& ts, double theta) const;

 private:
  double p0_, p1_, cell_;
  std::vector<double> asc_;     // ascending values
  std::vector<double> small_;   // small_[i] = sum_{j<i} v_j^{p1}
  std::vector<double> large_;   // large_[i] = sum_{j>=i} v_j^{p0}
  std::vector<std::size_t> cuts_;  // admissible split positions (tie aware)
  double piece(std::size_t i, double t) const;
};

double k_functional(const SampledMeasureSpace& s, double t, double p0, double p1);

/// f = f 1_{|f|>c} + f 1_{|f|<=c}
std::pair<Field, Field> threshold_split(const Field& f, double c);

}  // namespace ds
