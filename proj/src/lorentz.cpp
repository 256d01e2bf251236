#include "dsnls/lorentz.hpp"

#include <algorithm>
#include <functional>

#include "dsnls/errors.hpp"

namespace ds {

SampledMeasureSpace::SampledMeasureSpace(std::vector<double> values, double cell_measure)
    : values_(std::move(values)), cell_(cell_measure) {
  if (!(cell_ > 0.0) || !std::isfinite(cell_)) throw ArgumentError("SampledMeasureSpace: cell measure must be positive");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ArgumentError("SampledMeasureSpace: values must be finite and >= 0");
}

SampledMeasureSpace SampledMeasureSpace::from_field(const Field& f) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(f[i]);
  return {std::move(v), f.spec().cell_volume()};
}

SampledMeasureSpace SampledMeasureSpace::from_trajectory(const Trajectory& u) {
  if (u.empty()) throw ArgumentError("from_trajectory: empty trajectory");
  std::vector<double> v;
  v.reserve(u.size() * u.spec().size());
  for (const auto& s : u.slices())
    for (const auto& z : s.samples()) v.push_back(std::abs(z));
  return {std::move(v), u.dt() * u.spec().cell_volume()};
}

const std::vector<double>& SampledMeasureSpace::sorted_desc() const {
  if (sorted_.size() != values_.size()) {
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
  }
  return sorted_;
}

double distribution_function(const SampledMeasureSpace& s, double lambda) {
  if (!(lambda > 0.0)) throw ArgumentError("distribution_function: lambda must be positive");
  const auto& v = s.sorted_desc();
  const auto idx = std::partition_point(v.begin(), v.end(), [lambda](double x) { return x > lambda; }) - v.begin();
  return double(idx) * s.cell_measure();
}

double weak_lp_norm(const SampledMeasureSpace& s, double p) {
  if (std::isnan(p) || p < 1.0) throw ArgumentError("weak_lp_norm: p must be >= 1");
  const auto& v = s.sorted_desc();
  if (std::isinf(p)) return v.empty() ? 0.0 : v.front();
  double best = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] <= 0.0) break;
    // Only the last entry of a tie block counts: mu{|f| > lambda} just below
    // v[k] includes every sample equal to v[k].
    if (k + 1 < v.size() && v[k + 1] == v[k]) continue;
    best = std::max(best, v[k] * std::pow(double(k + 1) * s.cell_measure(), 1.0 / p));
  }
  return best;
}

double weak_lp_norm(const Field& f, double p) { return weak_lp_norm(SampledMeasureSpace::from_field(f), p); }

double weak_spacetime_norm(const Trajectory& u, double p) {
  return weak_lp_norm(SampledMeasureSpace::from_trajectory(u), p);
}

double mixed_norm(const Trajectory& u, double q, double r) {
  if (std::isnan(q) || std::isnan(r) || q < 1.0 || r < 1.0)
    throw ArgumentError("mixed_norm: exponents must be >= 1 or infinite");
  if (u.empty()) throw ArgumentError("mixed_norm: empty trajectory");
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& s : u.slices()) m = std::max(m, lp_norm(s, r));
    return m;
  }
  double acc = 0.0;
  for (const auto& s : u.slices()) acc += u.dt() * std::pow(lp_norm(s, r), q);
  return std::pow(acc, 1.0 / q);
}

KFunctional::KFunctional(const SampledMeasureSpace& s, double p0, double p1)
    : p0_(p0), p1_(p1), cell_(s.cell_measure()) {
  if (!(p0 > 0.0) || !(p1 > p0)) throw ArgumentError("k_functional: need 0 < p0 < p1");
  asc_.assign(s.sorted_desc().rbegin(), s.sorted_desc().rend());
  const std::size_t n = asc_.size();
  small_.assign(n + 1, 0.0);
  large_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    small_[i + 1] = std::isinf(p1) ? 0.0 : small_[i] + std::pow(asc_[i], p1);
  for (std::size_t i = n; i-- > 0;) large_[i] = large_[i + 1] + std::pow(asc_[i], p0);
  // Split at i puts asc_[0..i) in the small piece; ties may not be separated.
  for (std::size_t i = 0; i <= n; ++i)
    if (i == 0 || i == n || asc_[i - 1] < asc_[i]) cuts_.push_back(i);
}

double KFunctional::piece(std::size_t i, double t) const {
  const double big = std::pow(large_[i] * cell_, 1.0 / p0_);
  double small;
  if (std::isinf(p1_))
    small = i == 0 ? 0.0 : asc_[i - 1];
  else
    small = std::pow(small_[i] * cell_, 1.0 / p1_);
  return big + t * small;
}

double KFunctional::operator()(double t) const {
  if (!(t > 0.0)) throw ArgumentError("k_functional: t must be positive");
  double best = kInf;
  for (std::size_t i : cuts_) best = std::min(best, piece(i, t));
  return best;
}

double KFunctional::at_threshold(double t, double c) const {
  const auto i = std::size_t(std::upper_bound(asc_.begin(), asc_.end(), c) - asc_.begin());
  return piece(i, t);
}

double KFunctional::sup_weighted(const std::vector<double>& ts, double theta) const {
  double best = 0.0;
  for (double t : ts) best = std::max(best, std::pow(t, -theta) * (*this)(t));
  return best;
}

double k_functional(const SampledMeasureSpace& s, double t, double p0, double p1) {
  return KFunctional(s, p0, p1)(t);
}

std::pair<Field, Field> threshold_split(const Field& f, double c) {
  std::vector<cplx> hi(f.size()), lo(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) (std::abs(f[i]) > c ? hi[i] : lo[i]) = f[i];
  return {Field(f.spec(), std::move(hi), f.time()), Field(f.spec(), std::move(lo), f.time())};
}

}  // namespace ds
