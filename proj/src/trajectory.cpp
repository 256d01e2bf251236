#include "dsnls/trajectory.hpp"

#include <algorithm>

#include "dsnls/errors.hpp"

namespace ds {

Trajectory::Trajectory(std::vector<Field> slices, double t0, double dt) : t0_(t0), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("Trajectory: dt must be positive");
  if (!std::isfinite(t0)) throw ArgumentError("Trajectory: t0 must be finite");
  slices_.reserve(slices.size());
  for (std::size_t j = 0; j < slices.size(); ++j) {
    if (j > 0) require_same_grid(slices[0].spec(), slices[j].spec(), "Trajectory");
    slices_.push_back(std::move(slices[j]).with_time(t0 + double(j) * dt));
  }
}

Trajectory Trajectory::zeros(const GridSpec& g, std::size_t count, double t0, double dt) {
  std::vector<Field> s;
  s.reserve(count);
  for (std::size_t j = 0; j < count; ++j) s.push_back(Field::zeros(g));
  return Trajectory(std::move(s), t0, dt);
}

namespace {
void require_matching(const Trajectory& a, const Trajectory& b, const char* where) {
  if (a.size() != b.size() || a.empty()) throw ArgumentError(std::string(where) + ": slice count mismatch");
  require_same_grid(a.spec(), b.spec(), where);
}
}  // namespace

double sup_l2_distance(const Trajectory& a, const Trajectory& b) {
  require_matching(a, b, "sup_l2_distance");
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, lp_norm(a[j] - b[j], 2.0));
  return d;
}

double sup_relative_l2(const Trajectory& a, const Trajectory& b) {
  require_matching(a, b, "sup_relative_l2");
  double ref = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) ref = std::max(ref, lp_norm(b[j], 2.0));
  const double d = sup_l2_distance(a, b);
  return ref > 0.0 ? d / ref : d;
}

}  // namespace ds
