#pragma once

#include <vector>

#include "dsnls/fields.hpp"

namespace ds {

/// Uniformly time-sampled sequence of Fields sharing one grid.
/// Slice j carries the time tag t0 + j*dt; the constructor re-tags slices.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<Field> slices, double t0, double dt);

  static Trajectory zeros(const GridSpec& g, std::size_t count, double t0, double dt);

  std::size_t size() const noexcept { return slices_.size(); }
  bool empty() const noexcept { return slices_.empty(); }
  const Field& operator[](std::size_t j) const noexcept { return slices_[j]; }
  const Field& front() const { return slices_.front(); }
  const Field& back() const { return slices_.back(); }
  const std::vector<Field>& slices() const noexcept { return slices_; }
  const GridSpec& spec() const { return slices_.front().spec(); }
  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t j) const noexcept { return t0_ + double(j) * dt_; }

 private:
  std::vector<Field> slices_;
  double t0_ = 0.0;
  double dt_ = 1.0;
};

/// Largest sup-in-time relative L2 difference between two trajectories on the
/// same grid and time lattice, ||a_j - b_j||_2 / max_j ||b_j||_2.
double sup_relative_l2(const Trajectory& a, const Trajectory& b);
/// sup_j ||a_j - b_j||_2.
double sup_l2_distance(const Trajectory& a, const Trajectory& b);

}  // namespace ds
