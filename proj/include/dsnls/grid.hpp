#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ds {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Index3 = std::array<std::size_t, 3>;

/// Origin-centred periodic box [-L/2, L/2)^n. Unused trailing axes (n = 2)
/// carry N = 1 and L = 1 so that every loop can be written three deep.
struct GridSpec {
  int dim = 2;
  Index3 points{1, 1, 1};
  Vec3 length{1.0, 1.0, 1.0};

  static GridSpec cube(int dim, std::size_t n, double len);

  /// Throws ConfigError listing the first violated invariant.
  void validate() const;

  std::size_t size() const noexcept { return points[0] * points[1] * points[2]; }
  double spacing(int axis) const noexcept { return length[axis] / double(points[axis]); }
  double cell_volume() const noexcept;
  double box_volume() const noexcept;

  double coordinate(int axis, std::size_t j) const noexcept {
    return -0.5 * length[axis] + double(j) * spacing(axis);
  }
  /// Row-major with axis 1 slowest.
  std::size_t flat(std::size_t i0, std::size_t i1, std::size_t i2) const noexcept {
    return (i0 * points[1] + i1) * points[2] + i2;
  }
  Index3 unflat(std::size_t idx) const noexcept;
  Vec3 position(std::size_t idx) const noexcept;

  /// Signed wavenumber k for FFT slot j on the given axis (0..N/2-1, -N/2..-1).
  long wavenumber(int axis, std::size_t j) const noexcept;
  double frequency(int axis, std::size_t j) const noexcept {
    return double(wavenumber(axis, j)) / length[axis];
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Per-axis coordinate or frequency tables for fast three-deep loops.
std::array<std::vector<double>, 3> coordinate_tables(const GridSpec& g);
std::array<std::vector<double>, 3> frequency_tables(const GridSpec& g);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

}  // namespace ds
