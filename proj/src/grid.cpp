#include "dsnls/grid.hpp"

#include <cmath>
#include <string>

#include "dsnls/errors.hpp"

namespace ds {

namespace {
bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }
}  // namespace

GridSpec GridSpec::cube(int dim, std::size_t n, double len) {
  GridSpec g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    g.points[a] = a < dim ? n : 1;
    g.length[a] = a < dim ? len : 1.0;
  }
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (dim != 2 && dim != 3)
    throw ConfigError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (points[a] < 8 || !is_pow2(points[a]))
        throw ConfigError("grid N on axis " + std::to_string(a + 1) +
                          " must be a power of two >= 8, got " + std::to_string(points[a]));
      if (!(length[a] > 0.0) || !std::isfinite(length[a]))
        throw ConfigError("grid L on axis " + std::to_string(a + 1) + " must be positive");
    } else if (points[a] != 1) {
      throw ConfigError("unused grid axis must have N = 1");
    }
  }
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

double GridSpec::box_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= length[a];
  return v;
}

Index3 GridSpec::unflat(std::size_t idx) const noexcept {
  Index3 ix{};
  ix[2] = idx % points[2];
  idx /= points[2];
  ix[1] = idx % points[1];
  ix[0] = idx / points[1];
  return ix;
}

Vec3 GridSpec::position(std::size_t idx) const noexcept {
  const Index3 ix = unflat(idx);
  Vec3 x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = coordinate(a, ix[a]);
  return x;
}

long GridSpec::wavenumber(int axis, std::size_t j) const noexcept {
  const long n = long(points[axis]);
  const long k = long(j);
  return k < n / 2 ? k : k - n;
}

std::array<std::vector<double>, 3> coordinate_tables(const GridSpec& g) {
  std::array<std::vector<double>, 3> t;
  for (int a = 0; a < 3; ++a) {
    t[a].resize(g.points[a], 0.0);
    if (a < g.dim)
      for (std::size_t j = 0; j < g.points[a]; ++j) t[a][j] = g.coordinate(a, j);
  }
  return t;
}

std::array<std::vector<double>, 3> frequency_tables(const GridSpec& g) {
  std::array<std::vector<double>, 3> t;
  for (int a = 0; a < 3; ++a) {
    t[a].resize(g.points[a], 0.0);
    if (a < g.dim)
      for (std::size_t j = 0; j < g.points[a]; ++j) t[a][j] = g.frequency(a, j);
  }
  return t;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) throw ArgumentError(std::string(where) + ": grid mismatch");
}

}  // namespace ds
