#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "dsnls/fields.hpp"

namespace dstest {

inline constexpr double pi = std::numbers::pi;

inline ds::Field random_field(const ds::GridSpec& g, std::uint64_t seed, bool real = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<ds::cplx> v(g.size());
  for (auto& z : v) {
    const double re = nd(rng);
    z = ds::cplx(re, real ? 0.0 : nd(rng));
  }
  return ds::Field(g, std::move(v));
}

// Random field with spectrum confined to |k| <= kmax on every axis (real when asked).
inline ds::Field band_limited(const ds::GridSpec& g, std::uint64_t seed, long kmax, bool real = false) {
  ds::Field f = random_field(g, seed, false);
  auto s = ds::detail::raw_spectrum(f);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto ix = g.unflat(i);
    for (int a = 0; a < g.dim; ++a)
      if (std::abs(g.wavenumber(a, ix[a])) > kmax) s[i] = 0.0;
  }
  ds::Field out = ds::detail::from_raw_spectrum(g, std::move(s), 0.0);
  return real ? out.real_part() : out;
}

inline ds::Field gaussian(const ds::GridSpec& g, double scale = 1.0) {
  return ds::Field::sample(g, [&](const ds::Vec3& x) {
    return std::exp(-pi * scale * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
}

inline ds::Field plane_wave(const ds::GridSpec& g, long k0, long k1, long k2 = 0) {
  return ds::Field::sample(g, [&](const ds::Vec3& x) {
    const double ph = 2 * pi * (k0 * x[0] / g.length[0] + k1 * x[1] / g.length[1] + k2 * x[2] / g.length[2]);
    return std::polar(1.0, ph);
  });
}

inline double max_diff(const ds::Field& a, const ds::Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_l2(const ds::Field& a, const ds::Field& b) {
  return ds::lp_norm(a - b, 2.0) / ds::lp_norm(b, 2.0);
}

}  // namespace dstest
