#include "dsnls/nonlocal.hpp"

#include <numbers>

#include "dsnls/errors.hpp"

namespace ds {

void MultiplierParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("m must be positive");
  if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3");
}

double symbol_value(double xi0, double xi1, double xi2, double m) noexcept {
  const double num = xi0 * xi0;
  const double den = num + m * xi1 * xi1 + xi2 * xi2;
  return den > 0.0 ? num / den : 0.0;
}

double symbol_value(std::span<const double> xi, const MultiplierParams& mp) {
  mp.validate();
  if (xi.size() != std::size_t(mp.dim)) throw ArgumentError("symbol_value: frequency has wrong dimension");
  return symbol_value(xi[0], xi[1], mp.dim == 3 ? xi[2] : 0.0, mp.m);
}

namespace {

void require_real_input(const Field& g, const char* where) {
  const double scale = std::max(1.0, g.max_abs());
  if (g.max_abs_imag() > 1e-10 * scale)
    throw ArgumentError(std::string(where) + ": input must be real-valued");
}

}  // namespace

Field apply_E(const Field& f, const MultiplierParams& mp) {
  mp.validate();
  if (f.spec().dim != mp.dim) throw ArgumentError("apply_E: grid dimension does not match multiplier");
  const bool real_in = f.is_real();
  const double m = mp.m;
  Field out = apply_multiplier(f, [m](double a, double b, double c) { return cplx(symbol_value(a, b, c, m)); });
  if (!real_in) return out;
  const double scale = std::max(f.max_abs(), out.max_abs());
  if (out.max_abs_imag() > 1e-12 * scale)
    throw NumericalError("apply_E: imaginary residue " + std::to_string(out.max_abs_imag()) +
                         " on real input exceeds tolerance");
  return out.real_part();
}

Field recover_phi_x1(const Field& g, const MultiplierParams& mp) {
  require_real_input(g, "recover_phi_x1");
  return apply_E(g.real_part(), mp);
}

Field recover_phi(const Field& g, const MultiplierParams& mp) {
  mp.validate();
  if (g.spec().dim != mp.dim) throw ArgumentError("recover_phi: grid dimension does not match multiplier");
  require_real_input(g, "recover_phi");
  const GridSpec& spec = g.spec();
  const double m = mp.m;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto s = detail::raw_spectrum(g.real_part());
  detail::for_each_mode(spec, [&](std::size_t i, double a, double b, double c) {
    const double den = a * a + m * b * b + c * c;
    if (den == 0.0 || detail::is_nyquist(spec, 0, i)) {
      s[i] = 0.0;
      return;
    }
    // 2 pi i xi1 / (-4 pi^2 |xi|_m^2)
    s[i] *= cplx(0.0, -a / (two_pi * den));
  });
  Field phi = detail::from_raw_spectrum(spec, std::move(s), g.time());
  return phi.real_part();
}

}  // namespace ds
