#pragma once

#include <span>

#include "dsnls/fields.hpp"

namespace ds {

struct MultiplierParams {
  double m = 1.0;  // ellipticity of the mean-flow equation, > 0
  int dim = 2;
  void validate() const;
};

/// p(xi) = xi1^2 / (xi1^2 + m xi2^2 + sum_{j>=3} xi_j^2), with p(0) = 0.
double symbol_value(std::span<const double> xi, const MultiplierParams& mp);
double symbol_value(double xi0, double xi1, double xi2, double m) noexcept;

/// E f = F^{-1}[p F f]. Real input gives real output; an imaginary residue
/// above 1e-12 of the field magnitude is reported as a NumericalError.
Field apply_E(const Field& f, const MultiplierParams& mp);

/// d_{x1} phi for the mean flow, i.e. E(g) for real g.
Field recover_phi_x1(const Field& g, const MultiplierParams& mp);

/// phi itself in the mean-free gauge. The axis-1 Nyquist plane is dropped so
/// the result is real.
Field recover_phi(const Field& g, const MultiplierParams& mp);

}  // namespace ds
