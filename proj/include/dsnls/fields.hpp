#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dsnls/fft.hpp"
#include "dsnls/grid.hpp"

namespace ds {

/// Immutable sampled complex function on a GridSpec, tagged with a model time.
class Field {
 public:
  Field() = default;
  Field(GridSpec spec, std::vector<cplx> samples, double time = 0.0);

  static Field zeros(const GridSpec& spec, double time = 0.0);
  static Field constant(const GridSpec& spec, cplx value, double time = 0.0);

  /// fn(const Vec3& x) -> cplx, evaluated at every grid point.
  template <class Fn>
  static Field sample(const GridSpec& spec, Fn&& fn, double time = 0.0) {
    spec.validate();
    std::vector<cplx> v(spec.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(fn(spec.position(i)));
    return Field(spec, std::move(v), time);
  }

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  const cplx& operator[](std::size_t i) const noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double time() const noexcept { return time_; }
  bool empty() const noexcept { return samples_.empty(); }

  Field with_time(double t) const& { return Field(spec_, samples_, t); }
  Field with_time(double t) && { return Field(spec_, std::move(samples_), t); }

  /// Moves the sample buffer out (used to build a derived Field without copying).
  std::vector<cplx> release() && { return std::move(samples_); }

  bool is_real() const noexcept;
  double max_abs() const noexcept;
  double max_abs_imag() const noexcept;
  Field real_part() const;
  Field conj() const;

 private:
  GridSpec spec_{};
  std::vector<cplx> samples_;
  double time_ = 0.0;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx s, const Field& a);
Field operator*(const Field& a, const Field& b);

/// Spectral twin. Coefficients are stored in FFT slot order and normalized as
///   c(xi) = cellvol * sum_x f(x) e^{-2 pi i x.xi},  xi = k / L,
/// which approximates the continuous transform. The inverse is
///   f(x) = (1 / prod L) sum_xi c(xi) e^{2 pi i x.xi},
/// so Parseval reads sum |f|^2 cellvol = sum |c|^2 / prod L.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridSpec spec, std::vector<cplx> coeffs, double time = 0.0);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const cplx> coefficients() const noexcept { return coeffs_; }
  double time() const noexcept { return time_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Slot index of the signed lattice wavenumber (k0, k1, k2); k in [-N/2, N/2).
  std::size_t slot(long k0, long k1, long k2 = 0) const;
  cplx at(long k0, long k1, long k2 = 0) const { return coeffs_[slot(k0, k1, k2)]; }
  Vec3 frequency(std::size_t slot) const noexcept;

 private:
  GridSpec spec_{};
  std::vector<cplx> coeffs_;
  double time_ = 0.0;
};

SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& g);

/// Riemann-sum L^p norm; p = infinity gives the max.
double lp_norm(const Field& f, double p);
double lp_norm(std::span<const cplx> samples, double cell_volume, double p);
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ResampleResult {
  Field field;
  double high_band_fraction = 0.0;  // energy share with |k| > 3N/8 on some axis
  bool aliasing_warning = false;
};

/// Samples of x -> f(beta x) on the same grid by trigonometric evaluation.
ResampleResult spectral_resample(const Field& f, double beta);

namespace detail {

/// Raw (unnormalized) spectrum in FFT slot order. Multiplier-type operators
/// work on this directly since the lattice phase and cell volume cancel.
std::vector<cplx> raw_spectrum(const Field& f);
/// Inverse of raw_spectrum including the 1/prod N factor.
Field from_raw_spectrum(const GridSpec& g, std::vector<cplx> spec, double time);

/// fn(std::size_t slot, double xi0, double xi1, double xi2) for every slot.
template <class Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
  const auto fq = frequency_tables(g);
  std::size_t idx = 0;
  for (std::size_t i0 = 0; i0 < g.points[0]; ++i0)
    for (std::size_t i1 = 0; i1 < g.points[1]; ++i1)
      for (std::size_t i2 = 0; i2 < g.points[2]; ++i2, ++idx) fn(idx, fq[0][i0], fq[1][i1], fq[2][i2]);
}

/// True on slots carrying the Nyquist wavenumber on the given axis.
bool is_nyquist(const GridSpec& g, int axis, std::size_t slot) noexcept;

}  // namespace detail

/// Spectral multiplication by symbol(xi0, xi1, xi2) -> cplx.
template <class Sym>
Field apply_multiplier(const Field& f, Sym&& symbol) {
  auto s = detail::raw_spectrum(f);
  detail::for_each_mode(f.spec(), [&](std::size_t i, double a, double b, double c) { s[i] *= symbol(a, b, c); });
  return detail::from_raw_spectrum(f.spec(), std::move(s), f.time());
}

/// Spectral derivative d^order / dx_axis^order. Odd orders zero the Nyquist
/// plane of that axis, the only choice that keeps real fields real.
Field spectral_derivative(const Field& f, int axis, int order);

}  // namespace ds
