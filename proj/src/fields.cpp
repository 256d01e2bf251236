#include "dsnls/fields.hpp"

#include <algorithm>
#include <numbers>

#include "dsnls/errors.hpp"

namespace ds {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_finite(std::span<const cplx> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      throw NumericalError(std::string(what) + ": non-finite sample at index " + std::to_string(i));
}

// (-1)^{k0+k1+k2}: converts raw DFT output to the centred-box transform.
double lattice_sign(const GridSpec& g, std::size_t slot) {
  const Index3 ix = g.unflat(slot);
  long s = 0;
  for (int a = 0; a < g.dim; ++a) s += g.wavenumber(a, ix[a]);
  return (s % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

Field::Field(GridSpec spec, std::vector<cplx> samples, double time)
    : spec_(spec), samples_(std::move(samples)), time_(time) {
  spec_.validate();
  if (samples_.size() != spec_.size())
    throw ArgumentError("Field: sample count " + std::to_string(samples_.size()) + " does not match grid size " +
                        std::to_string(spec_.size()));
  if (!std::isfinite(time_)) throw NumericalError("Field: non-finite time tag");
  check_finite(samples_, "Field");
}

Field Field::zeros(const GridSpec& spec, double time) {
  spec.validate();
  return Field(spec, std::vector<cplx>(spec.size()), time);
}

Field Field::constant(const GridSpec& spec, cplx value, double time) {
  spec.validate();
  return Field(spec, std::vector<cplx>(spec.size(), value), time);
}

bool Field::is_real() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](const cplx& z) { return z.imag() == 0.0; });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : samples_) m = std::max(m, std::abs(z));
  return m;
}

double Field::max_abs_imag() const noexcept {
  double m = 0.0;
  for (const auto& z : samples_) m = std::max(m, std::abs(z.imag()));
  return m;
}

Field Field::real_part() const {
  std::vector<cplx> v(samples_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = samples_[i].real();
  return Field(spec_, std::move(v), time_);
}

Field Field::conj() const {
  std::vector<cplx> v(samples_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(samples_[i]);
  return Field(spec_, std::move(v), time_);
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a.spec(), b.spec(), "Field +");
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return Field(a.spec(), std::move(v), a.time());
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a.spec(), b.spec(), "Field -");
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return Field(a.spec(), std::move(v), a.time());
}

Field operator*(cplx s, const Field& a) {
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a[i];
  return Field(a.spec(), std::move(v), a.time());
}

Field operator*(const Field& a, const Field& b) {
  require_same_grid(a.spec(), b.spec(), "Field *");
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return Field(a.spec(), std::move(v), a.time());
}

SpectralField::SpectralField(GridSpec spec, std::vector<cplx> coeffs, double time)
    : spec_(spec), coeffs_(std::move(coeffs)), time_(time) {
  spec_.validate();
  if (coeffs_.size() != spec_.size()) throw ArgumentError("SpectralField: coefficient count does not match grid");
  check_finite(coeffs_, "SpectralField");
}

std::size_t SpectralField::slot(long k0, long k1, long k2) const {
  const long ks[3] = {k0, k1, k2};
  std::size_t ix[3] = {0, 0, 0};
  for (int a = 0; a < spec_.dim; ++a) {
    const long n = long(spec_.points[a]);
    if (ks[a] < -n / 2 || ks[a] >= n / 2) throw ArgumentError("SpectralField: wavenumber outside the lattice");
    ix[a] = std::size_t(ks[a] < 0 ? ks[a] + n : ks[a]);
  }
  return spec_.flat(ix[0], ix[1], ix[2]);
}

Vec3 SpectralField::frequency(std::size_t slot) const noexcept {
  const Index3 ix = spec_.unflat(slot);
  Vec3 xi{0.0, 0.0, 0.0};
  for (int a = 0; a < spec_.dim; ++a) xi[a] = spec_.frequency(a, ix[a]);
  return xi;
}

namespace detail {

std::vector<cplx> raw_spectrum(const Field& f) {
  std::vector<cplx> s(f.samples().begin(), f.samples().end());
  fft_inplace(f.spec(), s, -1);
  return s;
}

Field from_raw_spectrum(const GridSpec& g, std::vector<cplx> s, double time) {
  fft_inplace(g, s, +1);
  const double inv = 1.0 / double(g.size());
  for (auto& z : s) z *= inv;
  return Field(g, std::move(s), time);
}

bool is_nyquist(const GridSpec& g, int axis, std::size_t slot) noexcept {
  return g.unflat(slot)[axis] == g.points[axis] / 2;
}

}  // namespace detail

SpectralField forward_transform(const Field& f) {
  auto s = detail::raw_spectrum(f);
  const GridSpec& g = f.spec();
  const double cv = g.cell_volume();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= cv * lattice_sign(g, i);
  return SpectralField(g, std::move(s), f.time());
}

Field inverse_transform(const SpectralField& c) {
  const GridSpec& g = c.spec();
  std::vector<cplx> s(c.coefficients().begin(), c.coefficients().end());
  const double scale = 1.0 / g.box_volume();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= scale * lattice_sign(g, i);
  detail::fft_inplace(g, s, +1);
  return Field(g, std::move(s), c.time());
}

double lp_norm(std::span<const cplx> samples, double cell_volume, double p) {
  if (std::isnan(p) || p < 1.0) throw ArgumentError("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : samples) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (const auto& z : samples) s += std::norm(z);
  } else {
    for (const auto& z : samples) s += std::pow(std::abs(z), p);
  }
  return std::pow(s * cell_volume, 1.0 / p);
}

double lp_norm(const Field& f, double p) { return lp_norm(f.samples(), f.spec().cell_volume(), p); }

ResampleResult spectral_resample(const Field& f, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ArgumentError("spectral_resample: beta must be positive");
  const GridSpec& g = f.spec();
  std::vector<cplx> c = detail::raw_spectrum(f);

  ResampleResult out;
  double total = 0.0, high = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Index3 ix = g.unflat(i);
    const double e = std::norm(c[i]);
    total += e;
    for (int a = 0; a < g.dim; ++a) {
      if (8 * std::abs(g.wavenumber(a, ix[a])) > 3 * long(g.points[a])) {
        high += e;
        break;
      }
    }
  }
  out.high_band_fraction = total > 0.0 ? high / total : 0.0;
  out.aliasing_warning = out.high_band_fraction > 1e-8;

  if (beta == 1.0) {
    out.field = f;
    return out;
  }

  // Axis by axis: replace the wavenumber index by the physical index using
  // the dense evaluation matrix M[j][k] = e^{2 pi i (beta x_j + L/2) k / L}.
  // The Nyquist column uses the cosine so real data stay real.
  for (int a = 0; a < g.dim; ++a) {
    const std::size_t n = g.points[a];
    std::vector<cplx> m(n * n);
    for (std::size_t j = 0; j < n; ++j) {
      const double y = (beta * g.coordinate(a, j) + 0.5 * g.length[a]) / g.length[a];
      for (std::size_t s = 0; s < n; ++s) {
        const long k = g.wavenumber(a, s);
        m[j * n + s] = (s == n / 2) ? cplx(std::cos(kTwoPi * y * double(k)), 0.0)
                                    : std::polar(1.0, kTwoPi * y * double(k));
      }
    }
    std::size_t stride = 1;
    for (int b = a + 1; b < 3; ++b) stride *= g.points[b];
    const std::size_t outer = g.size() / (n * stride);
    std::vector<cplx> line(n);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < stride; ++in) {
        const std::size_t base = o * n * stride + in;
        for (std::size_t s = 0; s < n; ++s) line[s] = c[base + s * stride];
        for (std::size_t j = 0; j < n; ++j) {
          cplx acc = 0.0;
          const cplx* row = &m[j * n];
          for (std::size_t s = 0; s < n; ++s) acc += row[s] * line[s];
          c[base + j * stride] = acc / double(n);
        }
      }
    }
  }
  out.field = Field(g, std::move(c), f.time());
  return out;
}

Field spectral_derivative(const Field& f, int axis, int order) {
  const GridSpec& g = f.spec();
  if (axis < 0 || axis >= g.dim) throw ArgumentError("spectral_derivative: axis out of range");
  if (order < 0) throw ArgumentError("spectral_derivative: negative order");
  auto s = detail::raw_spectrum(f);
  const cplx factor(0.0, kTwoPi);
  detail::for_each_mode(g, [&](std::size_t i, double x0, double x1, double x2) {
    const double xi = axis == 0 ? x0 : axis == 1 ? x1 : x2;
    if (order % 2 == 1 && detail::is_nyquist(g, axis, i)) {
      s[i] = 0.0;
      return;
    }
    s[i] *= std::pow(factor * xi, order);
  });
  return detail::from_raw_spectrum(g, std::move(s), f.time());
}

}  // namespace ds
