#include "dsnls/propagator.hpp"

#include <cstdio>
#include <numbers>

#include "dsnls/errors.hpp"

namespace ds {

namespace {
constexpr double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}
}  // namespace

std::pair<double, double> ModelParams::alpha_window(int n) {
  const double nn = n;
  return {4.0 * (nn + 1.0) / (nn * (nn + 2.0)), 4.0 * (nn + 1.0) / (nn * nn)};
}

std::vector<std::string> ModelParams::violations() const {
  std::vector<std::string> v;
  if (dim != 2 && dim != 3) {
    v.push_back("n must be 2 or 3");
  } else {
    const auto [lo, hi] = alpha_window(dim);
    if (!(alpha > lo && alpha < hi)) v.push_back("alpha must lie in (" + fmt_g(lo) + ", " + fmt_g(hi) + ")");
  }
  if (delta != 1.0 && delta != -1.0) v.push_back("delta must be +1 or -1");
  if (chi != 1.0 && chi != -1.0 && chi != 0.0) v.push_back("chi must be +1, -1 or 0");
  if (!std::isfinite(b)) v.push_back("b must be finite");
  if (!(m > 0.0) || !std::isfinite(m)) v.push_back("m must be positive");
  return v;
}

void ModelParams::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg;
  for (const auto& s : v) msg += (msg.empty() ? "" : "; ") + s;
  throw ConfigError(msg);
}

double dispersion_symbol(double xi0, double xi1, double xi2, double delta) noexcept {
  return kFourPi2 * (delta * xi0 * xi0 + xi1 * xi1 + xi2 * xi2);
}

Field free_evolve(const Field& f, double t, double delta) {
  if (!std::isfinite(t)) throw ArgumentError("free_evolve: t must be finite");
  Field out = apply_multiplier(
      f, [t, delta](double a, double b, double c) { return std::polar(1.0, -t * dispersion_symbol(a, b, c, delta)); });
  return std::move(out).with_time(f.time() + t);
}

double group_property_check(const Field& f, double t1, double t2, double delta) {
  const Field two = free_evolve(free_evolve(f, t2, delta), t1, delta);
  const Field one = free_evolve(f, t1 + t2, delta);
  const double ref = lp_norm(f, 2.0);
  const double d = lp_norm(two - one, 2.0);
  return ref > 0.0 ? d / ref : d;
}

namespace {

/// Raw-buffer split-step engine shared by the public entry points.
class Stepper {
 public:
  Stepper(const GridSpec& g, const ModelParams& mp, double dt, bool dealias)
      : g_(g), mp_(mp), dt_(dt), dealias_(dealias) {
    const std::size_t n = g.size();
    half_.resize(n);
    full_.resize(n);
    if (mp.b != 0.0) sym_.resize(n);
    if (dealias) mask_.resize(n);
    const double inv = 1.0 / double(n);
    detail::for_each_mode(g, [&](std::size_t i, double a, double b, double c) {
      const double psi = dispersion_symbol(a, b, c, mp.delta);
      half_[i] = std::polar(inv, -0.5 * dt * psi);
      full_[i] = std::polar(inv, -dt * psi);
      if (!sym_.empty()) sym_[i] = symbol_value(a, b, c, mp.m) * inv;
    });
    if (dealias) {
      for (std::size_t i = 0; i < n; ++i) {
        const Index3 ix = g.unflat(i);
        bool keep = true;
        for (int a = 0; a < g.dim; ++a)
          keep = keep && 3 * std::abs(g.wavenumber(a, ix[a])) < long(g.points[a]);
        mask_[i] = keep ? inv : 0.0;
      }
    }
    work_.resize(n);
    pot_.resize(n);
  }

  void linear(std::vector<cplx>& u, bool half) {
    detail::fft_inplace(g_, u, -1);
    const auto& ph = half ? half_ : full_;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= ph[i];
    detail::fft_inplace(g_, u, +1);
  }

  void nonlinear(std::vector<cplx>& u) {
    if (mp_.is_linear()) return;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
      pot_[i] = std::pow(std::abs(u[i]), mp_.alpha);
      if (!std::isfinite(pot_[i])) throw NumericalError("nonlinear step: overflow in |u|^alpha");
    }
    if (mp_.b != 0.0) {
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        work_[i] = pot_[i];
        scale = std::max(scale, pot_[i]);
      }
      detail::fft_inplace(g_, work_, -1);
      for (std::size_t i = 0; i < n; ++i) work_[i] *= sym_[i];
      detail::fft_inplace(g_, work_, +1);
      double im = 0.0;
      for (std::size_t i = 0; i < n; ++i) im = std::max(im, std::abs(work_[i].imag()));
      if (im > 1e-12 * std::max(scale, 1e-300) && im > 0.0)
        throw NumericalError("nonlinear step: E(|u|^alpha) is not real");
      for (std::size_t i = 0; i < n; ++i) pot_[i] = mp_.chi * pot_[i] + mp_.b * work_[i].real();
    } else {
      for (std::size_t i = 0; i < n; ++i) pot_[i] *= mp_.chi;
    }
    if (dealias_) {
      for (std::size_t i = 0; i < n; ++i) work_[i] = pot_[i];
      detail::fft_inplace(g_, work_, -1);
      for (std::size_t i = 0; i < n; ++i) work_[i] *= mask_[i];
      detail::fft_inplace(g_, work_, +1);
      for (std::size_t i = 0; i < n; ++i) pot_[i] = work_[i].real();
    }
    for (std::size_t i = 0; i < n; ++i) u[i] *= std::polar(1.0, -dt_ * pot_[i]);
  }

  /// Runs `steps` steps; with Strang, consecutive half steps are fused and
  /// the trailing half step is always closed before returning.
  void run(std::vector<cplx>& u, std::size_t steps, int order) {
    if (order == 1) {
      for (std::size_t s = 0; s < steps; ++s) {
        linear(u, false);
        nonlinear(u);
      }
      return;
    }
    if (steps == 0) return;
    linear(u, true);
    for (std::size_t s = 0; s < steps; ++s) {
      if (s > 0) linear(u, false);
      nonlinear(u);
    }
    linear(u, true);
  }

 private:
  GridSpec g_;
  ModelParams mp_;
  double dt_;
  bool dealias_;
  std::vector<cplx> half_, full_, work_;
  std::vector<double> sym_, mask_, pot_;
};

void check_finite_state(const std::vector<cplx>& u, std::size_t step) {
  for (const auto& z : u)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericalError("split-step: non-finite state detected at step " + std::to_string(step));
}

void check_order(int order) {
  if (order != 1 && order != 2) throw ArgumentError("split-step order must be 1 or 2");
}

}  // namespace

Field nonlinear_phase_step(const Field& f, double dt, const ModelParams& mp, bool dealias) {
  mp.validate();
  if (f.spec().dim != mp.dim) throw ArgumentError("nonlinear_phase_step: dimension mismatch");
  Stepper st(f.spec(), mp, dt, dealias);
  std::vector<cplx> u(f.samples().begin(), f.samples().end());
  st.nonlinear(u);
  return Field(f.spec(), std::move(u), f.time() + dt);
}

std::size_t integral_steps(double T, double dt, const char* where) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError(std::string(where) + ": dt must be positive");
  if (!(T >= dt)) throw ArgumentError(std::string(where) + ": T must be >= dt");
  const double r = T / dt;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, k))
    throw ArgumentError(std::string(where) + ": T/dt is not an integer");
  return std::size_t(k);
}

Trajectory split_step_evolve(const Field& u0, double T, double dt, const ModelParams& mp,
                             const SplitStepOptions& opts) {
  mp.validate();
  check_order(opts.order);
  if (u0.spec().dim != mp.dim) throw ArgumentError("split_step_evolve: dimension mismatch");
  const std::size_t steps = integral_steps(T, dt, "split_step_evolve");
  const std::size_t every = opts.store_every;
  if (every == 0 || steps % every != 0)
    throw ArgumentError("split_step_evolve: store_every must divide the step count");

  Stepper st(u0.spec(), mp, dt, opts.dealias);
  std::vector<cplx> u(u0.samples().begin(), u0.samples().end());
  std::vector<Field> slices;
  slices.reserve(steps / every + 1);
  slices.push_back(u0);
  for (std::size_t done = 0; done < steps; done += every) {
    st.run(u, every, opts.order);
    check_finite_state(u, done + every);
    slices.emplace_back(u0.spec(), u);
  }
  return Trajectory(std::move(slices), u0.time(), dt * double(every));
}

Field split_step_advance(const Field& u0, double dt, std::size_t steps, const ModelParams& mp, int order,
                         bool dealias) {
  mp.validate();
  check_order(order);
  if (!std::isfinite(dt) || dt == 0.0) throw ArgumentError("split_step_advance: dt must be finite and nonzero");
  Stepper st(u0.spec(), mp, dt, dealias);
  std::vector<cplx> u(u0.samples().begin(), u0.samples().end());
  st.run(u, steps, order);
  check_finite_state(u, steps);
  return Field(u0.spec(), std::move(u), u0.time() + dt * double(steps));
}

}  // namespace ds
