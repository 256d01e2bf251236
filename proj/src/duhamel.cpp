#include "dsnls/duhamel.hpp"

#include <algorithm>

#include "dsnls/csv.hpp"
#include "dsnls/errors.hpp"
#include "dsnls/lorentz.hpp"

namespace ds {

namespace {

std::vector<double> psi_table(const GridSpec& g, double delta) {
  std::vector<double> psi(g.size());
  detail::for_each_mode(g, [&](std::size_t i, double a, double b, double c) {
    psi[i] = dispersion_symbol(a, b, c, delta);
  });
  return psi;
}

void require_nonempty(const Trajectory& F, const char* where) {
  if (F.empty()) throw ArgumentError(std::string(where) + ": empty trajectory");
}

}  // namespace

Trajectory duhamel_G(const Trajectory& F, double delta) {
  require_nonempty(F, "duhamel_G");
  if (std::abs(F.t0()) > 1e-15) throw ArgumentError("duhamel_G: forcing must start at t = 0");
  const GridSpec& g = F.spec();
  const double dt = F.dt();
  const auto psi = psi_table(g, delta);
  std::vector<cplx> ph(g.size());
  for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -dt * psi[i]);

  std::vector<cplx> G(g.size(), 0.0);
  std::vector<cplx> prev = detail::raw_spectrum(F[0]);
  std::vector<Field> out;
  out.reserve(F.size());
  out.push_back(Field::zeros(g));
  for (std::size_t j = 1; j < F.size(); ++j) {
    std::vector<cplx> next = detail::raw_spectrum(F[j]);
    for (std::size_t i = 0; i < G.size(); ++i) G[i] = ph[i] * (G[i] + 0.5 * dt * prev[i]) + 0.5 * dt * next[i];
    out.push_back(detail::from_raw_spectrum(g, G, 0.0));
    prev = std::move(next);
  }
  return Trajectory(std::move(out), F.t0(), dt);
}

Trajectory tt_star(const Trajectory& F, double delta) {
  require_nonempty(F, "tt_star");
  const GridSpec& g = F.spec();
  const auto psi = psi_table(g, delta);
  const std::size_t J = F.size();
  std::vector<cplx> S(g.size(), 0.0);
  for (std::size_t k = 0; k < J; ++k) {
    const double w = J == 1 ? F.dt() : ((k == 0 || k + 1 == J) ? 0.5 : 1.0) * F.dt();
    const double tk = F.time(k);
    const auto fk = detail::raw_spectrum(F[k]);
    for (std::size_t i = 0; i < S.size(); ++i) S[i] += w * std::polar(1.0, tk * psi[i]) * fk[i];
  }
  std::vector<Field> out;
  out.reserve(J);
  std::vector<cplx> buf(g.size());
  for (std::size_t j = 0; j < J; ++j) {
    const double tj = F.time(j);
    for (std::size_t i = 0; i < S.size(); ++i) buf[i] = std::polar(1.0, -tj * psi[i]) * S[i];
    out.push_back(detail::from_raw_spectrum(g, buf, tj));
  }
  return Trajectory(std::move(out), F.t0(), F.dt());
}

Field nonlinearity(const Field& u, const ModelParams& mp) {
  if (mp.is_linear()) return Field::zeros(u.spec(), u.time());
  std::vector<cplx> pa(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) pa[i] = std::pow(std::abs(u[i]), mp.alpha);
  Field pot(u.spec(), std::move(pa), u.time());
  std::vector<cplx> v(u.size());
  if (mp.b != 0.0) {
    const Field e = apply_E(pot, mp.multiplier());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (mp.chi * pot[i].real() + mp.b * e[i].real()) * u[i];
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mp.chi * pot[i].real() * u[i];
  }
  return Field(u.spec(), std::move(v), u.time());
}

Trajectory nonlinearity(const Trajectory& u, const ModelParams& mp) {
  require_nonempty(u, "nonlinearity");
  std::vector<Field> out;
  out.reserve(u.size());
  for (const auto& s : u.slices()) out.push_back(nonlinearity(s, mp));
  return Trajectory(std::move(out), u.t0(), u.dt());
}

Trajectory free_trajectory(const Field& u0, double dt, std::size_t steps, double delta) {
  const GridSpec& g = u0.spec();
  const auto psi = psi_table(g, delta);
  const auto c = detail::raw_spectrum(u0);
  std::vector<Field> out;
  out.reserve(steps + 1);
  std::vector<cplx> buf(g.size());
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = double(j) * dt;
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = std::polar(1.0, -t * psi[i]) * c[i];
    out.push_back(detail::from_raw_spectrum(g, buf, t));
  }
  return Trajectory(std::move(out), 0.0, dt);
}

namespace {

Trajectory combine(const Trajectory& free, const Trajectory& G) {
  std::vector<Field> out;
  out.reserve(free.size());
  for (std::size_t j = 0; j < free.size(); ++j) {
    std::vector<cplx> v(free[j].size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = free[j][i] - cplx(0.0, 1.0) * G[j][i];
    out.emplace_back(free.spec(), std::move(v));
  }
  return Trajectory(std::move(out), free.t0(), free.dt());
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  std::vector<Field> out;
  out.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back(a[j] - b[j]);
  return Trajectory(std::move(out), a.t0(), a.dt());
}

}  // namespace

Trajectory picard_map(const Field& u0, const Trajectory& u, const ModelParams& mp) {
  const Trajectory free = free_trajectory(u0, u.dt(), u.size() - 1, mp.delta);
  if (mp.is_linear()) return free;
  return combine(free, duhamel_G(nonlinearity(u, mp), mp.delta));
}

double geometric_fit_ratio(const std::vector<double>& d) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] > 0.0 && std::isfinite(d[k])) pts.emplace_back(double(k), std::log(d[k]));
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp(slope);
}

PicardResult picard_solve(const Field& u0, const ModelParams& mp, double T, double dt, std::size_t max_iter,
                          double tol) {
  mp.validate();
  if (u0.spec().dim != mp.dim) throw ArgumentError("picard_solve: dimension mismatch");
  if (max_iter == 0) throw ArgumentError("picard_solve: max_iter must be positive");
  if (!(tol > 0.0)) throw ArgumentError("picard_solve: tol must be positive");
  const std::size_t steps = integral_steps(T, dt, "picard_solve");
  const double p = mp.critical_exponent();

  const Trajectory free = free_trajectory(u0, dt, steps, mp.delta);
  const double free_weak = weak_spacetime_norm(free, p);

  PicardReport rep;
  rep.weak_exponent = p;
  Trajectory u = free;
  double ball = free_weak > 0.0 ? 1.0 : 0.0;
  auto phi = [&](const Trajectory& w, std::size_t k) {
    try {
      if (mp.is_linear()) return free;
      return combine(free, duhamel_G(nonlinearity(w, mp), mp.delta));
    } catch (const NumericalError& e) {
      throw NumericalError("picard_solve: iterate " + std::to_string(k) + ": " + e.what());
    }
  };

  for (std::size_t k = 1; k <= max_iter; ++k) {
    Trajectory next = phi(u, k);
    const Trajectory d = difference(next, u);
    const double dw = weak_spacetime_norm(d, p);
    const double dl = sup_l2_distance(next, u);
    rep.weak_distances.push_back(dw);
    rep.l2_distances.push_back(dl);
    rep.iterates = k;
    if (free_weak > 0.0) ball = std::max(ball, weak_spacetime_norm(next, p) / free_weak);
    u = std::move(next);
    if (!std::isfinite(dw) || !std::isfinite(dl))
      throw NumericalError("picard_solve: non-finite distance at iterate " + std::to_string(k));
    if (dw < tol && dl < tol) {
      rep.converged = true;
      break;
    }
  }
  rep.ball_ratio = ball;
  rep.contraction_ratio = geometric_fit_ratio(rep.l2_distances);
  const Trajectory check = phi(u, rep.iterates + 1);
  rep.residual_weak = weak_spacetime_norm(difference(check, u), p);
  rep.residual_l2 = sup_l2_distance(check, u);
  return {std::move(u), std::move(rep)};
}

std::string PicardReport::to_csv() const {
  CsvTable t({"iter", "weak_dist", "l2_dist"});
  for (std::size_t k = 0; k < weak_distances.size(); ++k)
    t.row() << (k + 1) << weak_distances[k] << l2_distances[k];
  return t.str();
}

ScatteringResult scattering_limits(const Trajectory& u, const ModelParams& mp) {
  require_nonempty(u, "scattering_limits");
  const GridSpec& g = u.spec();
  const auto psi = psi_table(g, mp.delta);
  const std::size_t J = u.size();
  std::vector<cplx> acc = detail::raw_spectrum(u[0]);
  for (std::size_t k = 0; k < J && J > 1 && !mp.is_linear(); ++k) {
    const double w = ((k == 0 || k + 1 == J) ? 0.5 : 1.0) * u.dt();
    const double tk = u.time(k) - u.t0();
    const auto nk = detail::raw_spectrum(nonlinearity(u[k], mp));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= cplx(0.0, w) * std::polar(1.0, tk * psi[i]) * nk[i];
  }
  ScatteringResult r{detail::from_raw_spectrum(g, std::move(acc), u.t0()), 0.0};
  const std::size_t last = J - 1, half = last / 2;
  const Field vT = free_evolve(u[last], -(u.time(last) - u.t0()), mp.delta);
  const Field vH = free_evolve(u[half], -(u.time(half) - u.t0()), mp.delta);
  r.tail = lp_norm(vT - vH, 2.0);
  return r;
}

double pde_residual(const Trajectory& u, const ModelParams& mp) {
  if (u.size() < 3) throw ArgumentError("pde_residual: need at least three slices");
  const GridSpec& g = u.spec();
  const double delta = mp.delta;
  double worst = 0.0, ref = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) ref = std::max(ref, lp_norm(u[j], 2.0));
  for (std::size_t j = 1; j + 1 < u.size(); ++j) {
    const Field lap = apply_multiplier(u[j], [delta](double a, double b, double c) {
      return cplx(-dispersion_symbol(a, b, c, delta));
    });
    const Field nl = nonlinearity(u[j], mp);
    std::vector<cplx> r(g.size());
    const cplx coef(0.0, 1.0 / (2.0 * u.dt()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coef * (u[j + 1][i] - u[j - 1][i]) + lap[i] - nl[i];
    worst = std::max(worst, lp_norm(r, g.cell_volume(), 2.0));
  }
  return ref > 0.0 ? worst / ref : worst;
}

}  // namespace ds
