#include "dsnls/strichartz.hpp"

#include <algorithm>
#include <numbers>
#include <random>

#include "dsnls/csv.hpp"
#include "dsnls/duhamel.hpp"
#include "dsnls/errors.hpp"
#include "dsnls/lorentz.hpp"
#include "dsnls/parallel.hpp"

namespace ds {

namespace {
double inv(double e) { return std::isinf(e) ? 0.0 : 1.0 / e; }
}  // namespace

Admissibility is_admissible(const ExponentQuad& e) {
  Admissibility a;
  const auto fail = [&](std::string why) {
    a.admissible = false;
    a.violated.push_back(std::move(why));
  };
  const int n = e.n;
  if (n < 2) fail("n must be at least 2");
  if (!(e.q > 1.0) || !(e.qt > 1.0)) fail("q and qt must exceed 1");
  if (!(e.r > 2.0) || !(e.rt > 2.0)) fail("2 < r, rt <= inf");

  const double ir = inv(e.r), iq = inv(e.q);
  const double irtp = 1.0 - inv(e.rt);  // 1/rt'
  const double iqtp = 1.0 - inv(e.qt);  // 1/qt'
  if (!(irtp - ir < 2.0 / n)) fail("1/rt' - 1/r < 2/n");
  if (std::abs(iqtp - iq + 0.5 * n * (irtp - ir) - 1.0) > 1e-12) fail("1/qt' - 1/q + (n/2)(1/rt' - 1/r) = 1");
  if (n == 2) {
    if (std::isinf(e.r) || std::isinf(e.rt)) fail("r, rt != inf if n = 2");
  } else {
    const double lo = (n - 2.0) / n * (1.0 - irtp), hi = n / (n - 2.0) * (1.0 - irtp);
    if (!(lo <= ir && ir <= hi)) fail("(n-2)/n (1 - 1/rt') <= 1/r <= n/(n-2) (1 - 1/rt')");
  }
  const double s = irtp + ir;
  if (s >= 1.0) {
    if (!(0.0 < iq && iq <= iqtp && iqtp < 1.0 - 0.5 * n * (s - 1.0)))
      fail("0 < 1/q <= 1/qt' < 1 - (n/2)(1/rt' + 1/r - 1) when 1/rt' + 1/r >= 1");
  } else {
    if (!(-0.5 * n * (s - 1.0) < iq && iq <= iqtp && iqtp < 1.0))
      fail("-(n/2)(1/rt' + 1/r - 1) < 1/q <= 1/qt' < 1 when 1/rt' + 1/r < 1");
  }
  return a;
}

Prop3Window prop3_window(double r, int n) {
  Prop3Window w;
  w.lo = 2.0 * (n + 1.0) / n;
  w.hi = 2.0 * (n + 1.0) * (n + 2.0) / (double(n) * n);
  w.inside = r > w.lo && r < w.hi;
  const double ip = inv(r) + 2.0 / (n + 2.0);
  w.p = 1.0 / ip;
  return w;
}

Trajectory strichartz_forcing(const StrichartzConfig& cfg, std::size_t sample, double beta) {
  const GridSpec& g = cfg.grid;
  g.validate();
  if (!(beta > 0.0)) throw ArgumentError("strichartz_forcing: beta must be positive");
  if (cfg.slices < 2 || cfg.modes < 1) throw ArgumentError("strichartz_forcing: need slices >= 2 and modes >= 1");
  const int n = g.dim;

  // One generator stream for the whole family; sample k consumes its draws
  // after samples 0..k-1 so any sample is reproducible in isolation.
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::array<double, 3>> kv(std::size_t(cfg.modes));
  std::vector<cplx> cv(std::size_t(cfg.modes));
  for (std::size_t s = 0; s <= sample; ++s)
    for (int m = 0; m < cfg.modes; ++m) {
      kv[m] = {0.0, 0.0, 0.0};
      for (int a = 0; a < n; ++a) kv[m][a] = cfg.kband * normal(rng);
      const double re = normal(rng);
      cv[m] = cplx(re, normal(rng));
    }

  // Separable per-axis factors e^{-pi (beta x)^2 / w^2} e^{2 pi i k beta x}.
  constexpr double pi = std::numbers::pi;
  const auto xs = coordinate_tables(g);
  std::vector<std::array<std::vector<cplx>, 3>> fac(std::size_t(cfg.modes));
  for (int m = 0; m < cfg.modes; ++m)
    for (int a = 0; a < 3; ++a) {
      fac[m][a].assign(g.points[a], 1.0);
      if (a >= n) continue;
      for (std::size_t j = 0; j < g.points[a]; ++j) {
        const double bx = beta * xs[a][j];
        fac[m][a][j] = std::exp(-pi * bx * bx / (cfg.width * cfg.width)) * std::polar(1.0, 2.0 * pi * kv[m][a] * bx);
      }
    }
  std::vector<cplx> base(g.size(), 0.0);
  for (int m = 0; m < cfg.modes; ++m) {
    std::size_t idx = 0;
    for (std::size_t i0 = 0; i0 < g.points[0]; ++i0)
      for (std::size_t i1 = 0; i1 < g.points[1]; ++i1) {
        const cplx c01 = cfg.amplitude * cv[m] * fac[m][0][i0] * fac[m][1][i1];
        for (std::size_t i2 = 0; i2 < g.points[2]; ++i2, ++idx) base[idx] += c01 * fac[m][2][i2];
      }
  }

  const double T = cfg.window * cfg.tau / (beta * beta);
  const double dt = T / double(cfg.slices);
  std::vector<Field> out;
  out.reserve(cfg.slices + 1);
  for (std::size_t j = 0; j <= cfg.slices; ++j) {
    const double s = beta * beta * double(j) * dt;
    double prof = 0.0;
    if (s > 0.0 && s < cfg.tau) prof = std::pow(std::sin(pi * s / cfg.tau), 2);
    std::vector<cplx> v(g.size());
    if (prof != 0.0)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = prof * base[i];
    out.emplace_back(g, std::move(v));
  }
  return Trajectory(std::move(out), 0.0, dt);
}

StrichartzReport strichartz_ratio_sweep(const ExponentQuad& e, const StrichartzConfig& cfg) {
  const auto adm = is_admissible(e);
  if (!adm.admissible) throw ArgumentError("strichartz_ratio_sweep: inadmissible quad: " + adm.violated.front());
  if (cfg.grid.dim != e.n) throw ArgumentError("strichartz_ratio_sweep: grid dimension differs from the quad");
  if (cfg.betas.empty() || cfg.samples == 0) throw ArgumentError("strichartz_ratio_sweep: empty sweep");

  StrichartzReport rep;
  rep.quad = e;
  rep.seed = cfg.seed;
  // Rows are independent; each worker fills its own slot.
  std::vector<std::pair<std::size_t, double>> jobs;
  for (std::size_t s = 0; s < cfg.samples; ++s)
    for (double beta : cfg.betas) jobs.emplace_back(s, beta);
  rep.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const auto [s, beta] = jobs[k];
    const Trajectory F = strichartz_forcing(cfg, s, beta);
    const double nf = mixed_norm(F, e.qt_dual(), e.rt_dual());
    StrichartzRow row{beta, s, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                      nf == 0.0};
    if (!row.skipped) {
      row.ratio_G = mixed_norm(duhamel_G(F, cfg.delta), e.q, e.r) / nf;
      row.ratio_TT = mixed_norm(tt_star(F, cfg.delta), e.q, e.r) / nf;
    }
    rep.rows[k] = row;
  });
  double gmin = kInf, gmax = 0.0, tmin = kInf, tmax = 0.0;
  for (const auto& row : rep.rows) {
    if (row.skipped) {
      ++rep.skipped;
      continue;
    }
    gmin = std::min(gmin, row.ratio_G);
    gmax = std::max(gmax, row.ratio_G);
    tmin = std::min(tmin, row.ratio_TT);
    tmax = std::max(tmax, row.ratio_TT);
  }
  const bool any = rep.skipped < rep.rows.size();
  rep.spread_G = any ? gmax / gmin : std::numeric_limits<double>::quiet_NaN();
  rep.spread_TT = any ? tmax / tmin : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

std::string StrichartzReport::to_csv() const {
  CsvTable t({"q", "r", "qt", "rt", "beta", "sample", "ratio_G", "ratio_TTstar"});
  for (const auto& row : rows) {
    auto r = t.row();
    r << quad.q << quad.r << quad.qt << quad.rt << row.beta << row.sample;
    if (row.skipped)
      r << "skipped" << "skipped";
    else
      r << row.ratio_G << row.ratio_TT;
  }
  return t.str();
}

}  // namespace ds
