#include "dsnls/harness.hpp"

#include <fftw3.h>
#include <gsl/gsl_version.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>

#include "dsnls/csv.hpp"
#include "dsnls/duhamel.hpp"
#include "dsnls/io.hpp"
#include "dsnls/lorentz.hpp"
#include "dsnls/selfsim.hpp"
#include "dsnls/strichartz.hpp"

#ifndef DS_VERSION
#define DS_VERSION "0.0.0"
#endif

namespace ds {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json versions() {
  return {{"dsnls", DS_VERSION}, {"fftw", std::string(fftw_version)}, {"gsl", GSL_VERSION}, {"compiler", __VERSION__}};
}

struct Checks {
  json record = json::object();
  std::vector<std::string> failed;
  void add(const std::string& name, double value, bool pass) {
    record[name] = {{"value", std::isfinite(value) ? json(value) : json(format_double(value))}, {"pass", pass}};
    if (!pass) failed.push_back(name);
  }
};

void write_manifest(const std::string& dir, const std::string& command, const std::string& hash,
                    std::optional<std::uint64_t> seed, const Checks& checks, json extra, RunOutcome& out) {
  json m;
  m["command"] = command;
  m["config_hash"] = hash;
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["versions"] = versions();
  m["created_utc"] = utc_now();
  m["artifacts"] = out.artifacts;
  m["checks"] = checks.record;
  m["status"] = checks.failed.empty() ? "ok" : "failed";
  m["details"] = std::move(extra);
  const std::string path = join(dir, "manifest.json");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << m.dump(2) << '\n';
  if (!os) throw IoError("write failed: " + path);
  out.artifacts.push_back(path);
  out.failed_checks = checks.failed;
  out.exit_code = checks.failed.empty() ? 0 : 3;
}

}  // namespace

Field initial_data(const RunConfig& cfg) {
  const GridSpec& g = cfg.grid;
  switch (cfg.data) {
    case DataKind::Gaussian: {
      const double w2 = cfg.width * cfg.width;
      const int n = g.dim;
      return Field::sample(g, [&](const Vec3& x) {
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
        return cfg.eps * std::exp(-std::numbers::pi * r2 / w2);
      });
    }
    case DataKind::Homogeneous: {
      double h = 0.0;
      for (int a = 0; a < g.dim; ++a) h = std::max(h, g.spacing(a));
      const double rho = cfg.core_cutoff > 0.0 ? cfg.core_cutoff : 2.0 * h;
      return homogeneous_field({cfg.eps, cfg.model.alpha, rho}, g);
    }
    case DataKind::File: {
      Field f = read_field(cfg.path);
      if (!(f.spec() == g)) throw ConfigError("data file grid does not match the [grid] section");
      return std::move(f).with_time(0.0);
    }
  }
  throw ConfigError("unknown data kind");
}

RunOutcome run_simulate(const RunConfig& cfg, const std::string& out_dir) {
  cfg.model.validate();
  ensure_dir(out_dir);
  RunOutcome out;
  const Field u0 = initial_data(cfg);
  const Trajectory u = split_step_evolve(u0, cfg.T, cfg.dt, cfg.model, {cfg.order, cfg.store_every, false});

  const double m0 = lp_norm(u0, 2.0);
  double drift = 0.0;
  CsvTable mass({"time", "mass", "relative_drift"});
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double mj = lp_norm(u[j], 2.0);
    const double d = m0 > 0.0 ? std::abs(mj * mj - m0 * m0) / (m0 * m0) : 0.0;
    drift = std::max(drift, d);
    mass.row() << u.time(j) << mj * mj << d;
  }
  if (cfg.wants("dstrj")) {
    const auto p = join(out_dir, "trajectory.dstrj");
    write_trajectory(p, u);
    out.artifacts.push_back(p);
  }
  if (cfg.wants("csv")) {
    const auto p = join(out_dir, "mass.csv");
    mass.write(p);
    out.artifacts.push_back(p);
  }
  Checks checks;
  checks.add("mass_drift", drift, drift <= 1e-10);
  write_manifest(out_dir, "simulate", config_hash(cfg), std::nullopt, checks,
                 {{"steps", std::llround(cfg.T / cfg.dt)}, {"slices", u.size()}}, out);
  return out;
}

RunOutcome run_picard(const RunConfig& cfg, const std::string& out_dir) {
  cfg.model.validate();
  ensure_dir(out_dir);
  RunOutcome out;
  const Field u0 = initial_data(cfg);
  const auto res = picard_solve(u0, cfg.model, cfg.T, cfg.dt, cfg.max_iter, cfg.tol);
  const auto& rep = res.report;
  if (cfg.wants("csv")) {
    const auto p = join(out_dir, "picard.csv");
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + p + " for writing");
    os << rep.to_csv();
    out.artifacts.push_back(p);
  }
  if (cfg.wants("dstrj")) {
    const auto p = join(out_dir, "trajectory.dstrj");
    write_trajectory(p, res.solution);
    out.artifacts.push_back(p);
  }
  Checks checks;
  checks.add("converged", rep.converged ? 1.0 : 0.0, rep.converged);
  const double resid = std::max(rep.residual_weak, rep.residual_l2);
  checks.add("fixed_point_residual", resid, !rep.converged || resid < 2.0 * cfg.tol);
  write_manifest(out_dir, "picard", config_hash(cfg), std::nullopt, checks,
                 {{"iterates", rep.iterates},
                  {"contraction_ratio", rep.contraction_ratio},
                  {"ball_ratio", rep.ball_ratio},
                  {"weak_exponent", rep.weak_exponent}},
                 out);
  return out;
}

std::string SelfsimOptions::canonical() const {
  std::string s = "alpha=" + format_double(alpha) + "\neps=" + format_double(eps) + "\nn=" + std::to_string(n) +
                  "\nN=" + std::to_string(N) + "\nL=" + format_double(L) + "\nbetas=";
  for (double b : betas) s += format_double(b) + ",";
  return s + "\n";
}

RunOutcome run_selfsim(const SelfsimOptions& o) {
  ModelParams mp;
  mp.alpha = o.alpha;
  mp.dim = o.n;
  mp.validate();
  if (!(o.eps > 0.0)) throw ConfigError("eps must be positive");
  if (o.betas.empty()) throw ConfigError("at least one beta is required");
  for (double b : o.betas)
    if (!(b > 0.0)) throw ConfigError("beta values must be positive");
  ensure_dir(o.out_dir);
  RunOutcome out;
  Checks checks;

  // Nonlinear run from capped homogeneous data. Slices every 0.01; the
  // window covers beta^2 t for the largest requested beta at t = 0.05.
  const std::size_t N = o.N ? o.N : (o.n == 2 ? 128 : 32);
  const double L = o.L > 0.0 ? o.L : (o.n == 2 ? 32.0 : 16.0);
  const GridSpec g = GridSpec::cube(o.n, N, L);
  const Field u0 = homogeneous_field({o.eps, o.alpha, 2.0 * g.spacing(0)}, g);
  double bmax = 1.0;
  for (double b : o.betas) bmax = std::max(bmax, b);
  const double slice_dt = 0.01;
  const auto slices = std::size_t(std::ceil(5.0 * bmax * bmax - 1e-9));
  const Trajectory u = split_step_evolve(u0, slice_dt * double(slices), slice_dt / 4.0, mp, {2, 4, false});

  CsvTable res({"beta", "time", "residual"});
  for (double b : o.betas) {
    for (const auto& s : scaling_residual_series(u, b, o.alpha)) {
      res.row() << b << s.time << s.residual;
      if (b == 1.0) checks.add("beta1_residual_zero", s.residual, s.residual == 0.0);
    }
  }
  const auto rp = join(o.out_dir, "residual.csv");
  res.write(rp);
  out.artifacts.push_back(rp);

  // Profile u(., 1) from the explicit series on a wide grid.
  SeriesParams sp;
  sp.n = o.n;
  sp.p = 2.0 / o.alpha;
  const GridSpec wide = GridSpec::cube(o.n, o.n == 2 ? 256 : 128, 256.0);
  const double sigma = profile_decay_fit(cw_field(wide, 1.0, sp), o.alpha, o.n);
  const double sigma_pred = predicted_sigma(o.alpha, o.n);
  CsvTable fit({"sigma_hat", "sigma_predicted"});
  fit.row() << sigma << sigma_pred;
  const auto fp = join(o.out_dir, "fit.csv");
  fit.write(fp);
  out.artifacts.push_back(fp);
  checks.add("sigma_finite", sigma, std::isfinite(sigma));

  // Space-time distribution of the free evolution of synthesized data.
  const GridSpec dg = GridSpec::cube(o.n, o.n == 2 ? 128 : 32, o.n == 2 ? 40.0 : 20.0);
  const double nyq = double(dg.points[0]) / (2.0 * dg.length[0]);
  const Field d0 = spectral_homogeneous_field(dg, 2.0 / o.alpha, o.eps, {0.5 * nyq, 0.9 * nyq}, dg.length[0] / 4.0);
  const double T = o.n == 2 ? 4.0 : 2.0;
  const std::size_t J = o.n == 2 ? 100 : 50;
  const auto drep = distribution_bound_check(free_trajectory(d0, T / double(J), J, 1.0), o.alpha, o.n);
  CsvTable dist({"lambda", "distribution", "bound"});
  for (std::size_t k = 0; k < drep.lambdas.size(); ++k) dist.row() << drep.lambdas[k] << drep.distribution[k] << drep.bound[k];
  const auto dp = join(o.out_dir, "distribution.csv");
  dist.write(dp);
  out.artifacts.push_back(dp);
  checks.add("distribution_fit_finite", drep.fitted_exponent, std::isfinite(drep.fitted_exponent));

  write_manifest(o.out_dir, "selfsim", fnv1a_hex(o.canonical()), std::nullopt, checks,
                 {{"fitted_exponent", drep.fitted_exponent},
                  {"target_exponent", drep.target_exponent},
                  {"lambda_flags", drep.flags},
                  {"sigma_hat", sigma},
                  {"sigma_predicted", sigma_pred}},
                 out);
  return out;
}

std::string StrichartzOptions::canonical() const {
  std::string s = "n=" + std::to_string(n) + "\nseed=" + std::to_string(seed) + "\nsamples=" + std::to_string(samples) +
                  "\nN=" + std::to_string(N) + "\nbetas=";
  for (double b : betas) s += format_double(b) + ",";
  return s + "\n";
}

RunOutcome run_strichartz(const StrichartzOptions& o) {
  if (o.n != 2 && o.n != 3) throw ConfigError("n must be 2 or 3");
  if (o.samples == 0) throw ConfigError("samples must be positive");
  ensure_dir(o.out_dir);
  RunOutcome out;
  StrichartzConfig cfg;
  cfg.grid = GridSpec::cube(o.n, o.N ? o.N : (o.n == 2 ? 256 : 64), 24.0);
  cfg.betas = o.betas;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  // Diagonal pair q = r = 4 with qt' = rt' = p, where 1/p = 1/r + 2/(n+2).
  const double dual = 1.0 / (1.0 - 0.25 - 2.0 / (o.n + 2.0));
  const ExponentQuad quad{4.0, 4.0, dual, dual, o.n};
  const auto rep = strichartz_ratio_sweep(quad, cfg);
  const auto p = join(o.out_dir, "strichartz.csv");
  {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + p + " for writing");
    os << rep.to_csv();
    if (!os) throw IoError("write failed: " + p);
  }
  out.artifacts.push_back(p);
  Checks checks;
  checks.add("ratios_finite", double(rep.rows.size() - rep.skipped), rep.skipped < rep.rows.size());
  write_manifest(o.out_dir, "strichartz", fnv1a_hex(o.canonical()), o.seed, checks,
                 {{"spread_G", rep.spread_G}, {"spread_TTstar", rep.spread_TT}, {"skipped", rep.skipped}}, out);
  return out;
}

std::string run_norms(const NormsOptions& o) {
  if (std::isnan(o.p) || o.p < 1.0) throw ArgumentError("--p must be >= 1");
  CsvTable t({"norm_name", "p", "q", "r", "value"});
  if (sniff_file(o.input) == FileKind::Field) {
    const Field f = read_field(o.input);
    t.row() << "lp" << o.p << "" << "" << lp_norm(f, o.p);
    t.row() << "weak_lp" << o.p << "" << "" << weak_lp_norm(f, o.p);
  } else {
    const Trajectory u = read_trajectory(o.input);
    t.row() << "weak_spacetime" << o.p << "" << "" << weak_spacetime_norm(u, o.p);
    if (o.q || o.r) {
      const double q = o.q.value_or(o.p), r = o.r.value_or(o.p);
      t.row() << "mixed" << "" << format_double(q) << format_double(r) << mixed_norm(u, q, r);
    }
  }
  return t.str();
}

std::string error_record(const Error& e) {
  json j{{"error", kind_name(e.kind())}, {"exit_code", exit_code(e.kind())}, {"message", e.what()}};
  return j.dump();
}

}  // namespace ds
