// Command line front end: simulate, picard, selfsim, strichartz, norms.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "dsnls/harness.hpp"

namespace {

int report(const ds::RunOutcome& out) {
  for (const auto& a : out.artifacts) std::cout << a << '\n';
  for (const auto& c : out.failed_checks) std::cerr << "check failed: " << c << '\n';
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Davey-Stewartson nonlocal NLS simulator and verification toolkit"};
  app.require_subcommand(1);

  std::string config, out_dir;
  auto* sim = app.add_subcommand("simulate", "split-step run from a config file");
  sim->add_option("--config", config, "INI run configuration")->required();
  sim->add_option("--out", out_dir, "output directory (overrides [output] dir)");

  auto* pic = app.add_subcommand("picard", "Picard fixed-point solve from a config file");
  pic->add_option("--config", config, "INI run configuration")->required();
  pic->add_option("--out", out_dir, "output directory (overrides [output] dir)");

  ds::SelfsimOptions so;
  auto* ss = app.add_subcommand("selfsim", "self-similar scaling, decay fit and distribution bound");
  ss->add_option("--alpha", so.alpha, "nonlinearity exponent")->required();
  ss->add_option("--eps", so.eps, "data amplitude")->required();
  ss->add_option("--n", so.n, "dimension (2 or 3)")->required();
  ss->add_option("--beta", so.betas, "scaling factors (repeatable)");
  ss->add_option("--N", so.N, "points per axis of the nonlinear run");
  ss->add_option("--L", so.L, "box length of the nonlinear run");
  ss->add_option("--out", so.out_dir, "output directory");

  ds::StrichartzOptions st;
  auto* sc = app.add_subcommand("strichartz", "Strichartz constant-stability sweep");
  sc->add_option("--n", st.n, "dimension (2 or 3)")->required();
  sc->add_option("--seed", st.seed, "random seed")->required();
  sc->add_option("--samples", st.samples, "forcings per scale")->required();
  sc->add_option("--beta", st.betas, "scales (repeatable)");
  sc->add_option("--N", st.N, "points per axis");
  sc->add_option("--out", st.out_dir, "output directory");

  ds::NormsOptions no;
  double q = 0.0, r = 0.0;
  std::string norms_out;
  auto* nm = app.add_subcommand("norms", "norms of a DSFLD1 field or DSTRJ1 trajectory");
  nm->add_option("--input", no.input, "field or trajectory file")->required();
  nm->add_option("--p", no.p, "Lebesgue / weak exponent")->required();
  auto* qo = nm->add_option("--q", q, "time exponent of the mixed norm");
  auto* ro = nm->add_option("--r", r, "space exponent of the mixed norm");
  nm->add_option("--out", norms_out, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed() || pic->parsed()) {
      ds::RunConfig cfg = ds::load_config(config);
      const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
      return report(sim->parsed() ? ds::run_simulate(cfg, dir) : ds::run_picard(cfg, dir));
    }
    if (ss->parsed()) return report(ds::run_selfsim(so));
    if (sc->parsed()) return report(ds::run_strichartz(st));
    if (nm->parsed()) {
      if (qo->count()) no.q = q;
      if (ro->count()) no.r = r;
      const std::string csv = ds::run_norms(no);
      if (norms_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream os(norms_out, std::ios::binary | std::ios::trunc);
        if (!os) throw ds::IoError("cannot open " + norms_out + " for writing");
        os << csv;
      }
      return 0;
    }
  } catch (const ds::Error& e) {
    std::cerr << ds::error_record(e) << '\n';
    return ds::exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << R"({"error":"numerical","exit_code":3,"message":"out of memory"})" << '\n';
    return 3;
  }
  return 0;
}
