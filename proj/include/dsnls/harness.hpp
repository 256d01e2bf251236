#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsnls/config.hpp"
#include "dsnls/errors.hpp"
#include "dsnls/fields.hpp"

namespace ds {

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> artifacts;      // paths written, manifest last
  std::vector<std::string> failed_checks;  // consistency checks that did not pass
};

Field initial_data(const RunConfig& cfg);

/// Split-step run: trajectory.dstrj, mass.csv, manifest.json.
RunOutcome run_simulate(const RunConfig& cfg, const std::string& out_dir);
/// Picard run: picard.csv, trajectory.dstrj, manifest.json. Divergence exits 3.
RunOutcome run_picard(const RunConfig& cfg, const std::string& out_dir);

struct SelfsimOptions {
  double alpha = 2.0;
  double eps = 0.01;
  int n = 2;
  std::vector<double> betas{1.0, 2.0};
  std::size_t N = 0;  // 0: 128 for n = 2, 32 for n = 3
  double L = 0.0;     // 0: 32 for n = 2, 16 for n = 3
  std::string out_dir = "ds_out";
  std::string canonical() const;
};

/// residual.csv (beta,time,residual), fit.csv (sigma_hat,sigma_predicted),
/// distribution.csv (lambda,distribution,bound) and manifest.json.
RunOutcome run_selfsim(const SelfsimOptions& opts);

struct StrichartzOptions {
  int n = 2;
  std::uint64_t seed = 1;
  std::size_t samples = 1;
  std::vector<double> betas{0.25, 0.5, 1.0, 2.0, 4.0};
  std::size_t N = 0;  // 0: 256 for n = 2, 64 for n = 3
  std::string out_dir = "ds_out";
  std::string canonical() const;
};

/// strichartz.csv and manifest.json.
RunOutcome run_strichartz(const StrichartzOptions& opts);

struct NormsOptions {
  std::string input;
  double p = 2.0;
  std::optional<double> q, r;
};

/// CSV (norm_name,p,q,r,value) for a DSFLD1 or DSTRJ1 file.
std::string run_norms(const NormsOptions& opts);

/// One-line JSON error record: {"error": kind, "exit_code": n, "message": ...}.
std::string error_record(const Error& e);

}  // namespace ds
