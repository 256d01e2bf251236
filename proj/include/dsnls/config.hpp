#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsnls/grid.hpp"
#include "dsnls/propagator.hpp"

namespace ds {

enum class DataKind { Gaussian, Homogeneous, File };

struct RunConfig {
  ModelParams model;
  GridSpec grid = GridSpec::cube(2, 128, 20.0);
  double T = 1.0;
  double dt = 1.0 / 128.0;
  std::size_t store_every = 1;
  int order = 2;
  DataKind data = DataKind::Gaussian;
  double eps = 1.0;
  double width = 1.0;        // gaussian: eps e^{-pi |x|^2 / width^2}
  double core_cutoff = 0.0;  // homogeneous: 0 selects two grid spacings
  std::string path;          // file: DSFLD1 input
  std::size_t max_iter = 50;
  double tol = 1e-10;
  std::string out_dir = "ds_out";
  std::vector<std::string> formats{"csv", "dstrj"};

  /// Every violated constraint, one message each.
  std::vector<std::string> violations() const;
  /// Canonical text form; the manifest hash is computed from it.
  std::string canonical() const;
  bool wants(const std::string& fmt) const;
};

/// Flat INI: `[section]` headers, `key = value` lines, `#` or `;` comments.
/// Throws ConfigError listing every problem (syntax errors with line numbers,
/// unknown keys by name, then semantic violations).
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// 64-bit FNV-1a of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace ds
