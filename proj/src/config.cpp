#include "dsnls/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dsnls/csv.hpp"
#include "dsnls/errors.hpp"

namespace ds {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool to_double(const std::string& s, double& out) {
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool to_size(const std::string& s, std::size_t& out) {
  const auto* end = s.data() + s.size();
  unsigned long long v = 0;
  const auto res = std::from_chars(s.data(), end, v);
  out = std::size_t(v);
  return res.ec == std::errc() && res.ptr == end;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"model", {"delta", "chi", "b", "m", "alpha", "n"}},
      {"grid", {"N", "L"}},
      {"time", {"T", "dt", "store_every", "order"}},
      {"data", {"kind", "eps", "width", "core_cutoff", "path"}},
      {"picard", {"max_iter", "tol"}},
      {"output", {"dir", "formats"}},
  };
  return s;
}

}  // namespace

std::vector<std::string> RunConfig::violations() const {
  auto v = model.violations();
  if (grid.dim != model.dim) v.push_back("grid dimension must equal model n");
  try {
    grid.validate();
  } catch (const ConfigError& e) {
    v.push_back(e.what());
  }
  if (!(dt > 0.0)) v.push_back("dt must be positive");
  if (!(T >= dt)) v.push_back("T must be at least dt");
  if (dt > 0.0 && T >= dt) {
    const double r = T / dt;
    if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r)) v.push_back("T/dt must be an integer");
    else if (store_every == 0 || std::size_t(std::llround(r)) % store_every != 0)
      v.push_back("store_every must divide T/dt");
  }
  if (order != 1 && order != 2) v.push_back("order must be 1 or 2");
  if (!(eps >= 0.0)) v.push_back("eps must be nonnegative");
  if (!(width > 0.0)) v.push_back("width must be positive");
  if (data == DataKind::Homogeneous && !(2.0 / model.alpha < model.dim))
    v.push_back("homogeneous data needs 2/alpha < n");
  if (data == DataKind::File && path.empty()) v.push_back("data kind file needs a path");
  if (max_iter == 0) v.push_back("max_iter must be positive");
  if (!(tol > 0.0)) v.push_back("tol must be positive");
  for (const auto& f : formats)
    if (f != "csv" && f != "dstrj") v.push_back("unknown output format '" + f + "'");
  return v;
}

bool RunConfig::wants(const std::string& fmt) const {
  return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

std::string RunConfig::canonical() const {
  std::string s;
  const auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + "=" + v + "\n"; };
  kv("model.delta", format_double(model.delta));
  kv("model.chi", format_double(model.chi));
  kv("model.b", format_double(model.b));
  kv("model.m", format_double(model.m));
  kv("model.alpha", format_double(model.alpha));
  kv("model.n", std::to_string(model.dim));
  std::string ns, ls;
  for (int a = 0; a < grid.dim; ++a) {
    ns += (a ? "," : "") + std::to_string(grid.points[a]);
    ls += (a ? "," : "") + format_double(grid.length[a]);
  }
  kv("grid.N", ns);
  kv("grid.L", ls);
  kv("time.T", format_double(T));
  kv("time.dt", format_double(dt));
  kv("time.store_every", std::to_string(store_every));
  kv("time.order", std::to_string(order));
  kv("data.kind", data == DataKind::Gaussian ? "gaussian" : data == DataKind::Homogeneous ? "homogeneous" : "file");
  kv("data.eps", format_double(eps));
  kv("data.width", format_double(width));
  kv("data.core_cutoff", format_double(core_cutoff));
  kv("data.path", path);
  kv("picard.max_iter", std::to_string(max_iter));
  kv("picard.tol", format_double(tol));
  kv("output.dir", out_dir);
  std::string f;
  for (std::size_t i = 0; i < formats.size(); ++i) f += (i ? "," : "") + formats[i];
  kv("output.formats", f);
  return s;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::vector<std::string> errs;
  std::vector<std::string> n_list, l_list;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::set<std::string> seen;

  const auto err = [&](const std::string& msg) { errs.push_back(source + ":" + std::to_string(lineno) + ": " + msg); };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto c = line.find_first_of("#;");
    if (c != std::string::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        err("malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) err("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      err("expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (section.empty()) {
      err("key '" + key + "' appears before any section");
      continue;
    }
    const auto sit = schema().find(section);
    if (sit == schema().end()) continue;  // already reported
    if (!sit->second.count(key)) {
      err("unknown key '" + key + "' in [" + section + "]");
      continue;
    }
    if (!seen.insert(section + "." + key).second) err("duplicate key '" + key + "' in [" + section + "]");

    const auto num = [&](double& out) {
      if (!to_double(val, out)) err("'" + key + "' expects a number, got '" + val + "'");
    };
    const auto count = [&](std::size_t& out) {
      if (!to_size(val, out)) err("'" + key + "' expects a nonnegative integer, got '" + val + "'");
    };

    if (section == "model") {
      if (key == "n") {
        std::size_t n = 0;
        count(n);
        cfg.model.dim = int(n);
      } else {
        double* target = key == "delta" ? &cfg.model.delta
                         : key == "chi" ? &cfg.model.chi
                         : key == "b"   ? &cfg.model.b
                         : key == "m"   ? &cfg.model.m
                                        : &cfg.model.alpha;
        num(*target);
      }
    } else if (section == "grid") {
      (key == "N" ? n_list : l_list) = split_list(val);
    } else if (section == "time") {
      if (key == "T") num(cfg.T);
      else if (key == "dt") num(cfg.dt);
      else if (key == "store_every") count(cfg.store_every);
      else {
        std::size_t o = 0;
        count(o);
        cfg.order = int(o);
      }
    } else if (section == "data") {
      if (key == "kind") {
        if (val == "gaussian") cfg.data = DataKind::Gaussian;
        else if (val == "homogeneous") cfg.data = DataKind::Homogeneous;
        else if (val == "file") cfg.data = DataKind::File;
        else err("data kind must be gaussian, homogeneous or file");
      } else if (key == "eps") num(cfg.eps);
      else if (key == "width") num(cfg.width);
      else if (key == "core_cutoff") num(cfg.core_cutoff);
      else cfg.path = val;
    } else if (section == "picard") {
      if (key == "max_iter") count(cfg.max_iter);
      else num(cfg.tol);
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = val;
      else cfg.formats = split_list(val);
    }
  }

  // Grid: one value broadcasts to every axis.
  const int n = cfg.model.dim;
  if (n == 2 || n == 3) {
    GridSpec g;
    g.dim = n;
    bool ok = true;
    const auto fill = [&](const std::vector<std::string>& list, const char* name, auto setter) {
      if (list.empty()) return;
      if (list.size() != 1 && list.size() != std::size_t(n)) {
        errs.push_back(std::string("grid ") + name + " needs 1 or n values");
        ok = false;
        return;
      }
      for (int a = 0; a < n; ++a) {
        double v = 0.0;
        if (!to_double(list[list.size() == 1 ? 0 : a], v)) {
          errs.push_back(std::string("grid ") + name + " entries must be numbers");
          ok = false;
          return;
        }
        setter(a, v);
      }
    };
    for (int a = 0; a < n; ++a) {
      g.points[a] = cfg.grid.points[0];
      g.length[a] = cfg.grid.length[0];
    }
    fill(n_list, "N", [&](int a, double v) { g.points[a] = v >= 0 ? std::size_t(v) : 0; });
    fill(l_list, "L", [&](int a, double v) { g.length[a] = v; });
    if (ok) cfg.grid = g;
  }

  for (auto& v : cfg.violations()) errs.push_back(v);
  if (!errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(cfg.canonical()); }

}  // namespace ds
