#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spinwalk/errors.hpp"
#include "spinwalk/evolve1w.hpp"
#include "spinwalk/evolve2w.hpp"
#include "spinwalk/hilbert.hpp"
#include "spinwalk/operators.hpp"

namespace spinwalk {

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.begin(), e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct KeyValue {
  std::string key, value, where;  // where = "source:line" for diagnostics
};

inline std::vector<KeyValue> parse_key_values(const std::string& text,
                                              const std::string& source) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error(where + ": expected 'key = value'");
    KeyValue kv{trim(t.substr(0, eq)), trim(t.substr(eq + 1)), where};
    if (kv.key.empty()) throw config_error(where + ": empty key");
    if (kv.value.empty()) throw config_error(where + ": empty value for '" + kv.key + "'");
    for (const auto& prev : out)
      if (prev.key == kv.key)
        throw config_error(where + ": duplicate key '" + kv.key + "' (first at " +
                           prev.where + ")");
    out.push_back(std::move(kv));
  }
  return out;
}

inline double parse_double(const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(kv.value, &pos);
    if (pos != kv.value.size())
      throw config_error(kv.where + ": trailing characters in number '" + kv.value + "'");
    return v;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error(kv.where + ": cannot parse '" + kv.value + "' as a number");
  }
}

inline long long parse_int(const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(kv.value, &pos);
    if (pos != kv.value.size())
      throw config_error(kv.where + ": trailing characters in integer '" + kv.value + "'");
    return v;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error(kv.where + ": cannot parse '" + kv.value + "' as an integer");
  }
}

}  // namespace detail

struct RunConfig {
  ModelParams params;
  std::optional<double> j;  // per-family shorthand, expanded on finalize
  std::optional<Family> family;
  Frame frame = Frame::Symmetric;
  std::optional<ParticleStatistics> stats;
  std::optional<InitKind> init;
  int steps = 0;
  int x0 = 0;
  int bound_index = 1;
  int neg_max_dim = 10000;
  int neg_stride = 1;
  int snapshot_stride = 0;

  bool phi_set = false;  // tracks whether phi came in directly

  Family require_family(const std::string& who) const {
    if (family) return *family;
    const auto f = classify_family(params.j_x, params.j_y, params.j_z);
    if (!f)
      throw unsupported_parameter_error(who + " needs the XX or isotropic coupling family");
    return *f;
  }

  ParticleStatistics require_stats() const {
    if (!stats) throw config_error("missing key 'stats'");
    return *stats;
  }

  InitKind require_init() const {
    if (!init) throw config_error("missing key 'init'");
    return *init;
  }
};

namespace detail {

inline void apply_key_value(RunConfig& c, const KeyValue& kv, bool& saw_j_components) {
  const std::string& k = kv.key;
  if (k == "phi") {
    c.params.phi = parse_double(kv);
    c.phi_set = true;
  } else if (k == "epsilon") {
    c.params.epsilon = parse_double(kv);
  } else if (k == "m") {
    c.params.m = parse_double(kv);
  } else if (k == "j") {
    c.j = parse_double(kv);
  } else if (k == "j_x") {
    c.params.j_x = parse_double(kv);
    saw_j_components = true;
  } else if (k == "j_y") {
    c.params.j_y = parse_double(kv);
    saw_j_components = true;
  } else if (k == "j_z") {
    c.params.j_z = parse_double(kv);
    saw_j_components = true;
  } else if (k == "lx") {
    const long long v = parse_int(kv);
    if (v < 3 || v > 2000000) throw config_error(kv.where + ": lx out of range");
    c.params.lx = static_cast<int>(v);
  } else if (k == "band_margin") {
    c.params.band_margin = parse_double(kv);
  } else if (k == "support_eps") {
    c.params.support_eps = parse_double(kv);
  } else if (k == "steps") {
    const long long v = parse_int(kv);
    if (v < 0 || v > 100000000) throw config_error(kv.where + ": steps out of range");
    c.steps = static_cast<int>(v);
  } else if (k == "x0") {
    const long long v = parse_int(kv);
    if (v < -1000000 || v > 1000000) throw config_error(kv.where + ": x0 out of range");
    c.x0 = static_cast<int>(v);
  } else if (k == "bound_index") {
    const long long v = parse_int(kv);
    if (v < 1 || v > 8) throw config_error(kv.where + ": bound_index out of range");
    c.bound_index = static_cast<int>(v);
  } else if (k == "neg_max_dim") {
    const long long v = parse_int(kv);
    if (v < 1 || v > 100000) throw config_error(kv.where + ": neg_max_dim out of range");
    c.neg_max_dim = static_cast<int>(v);
  } else if (k == "neg_stride") {
    const long long v = parse_int(kv);
    if (v < 1 || v > 100000000) throw config_error(kv.where + ": neg_stride out of range");
    c.neg_stride = static_cast<int>(v);
  } else if (k == "snapshot_stride") {
    const long long v = parse_int(kv);
    if (v < 0 || v > 100000000)
      throw config_error(kv.where + ": snapshot_stride out of range");
    c.snapshot_stride = static_cast<int>(v);
  } else if (k == "stats") {
    if (kv.value == "fermion")
      c.stats = ParticleStatistics::Fermion;
    else if (kv.value == "boson")
      c.stats = ParticleStatistics::Boson;
    else if (kv.value == "distinguishable")
      c.stats = ParticleStatistics::Distinguishable;
    else
      throw config_error(kv.where + ": stats must be fermion, boson, or distinguishable");
  } else if (k == "family") {
    if (kv.value == "xx")
      c.family = Family::XX;
    else if (kv.value == "su2")
      c.family = Family::SU2;
    else
      throw config_error(kv.where + ": family must be xx or su2");
  } else if (k == "frame") {
    if (kv.value == "symmetric")
      c.frame = Frame::Symmetric;
    else if (kv.value == "shifted")
      c.frame = Frame::Shifted;
    else
      throw config_error(kv.where + ": frame must be symmetric or shifted");
  } else if (k == "init") {
    if (kv.value == "delta_delta")
      c.init = InitKind::DeltaDelta;
    else if (kv.value == "bound_delta")
      c.init = InitKind::BoundDelta;
    else
      throw config_error(kv.where + ": init must be delta_delta or bound_delta");
  } else {
    throw config_error(kv.where + ": unknown key '" + k + "'");
  }
}

}  // namespace detail

/// Builds a run configuration from file text plus command-line overrides.
/// Overrides are single "key=value" entries applied after the file.
inline RunConfig make_run_config(const std::string& file_text, const std::string& file_name,
                                 const std::vector<std::string>& overrides) {
  RunConfig c;
  bool saw_j_components = false;
  for (const auto& kv : detail::parse_key_values(file_text, file_name))
    detail::apply_key_value(c, kv, saw_j_components);
  int n = 0;
  for (const auto& ov : overrides) {
    ++n;
    const auto kvs = detail::parse_key_values(ov, "--set#" + std::to_string(n));
    if (kvs.size() != 1)
      throw config_error("--set#" + std::to_string(n) + ": expected exactly one key=value");
    detail::apply_key_value(c, kvs[0], saw_j_components);
  }

  if (c.j) {
    if (saw_j_components)
      throw config_error("key 'j' conflicts with explicit j_x/j_y/j_z");
    if (!c.family)
      throw config_error("key 'j' needs 'family' to expand into couplings");
    if (*c.family == Family::XX) {
      c.params.j_x = *c.j;
      c.params.j_y = *c.j;
      c.params.j_z = 0.0;
    } else {
      c.params.j_x = *c.j;
      c.params.j_y = *c.j;
      c.params.j_z = *c.j;
    }
  } else if (c.family && saw_j_components) {
    const auto f = classify_family(c.params.j_x, c.params.j_y, c.params.j_z);
    if (!f || *f != *c.family)
      throw config_error("declared family does not match j_x/j_y/j_z");
  }

  if (!c.phi_set && c.params.m)
    c.params.phi = phi_from_dirac(c.params.epsilon, *c.params.m);
  c.params.validate();
  return c;
}

/// Canonical key=value echo; reparsing it reproduces the configuration.
inline std::string serialize(const RunConfig& c) {
  using detail::fmt17;
  std::string out;
  out += "phi = " + fmt17(c.params.phi) + "\n";
  out += "epsilon = " + fmt17(c.params.epsilon) + "\n";
  if (c.params.m) out += "m = " + fmt17(*c.params.m) + "\n";
  out += "j_x = " + fmt17(c.params.j_x) + "\n";
  out += "j_y = " + fmt17(c.params.j_y) + "\n";
  out += "j_z = " + fmt17(c.params.j_z) + "\n";
  out += "lx = " + std::to_string(c.params.lx) + "\n";
  out += "band_margin = " + fmt17(c.params.band_margin) + "\n";
  out += "support_eps = " + fmt17(c.params.support_eps) + "\n";
  if (c.family)
    out += std::string("family = ") + (*c.family == Family::XX ? "xx" : "su2") + "\n";
  out += std::string("frame = ") + frame_name(c.frame) + "\n";
  if (c.stats) {
    const char* s = *c.stats == ParticleStatistics::Fermion ? "fermion"
                    : *c.stats == ParticleStatistics::Boson ? "boson"
                                                            : "distinguishable";
    out += std::string("stats = ") + s + "\n";
  }
  if (c.init)
    out += std::string("init = ") +
           (*c.init == InitKind::DeltaDelta ? "delta_delta" : "bound_delta") + "\n";
  out += "steps = " + std::to_string(c.steps) + "\n";
  out += "x0 = " + std::to_string(c.x0) + "\n";
  out += "bound_index = " + std::to_string(c.bound_index) + "\n";
  out += "neg_max_dim = " + std::to_string(c.neg_max_dim) + "\n";
  out += "neg_stride = " + std::to_string(c.neg_stride) + "\n";
  out += "snapshot_stride = " + std::to_string(c.snapshot_stride) + "\n";
  return out;
}

}  // namespace spinwalk
