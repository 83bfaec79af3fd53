#pragma once

// Run manifests: everything needed to reproduce one experiment's output.
//
// A manifest is a flat set of key=value pairs. It is read from a config file,
// overridden by command-line flags, and written back verbatim as '#'-prefixed
// lines at the top of every output file, so that
//
//   sed -n 's/^# //p' out.csv > run.cfg
//
// recovers a config that reproduces the file.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "conspec/dynamics.hpp"

namespace conspec {

/// Bad configuration: unknown key, malformed value or line.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunManifest {
  std::string experiment;
  std::string function = "gauss1d";
  std::vector<int> n_list{8, 16, 32};
  std::string scheme = "fs";  // one variant or "all"
  int n = 32;
  double dt = 0.01;
  double t_final = 50.0;
  int angles = 8;
  double b0 = 1.0 / (2.0 * pi);
  bool pad = true;
  LossQuadrature loss_rule = LossQuadrature::angles;
  int stride = 10;
  double half_width = 0.0;  // 0: experiment default
  int points_per_axis = 0;  // 0: 2N+2
  std::string output;
  std::uint64_t seed = 0;
  std::string version = CONSPEC_VERSION;

  /// Keys accepted in config files and by set().
  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k{"experiment", "version", "function", "n_list", "scheme",
                                            "n",          "dt",      "tfinal",   "angles", "b0",
                                            "pad",        "loss_rule", "stride", "half_width",
                                            "points_per_axis", "output", "seed", "l2_norm"};
    return k;
  }

  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Fills experiment-dependent defaults and checks cross-field constraints.
  void finalize();

  std::vector<SchemeVariant> schemes() const {
    if (scheme == "all") return {SchemeVariant::fs, SchemeVariant::mpfs, SchemeVariant::epfs, SchemeVariant::mepfs};
    return {parse_scheme(scheme)};
  }

  SolverConfig solver(SchemeVariant variant) const {
    SolverConfig c;
    c.scheme = variant;
    c.dt = dt;
    c.t_final = t_final;
    c.angles = angles;
    c.b0 = b0;
    c.pad = pad;
    c.loss_rule = loss_rule;
    c.diagnostic_stride = stride;
    c.dim = 2;
    c.modes = n;
    c.half_width = half_width;
    c.points_per_axis = points_per_axis;
    return c;
  }

  std::vector<std::string> header_lines() const {
    std::vector<std::string> out;
    for (const auto& k : keys()) out.push_back("# " + k + "=" + get(k));
    return out;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    out = std::strtod(first, &end);
    r.ptr = end;
    r.ec = (end == first) ? std::errc::invalid_argument : std::errc{};
  } else {
    r = std::from_chars(first, last, out);
  }
  if (r.ec != std::errc{} || r.ptr != last)
    throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
  return out;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline void RunManifest::set(const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "experiment") {
    if (!experiment.empty() && value != experiment)
      throw ConfigError("config is for experiment '" + value + "', not '" + experiment + "'");
    experiment = value;
  } else if (key == "version" || key == "l2_norm") {
    // Recorded for provenance only.
  } else if (key == "function") {
    if (value != "gauss1d" && value != "bumps1d") throw ConfigError("function must be gauss1d or bumps1d, got '" + value + "'");
    function = value;
  } else if (key == "n_list") {
    std::vector<int> list;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const int v = parse_number<int>(key, detail::trim(item));
      if (v < 1) throw ConfigError("n_list entries must be >= 1");
      list.push_back(v);
    }
    if (list.empty()) throw ConfigError("n_list must not be empty");
    n_list = std::move(list);
  } else if (key == "scheme") {
    if (value != "all") {
      try {
        parse_scheme(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    scheme = value;
  } else if (key == "n") {
    n = parse_number<int>(key, value);
    if (n < 1) throw ConfigError("n must be >= 1");
  } else if (key == "dt") {
    dt = parse_number<double>(key, value);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  } else if (key == "tfinal") {
    t_final = parse_number<double>(key, value);
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("tfinal must be >= 0");
  } else if (key == "angles") {
    angles = parse_number<int>(key, value);
    if (angles < 1) throw ConfigError("angles must be >= 1");
  } else if (key == "b0") {
    b0 = parse_number<double>(key, value);
    if (!(b0 > 0.0) || !std::isfinite(b0)) throw ConfigError("b0 must be positive");
  } else if (key == "pad") {
    if (value == "on" || value == "true" || value == "1") pad = true;
    else if (value == "off" || value == "false" || value == "0") pad = false;
    else throw ConfigError("pad must be on or off, got '" + value + "'");
  } else if (key == "loss_rule") {
    if (value == "angles") loss_rule = LossQuadrature::angles;
    else if (value == "fine") loss_rule = LossQuadrature::fine;
    else throw ConfigError("loss_rule must be angles or fine, got '" + value + "'");
  } else if (key == "stride") {
    stride = parse_number<int>(key, value);
    if (stride < 1) throw ConfigError("stride must be >= 1");
  } else if (key == "half_width") {
    half_width = parse_number<double>(key, value);
    if (!(half_width >= 0.0) || !std::isfinite(half_width)) throw ConfigError("half_width must be positive");
  } else if (key == "points_per_axis") {
    points_per_axis = parse_number<int>(key, value);
    if (points_per_axis < 0) throw ConfigError("points_per_axis must be >= 0");
  } else if (key == "output") {
    output = value;
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

inline std::string RunManifest::get(const std::string& key) const {
  if (key == "experiment") return experiment;
  if (key == "version") return version;
  if (key == "l2_norm") return "physical_unnormalized";
  if (key == "function") return function;
  if (key == "n_list") {
    std::string s;
    for (std::size_t i = 0; i < n_list.size(); ++i) s += (i ? "," : "") + std::to_string(n_list[i]);
    return s;
  }
  if (key == "scheme") return scheme;
  if (key == "n") return std::to_string(n);
  if (key == "dt") return detail::format_double(dt);
  if (key == "tfinal") return detail::format_double(t_final);
  if (key == "angles") return std::to_string(angles);
  if (key == "b0") return detail::format_double(b0);
  if (key == "pad") return pad ? "on" : "off";
  if (key == "loss_rule") return loss_rule == LossQuadrature::angles ? "angles" : "fine";
  if (key == "stride") return std::to_string(stride);
  if (key == "half_width") return detail::format_double(half_width);
  if (key == "points_per_axis") return std::to_string(points_per_axis);
  if (key == "output") return output;
  if (key == "seed") return std::to_string(seed);
  throw ConfigError("unknown config key '" + key + "'");
}

inline void RunManifest::finalize() {
  if (half_width == 0.0) half_width = (experiment == "test1" && function == "gauss1d") ? 6.0 : 12.0;
  if (experiment == "test1") {
    for (int m : n_list)
      if (points_per_axis != 0 && points_per_axis < 2 * m + 2)
        throw ConfigError("points_per_axis must be >= 2N+2 for every N in n_list");
  } else if (points_per_axis != 0 && points_per_axis < 2 * n + 2) {
    throw ConfigError("points_per_axis must be >= 2N+2");
  }
}

/// key=value pairs of a config text. Blank lines and lines starting with '#'
/// are skipped; keys are checked against RunManifest::keys().
inline std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    const auto& known = RunManifest::keys();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown config key '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Defaults, then file values, then flag values (flags win).
inline RunManifest parse_config(const std::string& experiment, const std::map<std::string, std::string>& file,
                                const std::map<std::string, std::string>& flags) {
  RunManifest m;
  m.experiment = experiment;
  for (const auto& [k, v] : file) m.set(k, v);
  for (const auto& [k, v] : flags) m.set(k, v);
  m.finalize();
  return m;
}

}  // namespace conspec
