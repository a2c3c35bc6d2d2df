#pragma once

// Run configuration shared by the CLI commands: defaults, key=value
// parsing (config files and the '#' header echoed into every CSV), and
// conversion into validated domain objects.

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "dampath/core.hpp"
#include "dampath/version.hpp"
#include "dampath/wavepacket.hpp"

namespace dampath {

struct RunConfig {
  System system = System::DampedOscillator;
  double m = 1.0;
  double hbar = 1.0;
  double lambda = 0.2;
  double omega0 = 0.5;
  double g = 9.8;
  double a = 1.0;
  double sigma0 = 0.5;
  double c = 1.0;  // geodesic integration constant
  double t_max = 20.0;
  int n_t = 201;
  double x_min = -5.0;
  double x_max = 5.0;
  int n_x = 201;
  std::string out = ".";

  bool operator==(const RunConfig&) const = default;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError(fmt::format("{}: '{}' is not a number", key, text));
  return value;
}

inline int parse_int(std::string_view key, std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError(fmt::format("{}: '{}' is not an integer", key, text));
  return value;
}

}  // namespace detail

inline ConfigEntries config_entries(const RunConfig& cfg) {
  auto num = [](double v) { return fmt::format("{}", v); };  // shortest round-trip form
  return {{"system", std::string(to_string(cfg.system))},
          {"m", num(cfg.m)},
          {"hbar", num(cfg.hbar)},
          {"lambda", num(cfg.lambda)},
          {"omega0", num(cfg.omega0)},
          {"g", num(cfg.g)},
          {"a", num(cfg.a)},
          {"sigma0", num(cfg.sigma0)},
          {"c", num(cfg.c)},
          {"tmax", num(cfg.t_max)},
          {"nt", std::to_string(cfg.n_t)},
          {"xmin", num(cfg.x_min)},
          {"xmax", num(cfg.x_max)},
          {"nx", std::to_string(cfg.n_x)},
          {"out", cfg.out}};
}

inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  using detail::parse_double, detail::parse_int;
  if (key == "system") {
    const auto sys = parse_system(value);
    if (!sys) throw ValidationError(fmt::format("unknown system '{}'", value));
    cfg.system = *sys;
  } else if (key == "m") {
    cfg.m = parse_double(key, value);
  } else if (key == "hbar") {
    cfg.hbar = parse_double(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_double(key, value);
  } else if (key == "omega0") {
    cfg.omega0 = parse_double(key, value);
  } else if (key == "g") {
    cfg.g = parse_double(key, value);
  } else if (key == "a") {
    cfg.a = parse_double(key, value);
  } else if (key == "sigma0") {
    cfg.sigma0 = parse_double(key, value);
  } else if (key == "c") {
    cfg.c = parse_double(key, value);
  } else if (key == "tmax") {
    cfg.t_max = parse_double(key, value);
  } else if (key == "nt") {
    cfg.n_t = parse_int(key, value);
  } else if (key == "xmin") {
    cfg.x_min = parse_double(key, value);
  } else if (key == "xmax") {
    cfg.x_max = parse_double(key, value);
  } else if (key == "nx") {
    cfg.n_x = parse_int(key, value);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else {
    throw ValidationError(fmt::format("unknown configuration key '{}'", key));
  }
}

/// key=value lines. In a config file, '#' starts a comment line. With
/// `header_only`, only '#'-prefixed lines are read (the CSV metadata block)
/// and reading stops at the first line that is not a comment.
inline ConfigEntries read_entries(std::istream& in, bool header_only = false) {
  ConfigEntries entries;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    const bool comment = view.front() == '#';
    if (header_only) {
      if (!comment) break;
      view = detail::trim(view.substr(1));
    } else if (comment) {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      if (header_only) continue;
      throw ValidationError(fmt::format("malformed config line '{}'", view));
    }
    entries.emplace_back(std::string(detail::trim(view.substr(0, eq))),
                         std::string(detail::trim(view.substr(eq + 1))));
  }
  return entries;
}

inline void apply_entries(RunConfig& cfg, const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) apply_setting(cfg, key, value);
}

/// '#'-prefixed metadata block: tool version, then one line per setting.
inline void write_config_header(std::ostream& out, const RunConfig& cfg) {
  out << "# dampath " << kVersion << '\n';
  for (const auto& [key, value] : config_entries(cfg)) out << "# " << key << '=' << value << '\n';
}

/// Header entries that are not configuration keys (e.g. `measure`) are ignored.
inline RunConfig parse_config_header(std::istream& in) {
  RunConfig cfg;
  const RunConfig defaults;
  for (const auto& [key, value] : read_entries(in, true)) {
    const auto known = config_entries(defaults);
    const bool is_key = std::any_of(known.begin(), known.end(),
                                    [&](const auto& kv) { return kv.first == key; });
    if (is_key) apply_setting(cfg, key, value);
  }
  return cfg;
}

inline SystemSpec spec_from_config(const RunConfig& cfg) {
  const bool osc = cfg.system == System::DampedOscillator;
  return SystemSpec::make(cfg.system, cfg.m, cfg.lambda,
                          osc ? std::optional<double>(cfg.omega0) : std::nullopt,
                          osc ? std::nullopt : std::optional<double>(cfg.g), cfg.hbar);
}

inline GaussianPacket packet_from_config(const RunConfig& cfg) {
  return make_packet(spec_from_config(cfg), cfg.a, cfg.sigma0);
}

/// Full validation of a configuration before any computation.
inline void validate(const RunConfig& cfg) {
  packet_from_config(cfg);
  if (!(cfg.t_max > 0) || !std::isfinite(cfg.t_max)) throw ValidationError("tmax must be positive");
  if (cfg.n_t < 2) throw ValidationError("nt must be >= 2");
  if (cfg.n_x < 2) throw ValidationError("nx must be >= 2");
  if (!(cfg.x_max > cfg.x_min)) throw ValidationError("xmax must exceed xmin");
  if (cfg.c == 0.0 || !std::isfinite(cfg.c)) throw ValidationError("c must be nonzero");
}

}  // namespace dampath
