#pragma once

// File-producing commands of the CLI: density/width time series and
// parameter sweeps, written as long-format CSV with a '#' metadata header.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "dampath/config.hpp"
#include "dampath/core.hpp"
#include "dampath/wavepacket.hpp"

namespace dampath {

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

inline double grid_point(double lo, double hi, int n, int k) {
  return n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
}

inline std::string_view measure_name(const SystemSpec& spec) {
  return spec.system() == System::QuadraticGravity ? "dX" : "dx";
}

}  // namespace detail

struct EvolveOutputs {
  std::filesystem::path density;
  std::filesystem::path sigma;
};

/// Writes density.csv (`t,x,psi2` on the n_t x n_x grid) and sigma.csv
/// (`t,lambda,sigma_t`) into cfg.out. For quadratic damping psi2 is the
/// density with respect to dX evaluated at position x.
inline EvolveOutputs run_evolve(const RunConfig& cfg) {
  validate(cfg);
  const SystemSpec spec = spec_from_config(cfg);
  const GaussianPacket packet = packet_from_config(cfg);
  const std::filesystem::path dir(cfg.out);
  const EvolveOutputs paths{dir / "density.csv", dir / "sigma.csv"};

  {
    auto out = detail::open_output(paths.density);
    write_config_header(out, cfg);
    out << "# measure=" << detail::measure_name(spec) << '\n';
    out << "t,x,psi2\n";
    for (int i = 0; i < cfg.n_t; ++i) {
      const double t = detail::grid_point(0.0, cfg.t_max, cfg.n_t, i);
      for (int j = 0; j < cfg.n_x; ++j) {
        const double x = detail::grid_point(cfg.x_min, cfg.x_max, cfg.n_x, j);
        out << fmt::format("{:.10g},{:.10g},{:.12e}\n", t, x, density(spec, packet, x, t));
      }
    }
    detail::finish(out, paths.density);
  }
  {
    auto out = detail::open_output(paths.sigma);
    write_config_header(out, cfg);
    out << "t,lambda,sigma_t\n";
    for (int i = 0; i < cfg.n_t; ++i) {
      const double t = detail::grid_point(0.0, cfg.t_max, cfg.n_t, i);
      out << fmt::format("{:.10g},{:.10g},{:.12e}\n", t, cfg.lambda, sigma_t(spec, packet, t));
    }
    detail::finish(out, paths.sigma);
  }
  return paths;
}

enum class SweepParam { Lambda, Sigma0, Omega0 };

inline std::optional<SweepParam> parse_sweep_param(std::string_view name) {
  if (name == "lambda") return SweepParam::Lambda;
  if (name == "sigma0") return SweepParam::Sigma0;
  if (name == "omega0") return SweepParam::Omega0;
  return std::nullopt;
}

inline std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Lambda: return "lambda";
    case SweepParam::Sigma0: return "sigma0";
    case SweepParam::Omega0: return "omega0";
  }
  return "?";
}

struct SweepEntry {
  double value;
  std::optional<double> localization_onset;  // sigma0 sweeps of the oscillator only
};

struct SweepResult {
  std::filesystem::path csv;
  std::vector<SweepEntry> entries;
};

inline RunConfig with_parameter(RunConfig cfg, SweepParam param, double value) {
  switch (param) {
    case SweepParam::Lambda: cfg.lambda = value; break;
    case SweepParam::Sigma0: cfg.sigma0 = value; break;
    case SweepParam::Omega0: cfg.omega0 = value; break;
  }
  return cfg;
}

/// Writes sweep_<param>.csv (`t,<param>,sigma_t`) into cfg.out, one block per
/// value in the order given. Every value is validated before anything is written.
inline SweepResult run_sweep(const RunConfig& cfg, SweepParam param,
                             const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  if (param == SweepParam::Omega0 && cfg.system != System::DampedOscillator)
    throw ValidationError("omega0 sweeps apply to the oscillator only");
  validate(cfg);
  for (double v : values) validate(with_parameter(cfg, param, v));

  const std::filesystem::path path =
      std::filesystem::path(cfg.out) / fmt::format("sweep_{}.csv", to_string(param));
  auto out = detail::open_output(path);
  write_config_header(out, cfg);
  out << "# values=";
  for (std::size_t k = 0; k < values.size(); ++k)
    out << (k ? ";" : "") << fmt::format("{}", values[k]);
  out << '\n' << "t," << to_string(param) << ",sigma_t\n";

  SweepResult result{path, {}};
  for (double v : values) {
    const RunConfig run = with_parameter(cfg, param, v);
    const SystemSpec spec = spec_from_config(run);
    const GaussianPacket packet = packet_from_config(run);
    for (int i = 0; i < cfg.n_t; ++i) {
      const double t = detail::grid_point(0.0, cfg.t_max, cfg.n_t, i);
      out << fmt::format("{:.10g},{:.10g},{:.12e}\n", t, v, sigma_t(spec, packet, t));
    }
    SweepEntry entry{v, std::nullopt};
    if (param == SweepParam::Sigma0 && spec.system() == System::DampedOscillator)
      entry.localization_onset = localization_onset(spec, packet, cfg.t_max);
    result.entries.push_back(entry);
  }
  detail::finish(out, path);
  return result;
}

}  // namespace dampath
