// dampath: command-line front end.
//
//   dampath evolve --system oscillator --lambda 0.2 --omega0 0.5 --a 1 --out run/
//   dampath verify --suite all --system quadratic-gravity --lambda 1 --a 0
//   dampath sweep  --param lambda --values 0,0.1,0.2,0.5 --out lambda_family/
//
// Exit codes: 0 success, 1 validation error, 2 oracle failure, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dampath/dampath.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitOracle = 2;
constexpr int kExitIo = 3;

struct Flag {
  const char* key;
  const char* name;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"system", "--system", "oscillator | linear-gravity | quadratic-gravity"},
    {"lambda", "--lambda", "damping rate"},
    {"omega0", "--omega0", "natural frequency (oscillator)"},
    {"g", "--g", "gravitational acceleration (gravity systems)"},
    {"m", "--m", "mass"},
    {"hbar", "--hbar", "reduced Planck constant"},
    {"a", "--a", "initial packet position"},
    {"sigma0", "--sigma0", "initial packet width"},
    {"c", "--c", "geodesic integration constant (geometry suite)"},
    {"tmax", "--tmax", "final time"},
    {"nt", "--nt", "number of time samples"},
    {"xmin", "--xmin", "lower end of the x grid"},
    {"xmax", "--xmax", "upper end of the x grid"},
    {"nx", "--nx", "number of x samples"},
    {"out", "--out", "output directory"},
};

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto trimmed = dampath::detail::trim(item);
    if (trimmed.empty()) continue;
    values.push_back(dampath::detail::parse_double("values", trimmed));
  }
  return values;
}

dampath::RunConfig load_config(const std::string& config_path,
                               const std::map<std::string, std::string>& overrides) {
  dampath::RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw dampath::IoError(fmt::format("cannot read config file {}", config_path));
    dampath::apply_entries(cfg, dampath::read_entries(in));
  }
  for (const auto& [key, value] : overrides) dampath::apply_setting(cfg, key, value);
  dampath::validate(cfg);
  return cfg;
}

void print_report(const dampath::SuiteReport& report) {
  for (const auto& c : report.checks)
    fmt::print("{:<4} {:<42} residual={:<12.3e} threshold={:.1e}\n", c.pass ? "PASS" : "FAIL",
               c.check, c.residual, c.threshold);
  for (const auto& d : report.diagnostics) fmt::print("info {:<42} value={:.6g}\n", d.name, d.value);
}

int write_json(const std::string& path, const nlohmann::json& doc) {
  if (path == "-") {
    std::cout << doc.dump(2) << '\n';
    return kExitOk;
  }
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw dampath::IoError(fmt::format("cannot write {}", path));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-integral propagators and wavepackets for damped systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dampath::kVersion));

  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> flag_options;
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file; flags take precedence");
  for (const Flag& f : kFlags) {
    // the raw string goes through the same parser as the config file
    flag_options[f.key] = app.add_option(f.name, raw[f.key], f.help);
  }

  auto* evolve = app.add_subcommand("evolve", "write density.csv and sigma.csv");
  evolve->fallthrough();

  std::string suite_name = "all";
  std::string json_path;
  auto* verify = app.add_subcommand("verify", "run oracle suites");
  verify->fallthrough();
  verify->add_option("--suite", suite_name, "classical | kernel | wavepacket | geometry | all");
  verify->add_option("--json", json_path, "write the JSON report to this path ('-' for stdout)");

  std::string param_name;
  std::string values_text;
  auto* sweep = app.add_subcommand("sweep", "sigma_t family over one parameter");
  sweep->fallthrough();
  sweep->add_option("--param", param_name, "lambda | sigma0 | omega0")->required();
  sweep->add_option("--values", values_text, "comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  std::map<std::string, std::string> overrides;
  for (const auto& [key, option] : flag_options)
    if (option->count() > 0) overrides[key] = raw[key];

  try {
    const dampath::RunConfig cfg = load_config(config_path, overrides);

    if (evolve->parsed()) {
      const auto paths = dampath::run_evolve(cfg);
      fmt::print("wrote {}\nwrote {}\n", paths.density.string(), paths.sigma.string());
      return kExitOk;
    }

    if (verify->parsed()) {
      const auto suite = dampath::parse_suite(suite_name);
      if (!suite) throw dampath::ValidationError(fmt::format("unknown suite '{}'", suite_name));
      const dampath::SuiteReport report = dampath::run_suite(*suite, cfg);
      if (json_path != "-") print_report(report);  // keep stdout pure JSON
      if (!json_path.empty()) write_json(json_path, dampath::to_json(report.checks));
      if (report.all_pass()) return kExitOk;
      std::vector<dampath::CheckResult> failing;
      for (const auto& c : report.checks)
        if (!c.pass) failing.push_back(c);
      std::cerr << dampath::to_json(failing).dump(2) << '\n';
      return kExitOracle;
    }

    const auto param = dampath::parse_sweep_param(param_name);
    if (!param) throw dampath::ValidationError(fmt::format("unknown sweep parameter '{}'", param_name));
    const auto result = dampath::run_sweep(cfg, *param, parse_values(values_text));
    fmt::print("wrote {}\n", result.csv.string());
    for (const auto& e : result.entries) {
      if (!e.localization_onset) continue;
      fmt::print("sigma0={:.6g}: sigma_t < sigma0 for all t > {:.4f}\n", e.value, *e.localization_onset);
    }
    if (*param == dampath::SweepParam::Sigma0 && cfg.system == dampath::System::DampedOscillator)
      for (const auto& e : result.entries)
        if (!e.localization_onset)
          fmt::print("sigma0={:.6g}: sigma_t >= sigma0 at t = {:.6g}\n", e.value, cfg.t_max);
    return kExitOk;
  } catch (const dampath::IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitIo;
  } catch (const dampath::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  }
}
