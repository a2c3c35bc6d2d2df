#pragma once

// Oracle suites behind `dampath verify`. Each check compares a closed form
// against an independent numerical route and reports residual vs threshold.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "dampath/classical.hpp"
#include "dampath/config.hpp"
#include "dampath/core.hpp"
#include "dampath/geometry.hpp"
#include "dampath/kernel.hpp"
#include "dampath/wavepacket.hpp"

namespace dampath {

struct CheckResult {
  std::string check;
  double residual;
  double threshold;
  bool pass;
};

/// Informational quantity that has no pass/fail threshold.
struct Diagnostic {
  std::string name;
  double value;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::vector<Diagnostic> diagnostics;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

enum class Suite { Classical, Kernel, Wavepacket, Geometry, All };

inline std::optional<Suite> parse_suite(std::string_view name) {
  if (name == "classical") return Suite::Classical;
  if (name == "kernel") return Suite::Kernel;
  if (name == "wavepacket") return Suite::Wavepacket;
  if (name == "geometry") return Suite::Geometry;
  if (name == "all") return Suite::All;
  return std::nullopt;
}

namespace detail {

class ReportBuilder {
 public:
  void check(std::string name, double residual, double threshold) {
    // NaN never passes
    report_.checks.push_back({std::move(name), residual, threshold, residual <= threshold});
  }
  void note(std::string name, double value) {
    report_.diagnostics.push_back({std::move(name), value});
  }
  SuiteReport take() { return std::move(report_); }

 private:
  SuiteReport report_;
};

// Duration that keeps the underdamped oscillator away from caustics.
inline double safe_duration(const SystemSpec& spec, double preferred) {
  if (spec.system() != System::DampedOscillator) return preferred;
  const Regime regime = classify(spec);
  if (regime.kind != RegimeKind::UnderDamped) return preferred;
  if (std::abs(std::sin(regime.rate * preferred)) > 0.1) return preferred;
  return 0.5 * kPi / regime.rate;
}

inline double end_offset(const SystemSpec& spec, double duration) {
  if (spec.system() == System::QuadraticGravity)
    return 0.5 * std::sqrt(spec.g() / spec.lambda()) * duration;
  return 0.5;
}

// Euler-Lagrange residual of the Exponential-form Lagrangian divided by its
// natural scale, so that the threshold is dimensionless.
inline double scaled_el_residual(const Trajectory& traj, double t) {
  const SystemSpec& spec = traj.spec();
  auto lag = [&spec](double x, double v, double s) { return lagrangian(spec, x, v, s); };
  auto pos = [&traj](double s) { return traj.position(s); };
  auto vel = [&traj](double s) { return traj.velocity(s); };
  const double raw = euler_lagrange_residual(lag, pos, vel, t);
  const double m = spec.m();
  if (spec.system() == System::QuadraticGravity)
    return raw / (m * std::exp(2.0 * spec.lambda() * traj.position(t)));
  return raw / (m * std::exp(spec.lambda() * t));
}

inline double scaled_sqrt_el_residual(const Trajectory& traj, double t) {
  const SystemSpec& spec = traj.spec();
  const double k = spec.lambda() / spec.g();
  auto lag = [&spec](double x, double v, double s) {
    return lagrangian(spec, x, v, s, LagrangianForm::SquareRoot);
  };
  auto pos = [&traj](double s) { return traj.position(s); };
  auto vel = [&traj](double s) { return traj.velocity(s); };
  const double raw = euler_lagrange_residual(lag, pos, vel, t);
  const double v = traj.velocity(t);
  return raw / (std::exp(-spec.lambda() * traj.position(t)) * k *
                std::pow(1.0 - k * v * v, -1.5));
}

inline void classical_suite(const RunConfig& cfg, ReportBuilder& out) {
  const SystemSpec spec = spec_from_config(cfg);
  const double T = safe_duration(spec, 1.0);
  const BoundaryData bd{cfg.a, 0.0, cfg.a + end_offset(spec, T), T};
  const Trajectory traj = solve_bvp(spec, bd);

  const double endpoint = std::max(std::abs(traj.position(bd.ti) - bd.xi),
                                   std::abs(traj.position(bd.tf) - bd.xf)) /
                          std::max(1.0, std::abs(bd.xf));
  out.check("classical.bvp_endpoints", endpoint, 1e-10);

  double eom = 0.0;
  double el = 0.0;
  double el_sqrt = 0.0;
  for (int k = 1; k < 10; ++k) {
    const double t = bd.ti + k * T / 10.0;
    eom = std::max(eom, eom_residual(traj, t) / std::max(1.0, std::abs(traj.position(t))));
    el = std::max(el, scaled_el_residual(traj, t));
    if (spec.system() == System::QuadraticGravity)
      el_sqrt = std::max(el_sqrt, scaled_sqrt_el_residual(traj, t));
  }
  out.check("classical.eom_residual", eom, 1e-6);
  out.check("classical.euler_lagrange", el, 1e-6);
  if (spec.system() == System::QuadraticGravity)
    out.check("classical.euler_lagrange_sqrt_form", el_sqrt, 1e-6);

  const double s_cf = action_closed_form(spec, bd);
  const double s_num = action_numeric(traj, 1024);
  out.check("classical.action_quadrature", std::abs(s_num - s_cf) / std::max(1.0, std::abs(s_cf)),
            1e-8);

  const double span = 10.0;
  const auto samples = integrate_ivp(spec, cfg.a, 0.0, 0.0, span, 1e-3);
  const Trajectory rest = trajectory_from_initial(spec, cfg.a, 0.0);
  double rk4 = 0.0;
  for (const auto& s : samples) rk4 = std::max(rk4, std::abs(s.x - rest.position(s.t)));
  out.check("classical.rk4_vs_closed_form", rk4, 1e-6);

  if (spec.system() == System::LinearGravity) {
    const double vt = spec.g() / spec.lambda();
    out.check("classical.terminal_velocity",
              std::abs(rest.velocity(10.0 / spec.lambda()) - vt) / vt, 1e-3);
  } else if (spec.system() == System::QuadraticGravity) {
    const double vt = std::sqrt(spec.g() / spec.lambda());
    out.check("classical.terminal_velocity",
              std::abs(rest.velocity(10.0 / quadratic_rate(spec)) - vt) / vt, 1e-3);
  }
}

inline std::vector<BoundaryData> kernel_samples(const SystemSpec& spec, double a) {
  std::vector<BoundaryData> out;
  const double durations[] = {0.4, 0.9, 1.7};
  const double starts[] = {0.0, 0.3};
  const double offsets_i[] = {-0.5, 0.0, 0.5};
  const double offsets_f[] = {-0.3, 1.0};
  const std::optional<Regime> regime =
      spec.system() == System::DampedOscillator ? std::optional(classify(spec)) : std::nullopt;
  for (double T : durations) {
    if (regime && regime->kind == RegimeKind::UnderDamped &&
        std::abs(std::sin(regime->rate * T)) < 1e-3)
      continue;
    for (double t0 : starts)
      for (double di : offsets_i)
        for (double df : offsets_f) out.push_back({a + di, t0, a + df, t0 + T});
  }
  return out;
}

inline void kernel_suite(const RunConfig& cfg, ReportBuilder& out) {
  const SystemSpec spec = spec_from_config(cfg);
  const Kernel kernel(spec);
  const auto samples = kernel_samples(spec, cfg.a);

  double vv = 0.0;
  double trans = 0.0;
  double composed = 0.0;
  for (const auto& bd : samples) {
    vv = std::max(vv, van_vleck_check(kernel, bd));
    for (double frac : {0.25, 0.5, 0.8}) {
      const double tm = bd.ti + frac * bd.duration();
      trans = std::max(trans, transitivity_check(kernel, bd, tm));
      const Amplitude direct = kernel.prefactor(bd.ti, bd.tf);
      composed = std::max(
          composed, std::abs(composed_prefactor(kernel, bd.ti, tm, bd.tf) - direct) / std::abs(direct));
    }
  }
  out.check("kernel.van_vleck", vv, 1e-6);
  out.check("kernel.transitivity", trans, 1e-10);
  out.check("kernel.composed_prefactor", composed, 1e-12);

  if (spec.system() == System::QuadraticGravity) {
    const BoundaryData bd = samples.front();
    const double tm = 0.5 * (bd.ti + bd.tf);
    out.note("kernel.dx_measure_defect",
             dx_measure_composition_defect(kernel, bd, tm, cfg.a, 6.0, 512));
  }
}

inline void wavepacket_suite(const RunConfig& cfg, ReportBuilder& out) {
  const SystemSpec spec = spec_from_config(cfg);
  const GaussianPacket packet = packet_from_config(cfg);

  out.check("wavepacket.sigma_at_zero",
            std::abs(sigma_t(spec, packet, 0.0) - packet.sigma0) / packet.sigma0, 1e-14);

  for (double t : {0.5, 1.0, 2.0}) {
    const double center = chart_center(spec, packet, t);
    const double st = sigma_t(spec, packet, t);
    const double at_peak = std::norm(propagate_numeric_at(spec, packet, t, center));
    const double exact_peak = density_chart(spec, packet, center, t);
    out.check(fmt::format("wavepacket.quadrature_peak_t={}", t),
              std::abs(at_peak - exact_peak) / exact_peak, 1e-6);

    double tail = 0.0;
    for (const auto& s : propagate_numeric(spec, packet, t, auto_grid(spec, packet, t, 256))) {
      if (std::abs(s.q - center) <= 3.0 * st) continue;
      tail = std::max(tail, std::abs(std::norm(s.psi) - density_chart(spec, packet, s.q, t)));
    }
    out.check(fmt::format("wavepacket.quadrature_tail_t={}", t), tail, 1e-8);
  }

  double norm = 0.0;
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0})
    norm = std::max(norm, std::abs(normalization_numeric(spec, packet, t) - 1.0));
  out.check("wavepacket.normalization", norm, 1e-8);

  double peak_err = 0.0;
  for (const auto& s : integrate_ivp(spec, packet.a, 0.0, 0.0, 10.0, 1e-3))
    peak_err = std::max(peak_err, std::abs(peak(spec, packet, s.t) - s.x));
  out.check("wavepacket.peak_vs_rk4", peak_err, 1e-6);

  if (spec.system() == System::DampedOscillator) {
    const auto onset = localization_onset(spec, packet, std::max(cfg.t_max, 50.0));
    out.note("wavepacket.localization_onset", onset ? *onset : std::nan(""));
  } else if (spec.system() == System::QuadraticGravity) {
    const XChartMoments moments = x_chart_moments(spec, packet, 1.0);
    out.note("wavepacket.x_chart_covered_mass_t=1", moments.covered_mass);
    out.note("wavepacket.x_chart_mean_minus_peak_t=1", moments.mean_x - peak(spec, packet, 1.0));
  }
}

inline void geometry_suite(const RunConfig& cfg, ReportBuilder& out) {
  const double lam = cfg.lambda;
  const double g = cfg.g;
  const Metric2D metric(lam, g, cfg.c);

  double gamma_err = 0.0;
  double ricci_err = 0.0;
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const ChristoffelSymbols exact = christoffel(metric, x);
    const ChristoffelSymbols fd = christoffel_fd(metric, x);
    gamma_err = std::max({gamma_err, std::abs(fd.x_xx - exact.x_xx) / std::abs(exact.x_xx),
                          std::abs(fd.x_yy - exact.x_yy) / std::abs(exact.x_yy),
                          std::abs(fd.y_xy - exact.y_xy) / std::abs(exact.y_xy)});
    const double r = -4.0 * lam * lam * std::exp(-2.0 * lam * x);
    ricci_err = std::max(ricci_err, std::abs(curvature_fd(metric, x).scalar - r) / std::abs(r));
  }
  out.check("geometry.christoffel_fd", gamma_err, 1e-6);
  out.check("geometry.ricci_scalar_fd", ricci_err, 1e-5);

  const GeodesicCoefficients coeffs = geodesic_reduce(metric, 0.7);
  out.check("geometry.geodesic_coefficients",
            std::max(std::abs(coeffs.lambda_eff - lam) / lam, std::abs(coeffs.g_eff - g) / g),
            1e-12);

  const SystemSpec quad = SystemSpec::quadratic_gravity(lam, g, 1.0, 1.0);
  const double span = 2.0;
  const double dt = 1e-3;
  const auto geo = integrate_geodesic(metric, cfg.a, 0.0, 0.0, 0.0, span, dt);
  const auto eom = integrate_ivp(quad, cfg.a, 0.0, 0.0, span, dt);
  const Metric2D scaled(lam, g, 10.0 * cfg.c);
  const auto geo_scaled = integrate_geodesic(scaled, cfg.a, 0.0, 0.0, 0.0, span, dt);
  double match = 0.0;
  double c_dep = 0.0;
  double first_integral = 0.0;
  for (std::size_t k = 0; k < geo.size(); ++k) {
    match = std::max(match, std::abs(geo[k].x - eom[k].x));
    c_dep = std::max(c_dep, std::abs(geo[k].x - geo_scaled[k].x));
    first_integral =
        std::max(first_integral, std::abs(metric.h(geo[k].x) * geo[k].vy - cfg.c) / std::abs(cfg.c));
  }
  out.check("geometry.geodesic_vs_rk4", match, 1e-6);
  out.check("geometry.c_independence", c_dep, 1e-9);
  out.check("geometry.first_integral", first_integral, 1e-8);

  const TachyonMap map(lam, g);
  const double t_end = 10.0 / map.alpha();
  const auto fall = integrate_ivp(quad, 0.0, 0.0, 0.0, t_end, t_end / 1e4);
  out.check("geometry.tachyon_eom", tachyon_eom_check(map, fall), 1e-6);
  const Trajectory rest = trajectory_from_initial(quad, 0.0, 0.0);
  out.check("geometry.tachyon_terminal_speed", std::abs(map.b() * rest.velocity(t_end) - 1.0),
            1e-3);

  double lag_match = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double t = k * t_end / 16.0;
    const double x = rest.position(t);
    const double v = rest.velocity(t);
    const double tach = tachyon_lagrangian(map.alpha(), map.b() * x, map.b() * v);
    lag_match = std::max(
        lag_match, std::abs(tach - lagrangian(quad, x, v, t, LagrangianForm::SquareRoot)));
  }
  out.check("geometry.tachyon_lagrangian", lag_match, 1e-12);

  const SystemSpec lin = SystemSpec::linear_gravity(lam, g, 1.0, 1.0);
  out.note("geometry.linear_damping_geodesic_misfit",
           geodesic_form_misfit(integrate_ivp(lin, 0.0, 0.0, 0.0, 5.0 / lam, 1e-3)));
}

}  // namespace detail

/// Runs one suite (or all four) on the configured system. Throws
/// ValidationError for an invalid configuration.
inline SuiteReport run_suite(Suite suite, const RunConfig& cfg) {
  validate(cfg);
  detail::ReportBuilder out;
  const bool all = suite == Suite::All;
  if (all || suite == Suite::Classical) detail::classical_suite(cfg, out);
  if (all || suite == Suite::Kernel) detail::kernel_suite(cfg, out);
  if (all || suite == Suite::Wavepacket) detail::wavepacket_suite(cfg, out);
  if (all || suite == Suite::Geometry) {
    if (!(cfg.lambda > 0) || !(cfg.g > 0))
      throw ValidationError("geometry suite needs lambda > 0 and g > 0");
    detail::geometry_suite(cfg, out);
  }
  return out.take();
}

inline nlohmann::json to_json(const CheckResult& c) {
  nlohmann::json j{{"check", c.check}, {"threshold", c.threshold}, {"pass", c.pass}};
  if (std::isfinite(c.residual))
    j["residual"] = c.residual;
  else
    j["residual"] = nullptr;
  return j;
}

inline nlohmann::json to_json(const std::vector<CheckResult>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

}  // namespace dampath
