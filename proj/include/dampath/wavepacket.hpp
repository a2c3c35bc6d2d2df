#pragma once

// Gaussian wavepacket evolution under the damped-system kernels:
// closed-form densities, widths, peak positions and expectation values,
// plus a quadrature oracle that applies the propagator to the initial packet.
//
// For quadratic damping the packet is Gaussian in X = e^{lambda x} / lambda
// and all densities are with respect to dX = e^{lambda x} dx. The X problem
// lives on the whole real line; the x chart only covers X > 0.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "dampath/classical.hpp"
#include "dampath/core.hpp"
#include "dampath/kernel.hpp"
#include "dampath/quadrature.hpp"

namespace dampath {

class GridError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class Chart { Position, Exponential };

struct GaussianPacket {
  double a;       // initial center, in x
  double sigma0;  // initial width, in chart units
  Chart chart;
};

inline GaussianPacket make_packet(const SystemSpec& spec, double a, double sigma0) {
  if (!std::isfinite(a)) throw ValidationError("packet center must be finite");
  if (!std::isfinite(sigma0) || sigma0 <= 0) throw ValidationError("sigma0 must be positive");
  const Chart chart =
      spec.system() == System::QuadraticGravity ? Chart::Exponential : Chart::Position;
  if (chart == Chart::Exponential) require_positive_lambda(spec, "the exponential chart");
  return {a, sigma0, chart};
}

namespace detail {

struct OscillatorBasis {
  double cos_like;  // cos(wt), 1, cosh(gt)
  double sin_like;  // sin(wt)/w, t, sinh(gt)/g
};

inline OscillatorBasis oscillator_basis(const Regime& regime, double t) {
  const double w = regime.rate;
  switch (regime.kind) {
    case RegimeKind::UnderDamped: return {std::cos(w * t), std::sin(w * t) / w};
    case RegimeKind::CriticallyDamped: return {1.0, t};
    case RegimeKind::OverDamped: return {std::cosh(w * t), std::sinh(w * t) / w};
  }
  return {1.0, t};
}

// (1 - e^{-lambda t}) / lambda, continuous at lambda = 0
inline double relaxation_time(double lambda, double t) {
  if (lambda == 0.0) return t;
  return -std::expm1(-lambda * t) / lambda;
}

// (lambda t - 1 + e^{-lambda t}) / lambda^2, continuous at lambda = 0
inline double fall_distance_factor(double lambda, double t) {
  const double z = lambda * t;
  if (std::abs(z) < 0.1) {
    // t^2 sum_k (-z)^k / (k + 2)!
    double term = 0.5;
    double sum = 0.5;
    for (int k = 1; k < 16; ++k) {
      term *= -z / (k + 2);
      sum += term;
    }
    return t * t * sum;
  }
  return (z + std::expm1(-z)) / (lambda * lambda);
}

inline double gaussian_pdf(double q, double center, double sigma) {
  const double u = (q - center) / sigma;
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * kPi * sigma * sigma);
}

}  // namespace detail

/// Width sigma_t of the evolved density (in chart units).
inline double sigma_t(const SystemSpec& spec, const GaussianPacket& packet, double t) {
  const double s0 = packet.sigma0;
  const double spread = spec.hbar() / (2.0 * spec.m() * s0 * s0);
  const double lam = spec.lambda();
  switch (spec.system()) {
    case System::DampedOscillator: {
      const auto [c, s] = detail::oscillator_basis(classify(spec), t);
      const double breathing = c + 0.5 * lam * s;
      const double disp = spread * s;
      return s0 * std::exp(-0.5 * lam * t) * std::sqrt(breathing * breathing + disp * disp);
    }
    case System::LinearGravity: {
      const double disp = spread * detail::relaxation_time(lam, t);
      return s0 * std::sqrt(1.0 + disp * disp);
    }
    case System::QuadraticGravity: {
      require_positive_lambda(spec, "quadratic-damping wavepacket");
      const double gamma = quadratic_rate(spec);
      const double disp = spread * std::sinh(gamma * t) / gamma;
      const double ch = std::cosh(gamma * t);
      return s0 * std::sqrt(ch * ch + disp * disp);
    }
  }
  return std::nan("");
}

/// Position x of maximum density.
inline double peak(const SystemSpec& spec, const GaussianPacket& packet, double t) {
  const double lam = spec.lambda();
  switch (spec.system()) {
    case System::DampedOscillator: {
      const auto [c, s] = detail::oscillator_basis(classify(spec), t);
      return packet.a * std::exp(-0.5 * lam * t) * (c + 0.5 * lam * s);
    }
    case System::LinearGravity:
      return packet.a + spec.g() * detail::fall_distance_factor(lam, t);
    case System::QuadraticGravity:
      require_positive_lambda(spec, "quadratic-damping wavepacket");
      return packet.a + detail::log_cosh(quadratic_rate(spec) * t) / lam;
  }
  return std::nan("");
}

/// Center of the Gaussian in chart coordinates (X_a cosh(gamma t) for quadratic damping).
inline double chart_center(const SystemSpec& spec, const GaussianPacket& packet, double t) {
  if (spec.system() != System::QuadraticGravity) return peak(spec, packet, t);
  return to_chart(spec, packet.a) * std::cosh(quadratic_rate(spec) * t);
}

/// |psi|^2 at chart coordinate q.
inline double density_chart(const SystemSpec& spec, const GaussianPacket& packet, double q,
                            double t) {
  return detail::gaussian_pdf(q, chart_center(spec, packet, t), sigma_t(spec, packet, t));
}

/// |psi(x_f, t)|^2, with respect to dx (dX for quadratic damping).
inline double density(const SystemSpec& spec, const GaussianPacket& packet, double x_f,
                      double t) {
  if (t < 0) throw ValidationError("density requires t >= 0");
  if (spec.system() != System::QuadraticGravity)
    return detail::gaussian_pdf(x_f, peak(spec, packet, t), sigma_t(spec, packet, t));
  const double lam = spec.lambda();
  const double st = sigma_t(spec, packet, t);
  const double gap =
      std::exp(lam * x_f) - std::exp(lam * packet.a) * std::cosh(quadratic_rate(spec) * t);
  return std::exp(-gap * gap / (2.0 * lam * lam * st * st)) / std::sqrt(2.0 * kPi * st * st);
}

/// psi(q, 0) in chart coordinates (real, normalized in the chart measure).
inline double initial_wavefunction(const SystemSpec& spec, const GaussianPacket& packet,
                                   double q) {
  const double s0 = packet.sigma0;
  const double u = q - to_chart(spec, packet.a);
  return std::pow(2.0 * kPi * s0 * s0, -0.25) * std::exp(-u * u / (4.0 * s0 * s0));
}

struct MeanValues {
  double mean_x;  // for quadratic damping: a + ln(cosh(gamma t)) / lambda
  std::optional<double> mean_exp_lambda_x;  // <e^{lambda x}> in dX measure, quadratic damping only
};

inline MeanValues mean_x(const SystemSpec& spec, const GaussianPacket& packet, double t) {
  if (spec.system() != System::QuadraticGravity) return {peak(spec, packet, t), std::nullopt};
  const double lam = spec.lambda();
  return {peak(spec, packet, t),
          std::exp(lam * packet.a) * std::cosh(quadratic_rate(spec) * t)};
}

struct XChartMoments {
  double covered_mass;  // dX-measure mass at X > 0
  double mean_x;        // <x> over X > 0, renormalized by covered_mass
};

/// Quadratic damping: how much of the X-space density the x chart sees, and
/// the numerically integrated mean of x over that part.
inline XChartMoments x_chart_moments(const SystemSpec& spec, const GaussianPacket& packet,
                                     double t) {
  if (spec.system() != System::QuadraticGravity)
    throw UnsupportedSystemError("x-chart moments apply to quadratic damping");
  const double lam = spec.lambda();
  const double center = chart_center(spec, packet, t);
  const double st = sigma_t(spec, packet, t);
  const double covered = 0.5 * std::erfc(-center / (st * std::sqrt(2.0)));
  const double q_hi = center + 14.0 * st;
  const double q_lo = std::max(center - 14.0 * st, 1e-14 * q_hi);
  const double x_lo = from_chart(spec, q_lo);
  const double x_hi = from_chart(spec, q_hi);
  auto weighted = [&](double x) {
    return x * density(spec, packet, x, t) * std::exp(lam * x);
  };
  const auto first = integrate_by_doubling(weighted, x_lo, x_hi, 1e-12, 1e-14, 16);
  return {covered, first.value / covered};
}

/// Numerical int |psi(q, t)|^2 dq over the chart line.
inline double normalization_numeric(const SystemSpec& spec, const GaussianPacket& packet,
                                    double t) {
  const double center = chart_center(spec, packet, t);
  const double st = sigma_t(spec, packet, t);
  auto rho = [&](double q) { return density_chart(spec, packet, q, t); };
  return integrate_by_doubling(rho, center - 14.0 * st, center + 14.0 * st, 1e-13, 0.0, 8)
      .value;
}

struct QuadratureGrid {
  double q_min;
  double q_max;
  int n;
};

struct WaveSample {
  double q;
  Amplitude psi;
};

inline constexpr double kGridMassThreshold = 1e-12;

/// Output grid in chart coordinates that holds both the initial packet and
/// the packet at time t.
inline QuadratureGrid auto_grid(const SystemSpec& spec, const GaussianPacket& packet, double t,
                                int n = 401) {
  const double c0 = to_chart(spec, packet.a);
  const double ct = chart_center(spec, packet, t);
  const double width = 12.0 * std::max(packet.sigma0, sigma_t(spec, packet, t));
  return {std::min(c0, ct) - width, std::max(c0, ct) + width, n};
}

/// psi(q, t) = int K(q, t; q', 0) psi(q', 0) dq' by Gauss-Legendre panels over
/// q' in [center - 10 sigma0, center + 10 sigma0], doubling until successive
/// results agree to 1e-10.
inline Amplitude propagate_numeric_at(const SystemSpec& spec, const GaussianPacket& packet,
                                      double t, double q) {
  if (t < 0) throw ValidationError("propagation requires t >= 0");
  if (t == 0) return initial_wavefunction(spec, packet, q);
  const Kernel kernel(spec);
  const Amplitude phi = kernel.prefactor(0.0, t);
  const double hbar = spec.hbar();
  const double c0 = to_chart(spec, packet.a);
  const double reach = 10.0 * packet.sigma0;
  auto integrand = [&](double qi) {
    const double action = chart_action<double>(spec, qi, 0.0, q, t);
    return phi * std::polar(1.0, action / hbar) * initial_wavefunction(spec, packet, qi);
  };
  const double scale = std::pow(2.0 * kPi * packet.sigma0 * packet.sigma0, -0.25);
  return integrate_by_doubling(integrand, c0 - reach, c0 + reach, 1e-10, 1e-10 * scale, 8)
      .value;
}

inline std::vector<WaveSample> propagate_numeric(const SystemSpec& spec,
                                                 const GaussianPacket& packet, double t,
                                                 const QuadratureGrid& grid) {
  if (grid.n < 256) throw ValidationError("propagation grid needs n >= 256");
  if (!(grid.q_max > grid.q_min)) throw ValidationError("grid requires q_max > q_min");
  const double c0 = to_chart(spec, packet.a);
  const double root2 = std::sqrt(2.0) * packet.sigma0;
  const double outside = 0.5 * std::erfc((c0 - grid.q_min) / root2) +
                         0.5 * std::erfc((grid.q_max - c0) / root2);
  if (outside > kGridMassThreshold)
    throw GridError("grid too narrow: initial packet mass outside is " + std::to_string(outside));

  std::vector<WaveSample> out;
  out.reserve(grid.n);
  const double step = (grid.q_max - grid.q_min) / (grid.n - 1);
  for (int k = 0; k < grid.n; ++k) {
    const double q = grid.q_min + k * step;
    out.push_back({q, propagate_numeric_at(spec, packet, t, q)});
  }
  return out;
}

/// Time after which sigma_t stays below sigma0 up to t_max, or nullopt if
/// sigma_t(t_max) >= sigma0. Scans with step dt, refines by bisection.
inline std::optional<double> localization_onset(const SystemSpec& spec,
                                                const GaussianPacket& packet, double t_max,
                                                double dt = 1e-2) {
  const double s0 = packet.sigma0;
  auto above = [&](double t) { return sigma_t(spec, packet, t) >= s0; };
  if (above(t_max)) return std::nullopt;
  const int steps = static_cast<int>(std::ceil(t_max / dt));
  double last_above = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const double t = std::min(t_max, k * dt);
    if (above(t)) last_above = t;
  }
  if (last_above == 0.0) return 0.0;
  double lo = last_above;
  double hi = std::min(t_max, last_above + dt);
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace dampath
