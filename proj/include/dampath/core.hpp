#pragma once

// Shared domain types for the damped-system propagators: system
// parameters, damping-regime classification and the coordinate chart in
// which each system's action is quadratic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dampath {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or contradictory input parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the selected system.
class UnsupportedSystemError : public Error {
 public:
  using Error::Error;
};

/// Boundary-value problem degenerates (sin(omega T) = 0).
class CausticError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside an operation's domain (e.g. division by a zero damping rate).
class DomainError : public Error {
 public:
  using Error::Error;
};

using Amplitude = std::complex<double>;

enum class System { DampedOscillator, LinearGravity, QuadraticGravity };

inline std::string_view to_string(System s) {
  switch (s) {
    case System::DampedOscillator: return "oscillator";
    case System::LinearGravity: return "linear-gravity";
    case System::QuadraticGravity: return "quadratic-gravity";
  }
  return "unknown";
}

inline std::optional<System> parse_system(std::string_view name) {
  if (name == "oscillator") return System::DampedOscillator;
  if (name == "linear-gravity") return System::LinearGravity;
  if (name == "quadratic-gravity") return System::QuadraticGravity;
  return std::nullopt;
}

/// Which damped system plus its physical parameters. Immutable once built;
/// use the named factories, which validate.
class SystemSpec {
 public:
  static SystemSpec make(System system, double m, double lambda,
                         std::optional<double> omega0, std::optional<double> g,
                         double hbar) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(m) || m <= 0) throw ValidationError("mass must be positive");
    if (!finite(hbar) || hbar <= 0) throw ValidationError("hbar must be positive");
    if (!finite(lambda) || lambda < 0)
      throw ValidationError("damping rate lambda must be >= 0");
    if (system == System::DampedOscillator) {
      if (g) throw ValidationError("oscillator takes no gravitational acceleration");
      if (!omega0) throw ValidationError("oscillator requires omega0");
      if (!finite(*omega0) || *omega0 < 0) throw ValidationError("omega0 must be >= 0");
    } else {
      if (omega0) throw ValidationError("gravity systems take no omega0");
      if (!g) throw ValidationError("gravity systems require g");
      if (!finite(*g) || *g <= 0) throw ValidationError("g must be positive");
    }
    return SystemSpec(system, m, lambda, omega0, g, hbar);
  }

  static SystemSpec oscillator(double lambda, double omega0, double m = 1.0,
                               double hbar = 1.0) {
    return make(System::DampedOscillator, m, lambda, omega0, std::nullopt, hbar);
  }
  static SystemSpec linear_gravity(double lambda, double g, double m = 1.0,
                                   double hbar = 1.0) {
    return make(System::LinearGravity, m, lambda, std::nullopt, g, hbar);
  }
  static SystemSpec quadratic_gravity(double lambda, double g, double m = 1.0,
                                      double hbar = 1.0) {
    return make(System::QuadraticGravity, m, lambda, std::nullopt, g, hbar);
  }

  System system() const { return system_; }
  double m() const { return m_; }
  double lambda() const { return lambda_; }
  double hbar() const { return hbar_; }

  double omega0() const {
    if (!omega0_) throw UnsupportedSystemError("omega0 is only defined for the oscillator");
    return *omega0_;
  }
  double g() const {
    if (!g_) throw UnsupportedSystemError("g is only defined for gravity systems");
    return *g_;
  }
  bool has_omega0() const { return omega0_.has_value(); }
  bool has_g() const { return g_.has_value(); }

  bool operator==(const SystemSpec&) const = default;

 private:
  SystemSpec(System system, double m, double lambda, std::optional<double> omega0,
             std::optional<double> g, double hbar)
      : system_(system), m_(m), lambda_(lambda), omega0_(omega0), g_(g), hbar_(hbar) {}

  System system_;
  double m_;
  double lambda_;
  std::optional<double> omega0_;
  std::optional<double> g_;
  double hbar_;
};

enum class RegimeKind { UnderDamped, CriticallyDamped, OverDamped };

inline std::string_view to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::UnderDamped: return "UD";
    case RegimeKind::CriticallyDamped: return "CD";
    case RegimeKind::OverDamped: return "OD";
  }
  return "?";
}

/// Oscillator regime. `rate` is omega (UD) or gamma (OD); zero for CD.
struct Regime {
  RegimeKind kind;
  double rate;
};

inline constexpr double kDefaultRegimeTolerance = 1e-12;

/// Compares lambda against 2*omega0. Inputs within `tol` (relative) of the
/// critical line are CD; everything else is treated as genuinely UD/OD.
inline Regime classify(const SystemSpec& spec, double tol = kDefaultRegimeTolerance) {
  if (spec.system() != System::DampedOscillator)
    throw UnsupportedSystemError("regime classification needs the damped oscillator");
  const double half_lambda = 0.5 * spec.lambda();
  const double w0 = spec.omega0();
  const double scale = std::max(spec.lambda(), 2.0 * w0);
  if (std::abs(spec.lambda() - 2.0 * w0) <= tol * scale)
    return {RegimeKind::CriticallyDamped, 0.0};
  // factored form keeps the rate accurate near the critical line
  if (half_lambda < w0)
    return {RegimeKind::UnderDamped, std::sqrt((w0 - half_lambda) * (w0 + half_lambda))};
  return {RegimeKind::OverDamped, std::sqrt((half_lambda - w0) * (half_lambda + w0))};
}

struct SpacetimePoint {
  double x;
  double t;
};

/// Endpoints (x_i, t_i) -> (x_f, t_f) of a propagation.
struct BoundaryData {
  double xi;
  double ti;
  double xf;
  double tf;

  double duration() const { return tf - ti; }
  SpacetimePoint start() const { return {xi, ti}; }
  SpacetimePoint end() const { return {xf, tf}; }
};

inline void require_valid(const BoundaryData& bd) {
  if (!std::isfinite(bd.xi) || !std::isfinite(bd.xf) || !std::isfinite(bd.ti) ||
      !std::isfinite(bd.tf))
    throw ValidationError("boundary data must be finite");
  if (!(bd.tf > bd.ti)) throw ValidationError("boundary data requires t_f > t_i");
}

/// sqrt(g * lambda), the inverted-oscillator rate of quadratic damping.
inline double quadratic_rate(const SystemSpec& spec) {
  return std::sqrt(spec.g() * spec.lambda());
}

inline void require_positive_lambda(const SystemSpec& spec, std::string_view what) {
  if (!(spec.lambda() > 0))
    throw DomainError(std::string(what) + " requires lambda > 0");
}

/// Coordinate in which the system's action is quadratic: x itself, or
/// X = e^{lambda x} / lambda for quadratic damping.
inline double to_chart(const SystemSpec& spec, double x) {
  if (spec.system() != System::QuadraticGravity) return x;
  require_positive_lambda(spec, "the exponential chart");
  return std::exp(spec.lambda() * x) / spec.lambda();
}

inline double from_chart(const SystemSpec& spec, double q) {
  if (spec.system() != System::QuadraticGravity) return q;
  require_positive_lambda(spec, "the exponential chart");
  if (!(q > 0)) throw DomainError("X must be positive to map back to x");
  return std::log(spec.lambda() * q) / spec.lambda();
}

/// dX/dx, the density of the chart measure relative to dx.
inline double chart_jacobian(const SystemSpec& spec, double x) {
  if (spec.system() != System::QuadraticGravity) return 1.0;
  return std::exp(spec.lambda() * x);
}

inline constexpr double kPi = std::numbers::pi;

}  // namespace dampath
