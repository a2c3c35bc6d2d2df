#pragma once

// Classical side of the damped systems: closed-form trajectories,
// boundary-value constants, Lagrangians, classical actions, and the
// numerical oracles (Simpson action integral, RK4, finite-difference
// equation-of-motion residuals) used to check them.

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "dampath/core.hpp"
#include "dampath/finite_difference.hpp"
#include "dampath/ode.hpp"
#include "dampath/quadrature.hpp"

namespace dampath {

inline constexpr double kCausticTolerance = 1e-12;

namespace detail {

// ln cosh(u) and ln|sinh(u)| without overflow for large |u|.
inline double log_cosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

inline double log_abs_sinh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(-std::exp(-2.0 * a)) - std::numbers::ln2;
}

inline void require_no_caustic(const Regime& regime, double duration) {
  if (regime.kind == RegimeKind::UnderDamped &&
      std::abs(std::sin(regime.rate * duration)) < kCausticTolerance)
    throw CausticError("sin(omega T) vanishes: endpoints are conjugate points");
}

}  // namespace detail

/// Branch of the quadratic-damping solution x = ln|F(gamma t + A)| / lambda + B.
/// Cosh is the printed general solution (speed below terminal); Sinh covers
/// speeds above terminal, Exp* the separatrix moving at exactly terminal speed.
enum class QuadraticBranch { Cosh, Sinh, ExpUp, ExpDown };

struct TrajectoryPoint {
  double x;
  double v;
  bool extrapolated;
};

/// Closed-form classical solution with integration constants A, B.
///   oscillator: e^{-lambda t/2} [A c(t) + B s(t)] with (cos, sin), (1, t) or (cosh, sinh)
///   linear gravity: A + B e^{-lambda t} + g t / lambda
///   quadratic gravity: ln|F(gamma t + A)| / lambda + B
class Trajectory {
 public:
  Trajectory(SystemSpec spec, double a, double b,
             QuadraticBranch branch = QuadraticBranch::Cosh,
             std::optional<std::pair<double, double>> interval = std::nullopt)
      : spec_(std::move(spec)), a_(a), b_(b), branch_(branch), interval_(interval) {
    if (spec_.system() == System::DampedOscillator) {
      regime_ = classify(spec_);
    } else {
      require_positive_lambda(spec_, "the gravity trajectories");
    }
  }

  const SystemSpec& spec() const { return spec_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::optional<Regime>& regime() const { return regime_; }
  QuadraticBranch branch() const { return branch_; }
  const std::optional<std::pair<double, double>>& interval() const { return interval_; }

  double position(double t) const {
    const double lam = spec_.lambda();
    switch (spec_.system()) {
      case System::DampedOscillator: {
        const double env = std::exp(-0.5 * lam * t);
        const double w = regime_->rate;
        switch (regime_->kind) {
          case RegimeKind::UnderDamped: return env * (a_ * std::cos(w * t) + b_ * std::sin(w * t));
          case RegimeKind::CriticallyDamped: return env * (a_ + b_ * t);
          case RegimeKind::OverDamped: return env * (a_ * std::cosh(w * t) + b_ * std::sinh(w * t));
        }
        break;
      }
      case System::LinearGravity:
        return a_ + b_ * std::exp(-lam * t) + spec_.g() / lam * t;
      case System::QuadraticGravity: {
        const double gamma = quadratic_rate(spec_);
        const double u = gamma * t + a_;
        switch (branch_) {
          case QuadraticBranch::Cosh: return detail::log_cosh(u) / lam + b_;
          case QuadraticBranch::Sinh: return detail::log_abs_sinh(u) / lam + b_;
          case QuadraticBranch::ExpUp: return u / lam + b_;
          case QuadraticBranch::ExpDown: return -u / lam + b_;
        }
        break;
      }
    }
    return std::nan("");
  }

  double velocity(double t) const {
    const double lam = spec_.lambda();
    switch (spec_.system()) {
      case System::DampedOscillator: {
        const double env = std::exp(-0.5 * lam * t);
        const double w = regime_->rate;
        double u = 0.0;
        double du = 0.0;
        switch (regime_->kind) {
          case RegimeKind::UnderDamped:
            u = a_ * std::cos(w * t) + b_ * std::sin(w * t);
            du = w * (-a_ * std::sin(w * t) + b_ * std::cos(w * t));
            break;
          case RegimeKind::CriticallyDamped:
            u = a_ + b_ * t;
            du = b_;
            break;
          case RegimeKind::OverDamped:
            u = a_ * std::cosh(w * t) + b_ * std::sinh(w * t);
            du = w * (a_ * std::sinh(w * t) + b_ * std::cosh(w * t));
            break;
        }
        return env * (du - 0.5 * lam * u);
      }
      case System::LinearGravity:
        return -lam * b_ * std::exp(-lam * t) + spec_.g() / lam;
      case System::QuadraticGravity: {
        const double gamma = quadratic_rate(spec_);
        const double u = gamma * t + a_;
        switch (branch_) {
          case QuadraticBranch::Cosh: return gamma / lam * std::tanh(u);
          case QuadraticBranch::Sinh: return gamma / lam / std::tanh(u);
          case QuadraticBranch::ExpUp: return gamma / lam;
          case QuadraticBranch::ExpDown: return -gamma / lam;
        }
        break;
      }
    }
    return std::nan("");
  }

 private:
  SystemSpec spec_;
  double a_;
  double b_;
  QuadraticBranch branch_;
  std::optional<std::pair<double, double>> interval_;
  std::optional<Regime> regime_;
};

inline TrajectoryPoint eval_trajectory(const Trajectory& traj, double t) {
  bool outside = false;
  if (const auto& iv = traj.interval()) outside = t < iv->first || t > iv->second;
  return {traj.position(t), traj.velocity(t), outside};
}

/// Integration constants from x(t_i) = x_i, x(t_f) = x_f.
inline Trajectory solve_bvp(const SystemSpec& spec, const BoundaryData& bd) {
  require_valid(bd);
  const double lam = spec.lambda();
  const double T = bd.duration();
  const auto interval = std::make_optional(std::make_pair(bd.ti, bd.tf));

  switch (spec.system()) {
    case System::DampedOscillator: {
      const Regime regime = classify(spec);
      detail::require_no_caustic(regime, T);
      // scaled endpoints x e^{lambda t/2}
      const double si = bd.xi * std::exp(0.5 * lam * bd.ti);
      const double sf = bd.xf * std::exp(0.5 * lam * bd.tf);
      const double w = regime.rate;
      double a = 0.0;
      double b = 0.0;
      switch (regime.kind) {
        case RegimeKind::UnderDamped: {
          const double den = std::sin(w * T);
          a = (si * std::sin(w * bd.tf) - sf * std::sin(w * bd.ti)) / den;
          b = (sf * std::cos(w * bd.ti) - si * std::cos(w * bd.tf)) / den;
          break;
        }
        case RegimeKind::CriticallyDamped:
          a = (si * bd.tf - sf * bd.ti) / T;
          b = (sf - si) / T;
          break;
        case RegimeKind::OverDamped: {
          const double den = std::sinh(w * T);
          a = (si * std::sinh(w * bd.tf) - sf * std::sinh(w * bd.ti)) / den;
          b = (sf * std::cosh(w * bd.ti) - si * std::cosh(w * bd.tf)) / den;
          break;
        }
      }
      return Trajectory(spec, a, b, QuadraticBranch::Cosh, interval);
    }
    case System::LinearGravity: {
      require_positive_lambda(spec, "linear-gravity boundary-value problem");
      const double g = spec.g();
      const double ei = std::exp(-lam * bd.ti);
      const double ef = std::exp(-lam * bd.tf);
      const double den = ef - ei;
      const double a = ((bd.xi * ef - bd.xf * ei) + g / lam * (bd.tf * ei - bd.ti * ef)) / den;
      const double b = ((bd.xf - bd.xi) - g / lam * T) / den;
      return Trajectory(spec, a, b, QuadraticBranch::Cosh, interval);
    }
    case System::QuadraticGravity: {
      require_positive_lambda(spec, "quadratic-gravity boundary-value problem");
      const double gamma = quadratic_rate(spec);
      const double tau = gamma * T;
      const double rho = lam * (bd.xf - bd.xi);
      // F(u_i + tau) / F(u_i) = e^{rho}:  F'(u_i)/F(u_i) = (e^rho - cosh tau) / sinh tau
      const double q = (std::exp(rho) - std::cosh(tau)) / std::sinh(tau);
      if (std::abs(std::abs(rho) - tau) <= 1e-14 * tau) {
        const auto branch = rho > 0 ? QuadraticBranch::ExpUp : QuadraticBranch::ExpDown;
        const double s = rho > 0 ? 1.0 : -1.0;
        return Trajectory(spec, 0.0, bd.xi - s * gamma * bd.ti / lam, branch, interval);
      }
      if (std::abs(rho) < tau) {
        const double ui = std::atanh(q);
        return Trajectory(spec, ui - gamma * bd.ti, bd.xi - detail::log_cosh(ui) / lam,
                          QuadraticBranch::Cosh, interval);
      }
      const double ui = std::atanh(1.0 / q);
      return Trajectory(spec, ui - gamma * bd.ti, bd.xi - detail::log_abs_sinh(ui) / lam,
                        QuadraticBranch::Sinh, interval);
    }
  }
  throw UnsupportedSystemError("unknown system");
}

/// Integration constants from x(t0) = x0, x'(t0) = v0.
inline Trajectory trajectory_from_initial(const SystemSpec& spec, double x0, double v0,
                                          double t0 = 0.0) {
  const double lam = spec.lambda();
  switch (spec.system()) {
    case System::DampedOscillator: {
      const Regime regime = classify(spec);
      const double w = regime.rate;
      // u(t) = x e^{lambda t/2} = A c(t) + B s(t);  u' = e^{lambda t/2}(v + lambda x / 2)
      const double env = std::exp(0.5 * lam * t0);
      const double u0 = x0 * env;
      const double du0 = env * (v0 + 0.5 * lam * x0);
      double c = 1.0, s = t0, dc = 0.0, ds = 1.0;
      if (regime.kind == RegimeKind::UnderDamped) {
        c = std::cos(w * t0), s = std::sin(w * t0), dc = -w * s, ds = w * c;
      } else if (regime.kind == RegimeKind::OverDamped) {
        c = std::cosh(w * t0), s = std::sinh(w * t0), dc = w * s, ds = w * c;
      }
      const double det = c * ds - s * dc;
      return Trajectory(spec, (u0 * ds - s * du0) / det, (c * du0 - dc * u0) / det);
    }
    case System::LinearGravity: {
      require_positive_lambda(spec, "linear-gravity trajectory");
      const double g = spec.g();
      const double b = -(v0 - g / lam) * std::exp(lam * t0) / lam;
      return Trajectory(spec, x0 - b * std::exp(-lam * t0) - g * t0 / lam, b);
    }
    case System::QuadraticGravity: {
      require_positive_lambda(spec, "quadratic-gravity trajectory");
      const double gamma = quadratic_rate(spec);
      const double q = lam * v0 / gamma;  // v0 over terminal speed
      if (std::abs(q) < 1.0) {
        const double u0 = std::atanh(q);
        return Trajectory(spec, u0 - gamma * t0, x0 - detail::log_cosh(u0) / lam);
      }
      if (std::abs(q) > 1.0) {
        const double u0 = std::atanh(1.0 / q);
        return Trajectory(spec, u0 - gamma * t0, x0 - detail::log_abs_sinh(u0) / lam,
                          QuadraticBranch::Sinh);
      }
      const auto branch = q > 0 ? QuadraticBranch::ExpUp : QuadraticBranch::ExpDown;
      return Trajectory(spec, 0.0, x0 - q * gamma * t0 / lam, branch);
    }
  }
  throw UnsupportedSystemError("unknown system");
}

enum class LagrangianForm { Exponential, SquareRoot };

/// Exponential form: e^{lambda t}-weighted Lagrangians of the oscillator and
/// linear gravity, (m v^2/2 + m g / 2 lambda) e^{2 lambda x} for quadratic
/// gravity. SquareRoot: -sqrt(1 - lambda v^2 / g) e^{-lambda x}, quadratic
/// gravity only, defined up to an overall constant.
inline double lagrangian(const SystemSpec& spec, double x, double v, double t,
                         LagrangianForm form = LagrangianForm::Exponential) {
  const double m = spec.m();
  const double lam = spec.lambda();
  if (form == LagrangianForm::SquareRoot) {
    if (spec.system() != System::QuadraticGravity)
      throw UnsupportedSystemError("square-root Lagrangian is defined for quadratic damping");
    const double arg = 1.0 - lam / spec.g() * v * v;
    if (arg < 0) throw DomainError("square-root Lagrangian needs lambda v^2 / g <= 1");
    return -std::sqrt(arg) * std::exp(-lam * x);
  }
  switch (spec.system()) {
    case System::DampedOscillator: {
      const double w0 = spec.omega0();
      return (0.5 * m * v * v - 0.5 * m * w0 * w0 * x * x) * std::exp(lam * t);
    }
    case System::LinearGravity:
      return (0.5 * m * v * v + m * spec.g() * x) * std::exp(lam * t);
    case System::QuadraticGravity:
      require_positive_lambda(spec, "quadratic-damping Lagrangian");
      return (0.5 * m * v * v + m * spec.g() / (2.0 * lam)) * std::exp(2.0 * lam * x);
  }
  throw UnsupportedSystemError("unknown system");
}

/// Classical action between chart coordinates q_i = q(t_i), q_f = q(t_f).
/// The chart is x except for quadratic damping, where it is X = e^{lambda x}/lambda
/// and the action is that of an oscillator with imaginary frequency i*gamma.
/// Templated so oracles can evaluate in extended precision.
template <class Real>
Real chart_action(const SystemSpec& spec, Real qi, Real ti, Real qf, Real tf) {
  using std::exp, std::sqrt, std::tan, std::tanh;
  const Real m = spec.m();
  const Real lam = spec.lambda();
  const Real T = tf - ti;
  if (!(T > 0)) throw ValidationError("action requires t_f > t_i");

  switch (spec.system()) {
    case System::DampedOscillator: {
      const Regime regime = classify(spec);
      detail::require_no_caustic(regime, static_cast<double>(T));
      const Real half = Real(0.5) * lam;
      const Real w0 = spec.omega0();
      const Real ei = exp(lam * ti);
      const Real ef = exp(lam * tf);
      const Real damping_term = m * lam / 4 * (qi * qi * ei - qf * qf * ef);
      // with a = q_i e^{lambda t_i / 2}, b = q_f e^{lambda t_f / 2} the bracket
      // (a^2 + b^2) cos(wT) - 2ab is written as (a - b)^2 cos(wT) - 4ab sin^2(wT / 2),
      // which avoids the cancellation in cos(wT) - 1 at short times
      const Real a = qi * exp(half * ti);
      const Real b = qf * exp(half * tf);
      const Real d2 = (a - b) * (a - b);
      switch (regime.kind) {
        case RegimeKind::UnderDamped: {
          const Real w = sqrt((w0 - half) * (w0 + half));
          return m * w * (d2 / (2 * tan(w * T)) - a * b * tan(w * T / 2)) + damping_term;
        }
        case RegimeKind::CriticallyDamped:
          return m / (2 * T) * d2 + damping_term;
        case RegimeKind::OverDamped: {
          const Real gam = sqrt((half - w0) * (half + w0));
          return m * gam * (d2 / (2 * tanh(gam * T)) + a * b * tanh(gam * T / 2)) + damping_term;
        }
      }
      break;
    }
    case System::LinearGravity: {
      require_positive_lambda(spec, "linear-gravity action");
      const Real g = spec.g();
      const Real ei = exp(lam * ti);
      const Real ef = exp(lam * tf);
      const Real u = qf - qi - g / lam * T;
      return m * lam * exp(lam * (ti + tf)) / (2 * (ef - ei)) * u * u +
             m * g / lam * (qf * ef - qi * ei) -
             m * g * g / (2 * lam * lam * lam) * (ef - ei);
    }
    case System::QuadraticGravity: {
      require_positive_lambda(spec, "quadratic-damping action");
      const Real gam = sqrt(Real(spec.g()) * lam);
      const Real d = qi - qf;
      return m * gam * (d * d / (2 * tanh(gam * T)) + qi * qf * tanh(gam * T / 2));
    }
  }
  throw UnsupportedSystemError("unknown system");
}

/// Classical action S of the extremal path between the boundary points.
inline double action_closed_form(const SystemSpec& spec, const BoundaryData& bd) {
  require_valid(bd);
  return chart_action<double>(spec, to_chart(spec, bd.xi), bd.ti, to_chart(spec, bd.xf), bd.tf);
}

/// Simpson-rule integral of the (exponential-form) Lagrangian along `traj`.
inline double action_numeric(const Trajectory& traj, double ti, double tf, int n_steps) {
  if (n_steps < 16) throw ValidationError("action_numeric needs at least 16 steps");
  if (n_steps % 2 != 0) ++n_steps;
  const SystemSpec& spec = traj.spec();
  auto integrand = [&](double t) {
    return lagrangian(spec, traj.position(t), traj.velocity(t), t);
  };
  return simpson(integrand, ti, tf, n_steps);
}

inline double action_numeric(const Trajectory& traj, int n_steps) {
  if (!traj.interval()) throw ValidationError("trajectory carries no time interval");
  return action_numeric(traj, traj.interval()->first, traj.interval()->second, n_steps);
}

/// Acceleration demanded by the equation of motion.
inline double eom_acceleration(const SystemSpec& spec, double x, double v) {
  const double lam = spec.lambda();
  switch (spec.system()) {
    case System::DampedOscillator: return -lam * v - spec.omega0() * spec.omega0() * x;
    case System::LinearGravity: return spec.g() - lam * v;
    case System::QuadraticGravity: return spec.g() - lam * v * v;
  }
  return std::nan("");
}

struct PhaseSample {
  double t;
  double x;
  double v;
};

/// RK4 solution of the equation of motion, sampled at every step.
inline std::vector<PhaseSample> integrate_ivp(const SystemSpec& spec, double x0, double v0,
                                              double t0, double t1, double dt) {
  auto rhs = [&spec](double, const OdeState<2>& y) -> OdeState<2> {
    return {y[1], eom_acceleration(spec, y[0], y[1])};
  };
  const auto raw = rk4_integrate<2>(rhs, t0, OdeState<2>{x0, v0}, t1, dt);
  std::vector<PhaseSample> out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.push_back({s.t, s.y[0], s.y[1]});
  return out;
}

/// Default RK4 step: 10^4 steps across the interval.
inline double default_rk4_step(double t0, double t1) { return std::abs(t1 - t0) / 1e4; }

/// |x'' - a(x, x')| for the closed-form trajectory, derivatives by five-point
/// differences of the position with step h = step_scale * max(1, |t|).
inline double eom_residual(const Trajectory& traj, double t, double step_scale = 1e-3) {
  const double h = step_scale * std::max(1.0, std::abs(t));
  auto x = [&traj](double s) { return traj.position(s); };
  const double v = fd::first_derivative(x, t, h);
  const double acc = fd::second_derivative(x, t, h);
  return std::abs(acc - eom_acceleration(traj.spec(), traj.position(t), v));
}

/// Finite-difference Euler-Lagrange residual d/dt(dL/dv) - dL/dx along a path.
/// `lag(x, v, t)`, `pos(t)`, `vel(t)`; all derivatives five-point with step h.
template <class Lagrangian, class Position, class Velocity>
double euler_lagrange_residual(const Lagrangian& lag, const Position& pos, const Velocity& vel,
                               double t, double h = 1e-3) {
  auto momentum = [&](double s) {
    const double x = pos(s);
    return fd::first_derivative([&](double v) { return lag(x, v, s); }, vel(s), h);
  };
  const double dp_dt = fd::first_derivative(momentum, t, h);
  const double v = vel(t);
  const double force = fd::first_derivative([&](double x) { return lag(x, v, t); }, pos(t), h);
  return std::abs(dp_dt - force);
}

}  // namespace dampath
