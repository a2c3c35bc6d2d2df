#pragma once

// Closed-form propagators K = phi(t_f, t_i) exp(i S_cl / hbar) for the three
// damped systems, with two independent checks of the prefactor: the Van
// Vleck relation |phi|^2 = |d^2 S / dq_i dq_f| / (2 pi hbar) and the
// composition (transitivity) law evaluated as a complex Gaussian integral.

#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include "dampath/classical.hpp"
#include "dampath/core.hpp"
#include "dampath/quadrature.hpp"

namespace dampath {

/// S(q_i, q_f) = a q_i^2 + b q_i q_f + c q_f^2 + d q_i + e q_f + f in chart coordinates.
struct QuadraticActionForm {
  double a;
  double b;
  double c;
  double d;
  double e;
  double f;

  double operator()(double qi, double qf) const {
    return a * qi * qi + b * qi * qf + c * qf * qf + d * qi + e * qf + f;
  }
};

/// Coefficients of the classical action, expanded in the chart coordinates.
inline QuadraticActionForm action_form(const SystemSpec& spec, double ti, double tf) {
  const double T = tf - ti;
  if (!(T > 0)) throw ValidationError("action form requires t_f > t_i");
  const double m = spec.m();
  const double lam = spec.lambda();

  switch (spec.system()) {
    case System::DampedOscillator: {
      const Regime regime = classify(spec);
      detail::require_no_caustic(regime, T);
      const double w = regime.rate;
      // cos-like and sin(wT)/w-like basis values at T
      double cl = 1.0;
      double sl = T;
      if (regime.kind == RegimeKind::UnderDamped) {
        cl = std::cos(w * T), sl = std::sin(w * T) / w;
      } else if (regime.kind == RegimeKind::OverDamped) {
        cl = std::cosh(w * T), sl = std::sinh(w * T) / w;
      }
      const double ei = std::exp(lam * ti);
      const double ef = std::exp(lam * tf);
      const double em = std::exp(0.5 * lam * (ti + tf));
      return {(m * cl / (2 * sl) + m * lam / 4) * ei, -m * em / sl,
              (m * cl / (2 * sl) - m * lam / 4) * ef, 0.0, 0.0, 0.0};
    }
    case System::LinearGravity: {
      require_positive_lambda(spec, "linear-gravity action");
      const double g = spec.g();
      const double ei = std::exp(lam * ti);
      const double ef = std::exp(lam * tf);
      const double p = m * lam * std::exp(lam * (ti + tf)) / (2 * ei * std::expm1(lam * T));
      const double drift = g * T / lam;
      return {p,
              -2 * p,
              p,
              2 * p * drift - m * g / lam * ei,
              -2 * p * drift + m * g / lam * ef,
              p * drift * drift - m * g * g / (2 * lam * lam * lam) * (ef - ei)};
    }
    case System::QuadraticGravity: {
      require_positive_lambda(spec, "quadratic-damping action");
      const double gamma = quadratic_rate(spec);
      const double sh = std::sinh(gamma * T);
      const double diag = m * gamma * std::cosh(gamma * T) / (2 * sh);
      return {diag, -m * gamma / sh, diag, 0.0, 0.0, 0.0};
    }
  }
  throw UnsupportedSystemError("unknown system");
}

/// Integral over the real line of exp(i (alpha x^2 + beta x + delta)),
/// sqrt(i pi / alpha) exp(i (delta - beta^2 / 4 alpha)) on the principal branch.
inline Amplitude gaussian_integral(double alpha, double beta, double delta) {
  if (alpha == 0.0) throw DomainError("Gaussian integral with vanishing quadratic coefficient");
  const Amplitude root = std::sqrt(Amplitude(0.0, kPi / alpha));
  return root * std::polar(1.0, delta - beta * beta / (4.0 * alpha));
}

/// Propagator of one damped system. Immutable; evaluation is pure.
class Kernel {
 public:
  explicit Kernel(SystemSpec spec) : spec_(std::move(spec)) {
    if (spec_.system() == System::DampedOscillator) regime_ = classify(spec_);
    if (spec_.system() != System::DampedOscillator)
      require_positive_lambda(spec_, "the gravity kernels");
  }

  const SystemSpec& spec() const { return spec_; }
  const std::optional<Regime>& regime() const { return regime_; }

  /// phi(t_f, t_i) with sqrt(1/i) = e^{-i pi/4}; for the underdamped
  /// oscillator each caustic crossed adds a Maslov factor e^{-i pi/2}.
  Amplitude prefactor(double ti, double tf) const {
    const double T = tf - ti;
    if (!(T > 0)) throw ValidationError("kernel requires t_f > t_i");
    const double m = spec_.m();
    const double lam = spec_.lambda();
    const double two_pi_hbar = 2.0 * kPi * spec_.hbar();
    double ratio = 0.0;
    double phase = -0.25 * kPi;

    switch (spec_.system()) {
      case System::DampedOscillator: {
        detail::require_no_caustic(*regime_, T);
        const double w = regime_->rate;
        const double em = std::exp(0.5 * lam * (ti + tf));
        switch (regime_->kind) {
          case RegimeKind::UnderDamped: {
            ratio = m * w * em / (two_pi_hbar * std::abs(std::sin(w * T)));
            const double crossings = std::floor(w * T / kPi);
            phase -= 0.5 * kPi * crossings;
            break;
          }
          case RegimeKind::CriticallyDamped:
            ratio = m * em / (two_pi_hbar * T);
            break;
          case RegimeKind::OverDamped:
            ratio = m * w * em / (two_pi_hbar * std::sinh(w * T));
            break;
        }
        break;
      }
      case System::LinearGravity:
        ratio = m * lam * std::exp(lam * tf) / (two_pi_hbar * std::expm1(lam * T));
        break;
      case System::QuadraticGravity: {
        const double gamma = quadratic_rate(spec_);
        ratio = m * gamma / (two_pi_hbar * std::sinh(gamma * T));
        break;
      }
    }
    return std::polar(std::sqrt(ratio), phase);
  }

  /// K between chart coordinates (X for quadratic damping, x otherwise).
  Amplitude in_chart(double qi, double ti, double qf, double tf) const {
    const double action = chart_action<double>(spec_, qi, ti, qf, tf);
    return prefactor(ti, tf) * std::polar(1.0, action / spec_.hbar());
  }

  Amplitude operator()(const BoundaryData& bd) const {
    require_valid(bd);
    return in_chart(to_chart(spec_, bd.xi), bd.ti, to_chart(spec_, bd.xf), bd.tf);
  }

 private:
  SystemSpec spec_;
  std::optional<Regime> regime_;
};

inline Amplitude propagate(const Kernel& kernel, const BoundaryData& bd) { return kernel(bd); }

// The mixed central difference has O(h^2) truncation error and is exact for
// an action quadratic in the endpoints, so round-off (~ eps |S| / h^2) is what
// limits it. A comparatively large step keeps that small.
inline double default_van_vleck_step(double qi, double qf) {
  return 1e-2 * std::max({1.0, std::abs(qi), std::abs(qf)});
}

/// | |phi|^2 - |d^2 S/dq_i dq_f|_FD / (2 pi hbar) | / |phi|^2, with the mixed
/// derivative from central differences of the closed-form action (evaluated
/// in long double). Works in chart coordinates. fd_step <= 0 selects the default.
inline double van_vleck_check(const Kernel& kernel, const BoundaryData& bd,
                              double fd_step = 0.0) {
  require_valid(bd);
  const SystemSpec& spec = kernel.spec();
  const double qi = to_chart(spec, bd.xi);
  const double qf = to_chart(spec, bd.xf);
  const long double h = fd_step > 0 ? fd_step : default_van_vleck_step(qi, qf);
  const long double ti = bd.ti;
  const long double tf = bd.tf;
  auto S = [&](long double a, long double b) {
    return chart_action<long double>(spec, a, ti, b, tf);
  };
  const long double lqi = qi;
  const long double lqf = qf;
  const long double mixed =
      (S(lqi + h, lqf + h) - S(lqi + h, lqf - h) - S(lqi - h, lqf + h) + S(lqi - h, lqf - h)) /
      (4.0L * h * h);
  const double phi2 = std::norm(kernel.prefactor(bd.ti, bd.tf));
  const double vv = static_cast<double>(std::abs(mixed)) / (2.0 * kPi * spec.hbar());
  return std::abs(phi2 - vv) / phi2;
}

/// Prefactor obtained by composing phi(t_f, t) phi(t, t_i) with the Gaussian
/// integral over the intermediate coordinate.
inline Amplitude composed_prefactor(const Kernel& kernel, double ti, double tm, double tf) {
  const QuadraticActionForm first = action_form(kernel.spec(), ti, tm);
  const QuadraticActionForm second = action_form(kernel.spec(), tm, tf);
  const double hbar = kernel.spec().hbar();
  return kernel.prefactor(tm, tf) * kernel.prefactor(ti, tm) *
         gaussian_integral((first.c + second.a) / hbar, 0.0, 0.0);
}

/// Relative deviation of the intermediate-time composition
/// int K(q_f, t_f; q, t_mid) K(q, t_mid; q_i, t_i) dq (chart measure) from
/// the direct kernel. The q-integral is done in closed form.
inline double transitivity_check(const Kernel& kernel, const BoundaryData& bd, double t_mid) {
  require_valid(bd);
  if (!(bd.ti < t_mid && t_mid < bd.tf))
    throw ValidationError("transitivity needs t_i < t_mid < t_f");
  const SystemSpec& spec = kernel.spec();
  const double hbar = spec.hbar();
  const double qi = to_chart(spec, bd.xi);
  const double qf = to_chart(spec, bd.xf);
  const QuadraticActionForm first = action_form(spec, bd.ti, t_mid);
  const QuadraticActionForm second = action_form(spec, t_mid, bd.tf);

  const double alpha = (first.c + second.a) / hbar;
  const double beta = (first.b * qi + first.e + second.b * qf + second.d) / hbar;
  const double delta = (first.a * qi * qi + first.d * qi + first.f + second.c * qf * qf +
                        second.e * qf + second.f) /
                       hbar;
  const Amplitude composed = kernel.prefactor(t_mid, bd.tf) * kernel.prefactor(bd.ti, t_mid) *
                             gaussian_integral(alpha, beta, delta);
  const Amplitude direct = kernel.in_chart(qi, bd.ti, qf, bd.tf);
  return std::abs(composed - direct) / std::abs(direct);
}

/// Quadratic damping only: relative deviation of the composition carried out
/// in the dx measure over a finite window [center - half_width, center + half_width]
/// from the direct kernel. Diagnostic; the dx composition does not close.
inline double dx_measure_composition_defect(const Kernel& kernel, const BoundaryData& bd,
                                            double t_mid, double center, double half_width,
                                            int panels = 512) {
  if (kernel.spec().system() != System::QuadraticGravity)
    throw UnsupportedSystemError("dx-measure diagnostic applies to quadratic damping");
  require_valid(bd);
  auto integrand = [&](double x) {
    return kernel(BoundaryData{x, t_mid, bd.xf, bd.tf}) *
           kernel(BoundaryData{bd.xi, bd.ti, x, t_mid});
  };
  const Amplitude composed =
      composite_gauss_legendre(integrand, center - half_width, center + half_width, panels);
  const Amplitude direct = kernel(bd);
  return std::abs(composed - direct) / std::abs(direct);
}

}  // namespace dampath
