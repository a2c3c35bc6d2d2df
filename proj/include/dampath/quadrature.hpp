#pragma once

// Gauss-Legendre panels and Simpson's rule. Integrands may be real or
// complex valued.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "dampath/core.hpp"

namespace dampath {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point rule; nodes from Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("Gauss-Legendre order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    auto legendre = [n](double u, double& derivative) {
      double p0 = 1.0;
      double p1 = u;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * u * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (u * p1 - p0) / (u * u - 1.0);
      return p1;
    };
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dz = legendre(z, dp) / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre(z, dp);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline const GaussLegendreRule& gauss_legendre_20() {
  static const GaussLegendreRule rule = gauss_legendre(20);
  return rule;
}

template <class F>
auto composite_gauss_legendre(const F& f, double a, double b, int panels,
                              const GaussLegendreRule& rule = gauss_legendre_20()) {
  using R = std::decay_t<decltype(f(a))>;
  if (panels < 1) throw ValidationError("need at least one panel");
  R sum{};
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    R panel{};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      panel += rule.weights[k] * f(mid + 0.5 * width * rule.nodes[k]);
    sum += 0.5 * width * panel;
  }
  return sum;
}

template <class R>
struct AdaptiveResult {
  R value;
  int panels;
  bool converged;
};

/// Doubles the panel count until two successive composite results differ by
/// less than `tol` times max(1e-300, |result|) or `abs_tol`, whichever is larger.
template <class F>
auto integrate_by_doubling(const F& f, double a, double b, double tol, double abs_tol = 0.0,
                           int initial_panels = 4, int max_panels = 1 << 14) {
  using R = std::decay_t<decltype(f(a))>;
  int panels = initial_panels;
  R previous = composite_gauss_legendre(f, a, b, panels);
  while (panels < max_panels) {
    panels *= 2;
    R current = composite_gauss_legendre(f, a, b, panels);
    const double diff = std::abs(current - previous);
    if (diff <= std::max(tol * std::abs(current), abs_tol))
      return AdaptiveResult<R>{current, panels, true};
    previous = current;
  }
  return AdaptiveResult<R>{previous, panels, false};
}

/// Composite Simpson with n (even) subintervals.
template <class F>
auto simpson(const F& f, double a, double b, int n) {
  using R = std::decay_t<decltype(f(a))>;
  if (n < 2 || n % 2 != 0) throw ValidationError("Simpson needs an even interval count");
  const double h = (b - a) / n;
  R sum = f(a) + f(b);
  for (int k = 1; k < n; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  return sum * (h / 3.0);
}

}  // namespace dampath
