#pragma once

// Fixed-step classical Runge-Kutta (RK4) for small autonomous or
// time-dependent first-order systems.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dampath/core.hpp"

namespace dampath {

template <std::size_t N>
using OdeState = std::array<double, N>;

template <std::size_t N>
struct OdeSample {
  double t;
  OdeState<N> y;
};

template <std::size_t N, class Rhs>
OdeState<N> rk4_step(const Rhs& rhs, double t, const OdeState<N>& y, double h) {
  auto axpy = [](const OdeState<N>& base, double s, const OdeState<N>& k) {
    OdeState<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + s * k[i];
    return out;
  };
  const OdeState<N> k1 = rhs(t, y);
  const OdeState<N> k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const OdeState<N> k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const OdeState<N> k4 = rhs(t + h, axpy(y, h, k3));
  OdeState<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// Integrates from t0 to t1 (either direction). The step is shrunk so that
/// an integer number of steps lands exactly on t1; every step is sampled.
template <std::size_t N, class Rhs>
std::vector<OdeSample<N>> rk4_integrate(const Rhs& rhs, double t0, const OdeState<N>& y0,
                                        double t1, double dt) {
  if (!(dt > 0)) throw ValidationError("rk4 step must be positive");
  const double span = t1 - t0;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(span) / dt)));
  const double h = span / static_cast<double>(steps);

  std::vector<OdeSample<N>> out;
  out.reserve(steps + 1);
  out.push_back({t0, y0});
  OdeState<N> y = y0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    y = rk4_step<N>(rhs, t, y, h);
    out.push_back({t0 + static_cast<double>(k + 1) * h, y});
  }
  return out;
}

}  // namespace dampath
