#pragma once

// Quadratic damping as geodesic motion in the 2-D metric
//   ds^2 = f(x) dx^2 + h(x) dy^2,  f = e^{2 lambda x},  h = -(C^2 lambda / g) e^{-2 lambda x},
// its curvature, and the zero-dimensional tachyon action whose equation of
// motion x'' + alpha x'^2 = alpha maps onto x'' + lambda x'^2 = g.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "dampath/classical.hpp"
#include "dampath/core.hpp"
#include "dampath/ode.hpp"

namespace dampath {

class Metric2D {
 public:
  Metric2D(double lambda, double g, double c) : lambda_(lambda), g_(g), c_(c) {
    if (!(lambda > 0)) throw ValidationError("metric needs lambda > 0");
    if (!(g > 0)) throw ValidationError("metric needs g > 0");
    if (c == 0.0 || !std::isfinite(c)) throw ValidationError("metric needs C != 0");
  }

  double lambda() const { return lambda_; }
  double g() const { return g_; }
  double c() const { return c_; }

  double f(double x) const { return std::exp(2.0 * lambda_ * x); }
  double h(double x) const { return -c_ * c_ * lambda_ / g_ * std::exp(-2.0 * lambda_ * x); }
  double df(double x) const { return 2.0 * lambda_ * f(x); }
  double dh(double x) const { return -2.0 * lambda_ * h(x); }

 private:
  double lambda_;
  double g_;
  double c_;
};

struct ChristoffelSymbols {
  double x_xx;  // Gamma^x_xx = f'/2f
  double x_yy;  // Gamma^x_yy = -h'/2f
  double y_xy;  // Gamma^y_xy = h'/2h
};

inline ChristoffelSymbols christoffel(const Metric2D& metric, double x) {
  const double f = metric.f(x);
  const double h = metric.h(x);
  return {metric.df(x) / (2.0 * f), -metric.dh(x) / (2.0 * f), metric.dh(x) / (2.0 * h)};
}

/// Same symbols with f', h' from central differences of f, h.
inline ChristoffelSymbols christoffel_fd(const Metric2D& metric, double x, double step = 1e-4) {
  const double df = (metric.f(x + step) - metric.f(x - step)) / (2.0 * step);
  const double dh = (metric.h(x + step) - metric.h(x - step)) / (2.0 * step);
  return {df / (2.0 * metric.f(x)), -dh / (2.0 * metric.f(x)), dh / (2.0 * metric.h(x))};
}

/// Coefficients of x'' + lambda_eff x'^2 - g_eff = 0 after eliminating y' = C/h.
struct GeodesicCoefficients {
  double lambda_eff;
  double g_eff;
};

inline GeodesicCoefficients geodesic_reduce(const Metric2D& metric, double x = 0.0) {
  const double f = metric.f(x);
  const double h = metric.h(x);
  const double c = metric.c();
  return {metric.df(x) / (2.0 * f), c * c * metric.dh(x) / (2.0 * f * h * h)};
}

inline GeodesicCoefficients geodesic_reduce_fd(const Metric2D& metric, double x,
                                               double step = 1e-4) {
  const double f = metric.f(x);
  const double h = metric.h(x);
  const double c = metric.c();
  const double df = (metric.f(x + step) - metric.f(x - step)) / (2.0 * step);
  const double dh = (metric.h(x + step) - metric.h(x - step)) / (2.0 * step);
  return {df / (2.0 * f), c * c * dh / (2.0 * f * h * h)};
}

struct GeodesicSample {
  double t;
  double x;
  double vx;
  double y;
  double vy;
};

/// RK4 on both geodesic equations, parameterized by t, with y'(t0) = C / h(x0).
inline std::vector<GeodesicSample> integrate_geodesic(const Metric2D& metric, double x0,
                                                      double vx0, double y0, double t0,
                                                      double t1, double dt) {
  auto rhs = [&metric](double, const OdeState<4>& s) -> OdeState<4> {
    const ChristoffelSymbols gam = christoffel(metric, s[0]);
    return {s[1], -gam.x_xx * s[1] * s[1] - gam.x_yy * s[3] * s[3], s[3],
            -2.0 * gam.y_xy * s[1] * s[3]};
  };
  const OdeState<4> start{x0, vx0, y0, metric.c() / metric.h(x0)};
  const auto raw = rk4_integrate<4>(rhs, t0, start, t1, dt);
  std::vector<GeodesicSample> out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.push_back({s.t, s.y[0], s.y[1], s.y[2], s.y[3]});
  return out;
}

struct Curvature {
  double r_xx;
  double r_yy;
  double scalar;
};

/// Closed forms. R_yy follows from R_ab = (R/2) g_ab, which holds in two
/// dimensions: R_yy = (2 C^2 lambda^3 / g) e^{-4 lambda x}.
inline Curvature curvature(const Metric2D& metric, double x) {
  const double lam = metric.lambda();
  const double c = metric.c();
  return {-2.0 * lam * lam, 2.0 * c * c * lam * lam * lam / metric.g() * std::exp(-4.0 * lam * x),
          -4.0 * lam * lam * std::exp(-2.0 * lam * x)};
}

namespace detail {

// Gamma[a][b][c] for diag(f, h) with central-difference metric derivatives.
using ChristoffelArray = std::array<std::array<std::array<double, 2>, 2>, 2>;

inline ChristoffelArray christoffel_array_fd(const Metric2D& metric, double x, double step) {
  const std::array<double, 2> g{metric.f(x), metric.h(x)};
  // dg[k][i] = d_k g_ii; only the x derivative is nonzero
  std::array<std::array<double, 2>, 2> dg{};
  dg[0][0] = (metric.f(x + step) - metric.f(x - step)) / (2.0 * step);
  dg[0][1] = (metric.h(x + step) - metric.h(x - step)) / (2.0 * step);
  auto dmetric = [&](int k, int i, int j) { return i == j ? dg[k][i] : 0.0; };

  ChristoffelArray gam{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        gam[a][b][c] =
            0.5 / g[a] * (dmetric(b, a, c) + dmetric(c, a, b) - dmetric(a, b, c));
  return gam;
}

}  // namespace detail

/// Ricci tensor and scalar assembled from finite-difference Christoffel
/// symbols: R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb,
/// R_bd = R^a_bad, R = g^bd R_bd. Central differences with the given step.
inline Curvature curvature_fd(const Metric2D& metric, double x, double step = 1e-4) {
  using detail::ChristoffelArray;
  const ChristoffelArray gam = detail::christoffel_array_fd(metric, x, step);
  const ChristoffelArray plus = detail::christoffel_array_fd(metric, x + step, step);
  const ChristoffelArray minus = detail::christoffel_array_fd(metric, x - step, step);
  // dgam[k][a][b][c]; only k = 0 (x) is nonzero
  auto dgam = [&](int k, int a, int b, int c) {
    return k == 0 ? (plus[a][b][c] - minus[a][b][c]) / (2.0 * step) : 0.0;
  };
  auto riemann = [&](int a, int b, int c, int d) {
    double r = dgam(c, a, d, b) - dgam(d, a, c, b);
    for (int e = 0; e < 2; ++e) r += gam[a][c][e] * gam[e][d][b] - gam[a][d][e] * gam[e][c][b];
    return r;
  };
  std::array<std::array<double, 2>, 2> ricci{};
  for (int b = 0; b < 2; ++b)
    for (int d = 0; d < 2; ++d)
      for (int a = 0; a < 2; ++a) ricci[b][d] += riemann(a, b, a, d);
  const double scalar = ricci[0][0] / metric.f(x) + ricci[1][1] / metric.h(x);
  return {ricci[0][0], ricci[1][1], scalar};
}

/// alpha = sqrt(g lambda), b = sqrt(lambda / g): the scaled coordinate
/// xi = b x turns x'' + lambda x'^2 = g into xi'' + alpha xi'^2 = alpha.
class TachyonMap {
 public:
  TachyonMap(double lambda, double g) {
    if (!(lambda > 0) || !(g > 0)) throw ValidationError("tachyon map needs lambda, g > 0");
    alpha_ = std::sqrt(g * lambda);
    b_ = std::sqrt(lambda / g);
  }

  double alpha() const { return alpha_; }
  double b() const { return b_; }

 private:
  double alpha_;
  double b_;
};

/// -e^{-alpha xi} sqrt(1 - xi'^2).
inline double tachyon_lagrangian(double alpha, double xi, double xi_dot) {
  if (std::abs(xi_dot) >= 1.0) throw DomainError("tachyon Lagrangian needs |xi'| < 1");
  return -std::exp(-alpha * xi) * std::sqrt(1.0 - xi_dot * xi_dot);
}

namespace detail {

struct VelocityAcceleration {
  double t;
  double x;
  double v;
  double a;
};

// Acceleration from five-point differences of uniformly spaced velocity samples.
inline std::vector<VelocityAcceleration> sampled_acceleration(
    std::span<const PhaseSample> samples) {
  std::vector<VelocityAcceleration> out;
  if (samples.size() < 5) return out;
  const double h = samples[1].t - samples[0].t;
  for (std::size_t k = 2; k + 2 < samples.size(); ++k) {
    const double a = (samples[k - 2].v - 8.0 * samples[k - 1].v + 8.0 * samples[k + 1].v -
                      samples[k + 2].v) /
                     (12.0 * h);
    out.push_back({samples[k].t, samples[k].x, samples[k].v, a});
  }
  return out;
}

}  // namespace detail

/// Max |xi'' + alpha xi'^2 - alpha| over a uniformly sampled quadratic-damping
/// trajectory rescaled by xi = b x.
inline double tachyon_eom_check(const TachyonMap& map, std::span<const PhaseSample> samples) {
  if (samples.size() < 5) throw ValidationError("tachyon check needs at least 5 samples");
  for (const auto& s : samples)
    if (std::abs(map.b() * s.v) >= 1.0) throw DomainError("scaled speed reached 1");
  double worst = 0.0;
  for (const auto& p : detail::sampled_acceleration(samples)) {
    const double xi_dot = map.b() * p.v;
    const double xi_ddot = map.b() * p.a;
    worst = std::max(worst, std::abs(xi_ddot + map.alpha() * xi_dot * xi_dot - map.alpha()));
  }
  return worst;
}

/// Euler-Lagrange residual of the tachyon Lagrangian along xi = b x(t).
/// h <= 0 picks a step proportional to 1 - xi'^2, since the velocity stencil
/// must stay well inside the light cone.
inline double tachyon_el_residual(const TachyonMap& map, const Trajectory& traj, double t,
                                  double h = 0.0) {
  const double alpha = map.alpha();
  const double b = map.b();
  if (h <= 0) {
    const double xi_dot = b * traj.velocity(t);
    h = std::min(1e-3, 0.02 * (1.0 - xi_dot * xi_dot));
  }
  return euler_lagrange_residual(
      [alpha](double xi, double v, double) { return tachyon_lagrangian(alpha, xi, v); },
      [&](double s) { return b * traj.position(s); },
      [&](double s) { return b * traj.velocity(s); }, t, h);
}

/// Least-squares fit of x'' = k0 - k2 x'^2 (the only form a geodesic of a
/// diagonal x-dependent metric can reduce to) over sampled motion. Returns
/// rms misfit divided by rms acceleration; ~0 for quadratic damping.
inline double geodesic_form_misfit(std::span<const PhaseSample> samples) {
  const auto pts = detail::sampled_acceleration(samples);
  if (pts.size() < 3) throw ValidationError("geodesic fit needs more samples");
  // normal equations for columns [1, -v^2]
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0, aa = 0;
  for (const auto& p : pts) {
    const double u = -p.v * p.v;
    s11 += 1.0, s12 += u, s22 += u * u, r1 += p.a, r2 += u * p.a, aa += p.a * p.a;
  }
  const double det = s11 * s22 - s12 * s12;
  const double k0 = (r1 * s22 - r2 * s12) / det;
  const double k2 = (s11 * r2 - s12 * r1) / det;
  double misfit = 0.0;
  for (const auto& p : pts) {
    const double r = p.a - k0 + k2 * p.v * p.v;
    misfit += r * r;
  }
  return std::sqrt(misfit / aa);
}

}  // namespace dampath
