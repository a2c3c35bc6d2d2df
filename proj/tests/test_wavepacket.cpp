#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dampath/classical.hpp"
#include "dampath/quadrature.hpp"
#include "dampath/wavepacket.hpp"
#include "oracles.hpp"

using namespace dampath;

namespace {


const SystemSpec kUnderdamped = SystemSpec::oscillator(0.2, 0.5);
const SystemSpec kLinear = SystemSpec::linear_gravity(1.0, 9.8);
const SystemSpec kQuadratic = SystemSpec::quadratic_gravity(1.0, 9.8);

}  // namespace

TEST(Packet, Construction) {
  EXPECT_EQ(make_packet(kUnderdamped, 1.0, 0.5).chart, Chart::Position);
  EXPECT_EQ(make_packet(kQuadratic, 0.0, 0.5).chart, Chart::Exponential);
  EXPECT_THROW(make_packet(kUnderdamped, 1.0, 0.0), ValidationError);
  EXPECT_THROW(make_packet(kUnderdamped, 1.0, -1.0), ValidationError);
  EXPECT_THROW(make_packet(kUnderdamped, std::nan(""), 1.0), ValidationError);
}

TEST(Density, InitialPeakValue) {
  for (const auto& spec : {kUnderdamped, kLinear}) {
    const auto p = make_packet(spec, 0.7, 0.4);
    EXPECT_NEAR(density(spec, p, 0.7, 0.0), 1.0 / std::sqrt(2.0 * kPi * 0.16), 1e-14);
  }
  // quadratic damping: Gaussian of width sigma0 in X = e^{lambda x} / lambda
  const auto p = make_packet(kQuadratic, 0.0, 0.5);
  EXPECT_NEAR(density(kQuadratic, p, 0.0, 0.0), 1.0 / std::sqrt(2.0 * kPi * 0.25), 1e-14);
}

TEST(Density, UnderdampedPeakCrossesOrigin) {
  const auto p = make_packet(kUnderdamped, 1.0, 0.5);
  const double w = classify(kUnderdamped).rate;
  // cos wt + (lambda / 2w) sin wt = 0
  const double t0 = (kPi - std::atan(2.0 * w / 0.2)) / w;
  EXPECT_NEAR(peak(kUnderdamped, p, t0), 0.0, 1e-14);
  const double at0 = density(kUnderdamped, p, 0.0, t0);
  EXPECT_GT(at0, density(kUnderdamped, p, 0.01, t0));
  EXPECT_GT(at0, density(kUnderdamped, p, -0.01, t0));
}

TEST(Density, QuadraticPeakFollowsLogCosh) {
  const auto p = make_packet(kQuadratic, 0.0, 0.5);
  EXPECT_NEAR(peak(kQuadratic, p, 1.0), 2.439255521396585, 1e-14);
  const Trajectory rest = trajectory_from_initial(kQuadratic, 0.0, 0.0);
  EXPECT_NEAR(peak(kQuadratic, p, 1.0), rest.position(1.0), 1e-14);
  const double at_peak = density(kQuadratic, p, 2.439255521396585, 1.0);
  EXPECT_GT(at_peak, density(kQuadratic, p, 2.43, 1.0));
  EXPECT_GT(at_peak, density(kQuadratic, p, 2.45, 1.0));
}

TEST(Density, NonNegativeAndRejectsNegativeTime) {
  const auto p = make_packet(kLinear, 0.0, 0.5);
  for (double x = -20.0; x <= 20.0; x += 0.5) EXPECT_GE(density(kLinear, p, x, 1.0), 0.0);
  EXPECT_THROW(density(kLinear, p, 0.0, -1.0), ValidationError);
}

TEST(Sigma, InitialWidthAllSystems) {
  for (const auto& spec : {kUnderdamped, SystemSpec::oscillator(1.0, 0.5), SystemSpec::oscillator(3.0, 1.0),
                           kLinear, kQuadratic}) {
    EXPECT_DOUBLE_EQ(sigma_t(spec, make_packet(spec, 0.0, 0.37), 0.0), 0.37);
  }
}

TEST(Sigma, ComplexFrequencyOracleAllRegimes) {
  for (auto [lam, w0] : {std::pair{0.2, 0.5}, {3.0, 1.0}, {0.9, 0.5}, {1.2, 0.5}}) {
    const auto spec = SystemSpec::oscillator(lam, w0, 1.3, 0.7);
    const auto p = make_packet(spec, 1.0, 0.6);
    const oracle::ComplexFrequency cf{1.3, lam, w0, 0.7};
    for (double t : {0.3, 1.0, 4.0, 9.0}) {
      EXPECT_NEAR(sigma_t(spec, p, t), cf.sigma(0.6, t), 1e-12 * cf.sigma(0.6, t));
      EXPECT_NEAR(peak(spec, p, t), cf.peak(1.0, t), 1e-12);
    }
  }
}

TEST(Sigma, CriticalIsLimit) {
  const auto cd = SystemSpec::oscillator(1.0, 0.5);
  const auto near = SystemSpec::oscillator(1.0 * (1.0 - 1e-6), 0.5);
  for (double t : {0.5, 3.0, 8.0}) {
    EXPECT_NEAR(sigma_t(cd, make_packet(cd, 1.0, 0.5), t), sigma_t(near, make_packet(near, 1.0, 0.5), t),
                1e-5);
  }
}

TEST(Sigma, LinearGravityPlateau) {
  const auto p = make_packet(kLinear, 0.0, 0.5);
  const double plateau = 0.5 * std::sqrt(1.0 + std::pow(1.0 / (2.0 * 0.25), 2));
  EXPECT_NEAR(sigma_t(kLinear, p, 50.0), plateau, 1e-14);
  double prev = 0.0;
  for (double t = 0.0; t < 20.0; t += 0.25) {
    const double s = sigma_t(kLinear, p, t);
    EXPECT_GT(s, prev);
    EXPECT_LT(s, plateau);
    prev = s;
  }
}

TEST(Sigma, QuadraticGrowsExponentially) {
  const auto p = make_packet(kQuadratic, 0.0, 0.5);
  const double gamma = quadratic_rate(kQuadratic);
  double prev = 0.0;
  for (double t = 0.0; t < 5.0; t += 0.1) {
    const double s = sigma_t(kQuadratic, p, t);
    EXPECT_GT(s, prev);
    prev = s;
  }
  const double r1 = sigma_t(kQuadratic, p, 4.0) / std::exp(gamma * 4.0);
  const double r2 = sigma_t(kQuadratic, p, 5.0) / std::exp(gamma * 5.0);
  EXPECT_NEAR(r1, r2, 1e-6 * r2);
}

TEST(Sigma, UnderdampedLocalizationAfterEleven) {
  const auto p = make_packet(kUnderdamped, 1.0, 0.5);
  for (double t = 12.0; t <= 50.0; t += 0.01) ASSERT_LT(sigma_t(kUnderdamped, p, t), 0.5) << t;
  const auto onset = localization_onset(kUnderdamped, p, 50.0);
  ASSERT_TRUE(onset.has_value());
  EXPECT_GT(*onset, 10.0);
  EXPECT_LT(*onset, 12.0);
  EXPECT_NEAR(sigma_t(kUnderdamped, p, *onset), 0.5, 1e-9);
}

TEST(Sigma, UndampedPeriodicBreathing) {
  const auto spec = SystemSpec::oscillator(0.0, 0.5);
  const auto p = make_packet(spec, 1.0, 0.5);
  const double period = 2.0 * kPi / 0.5;
  const double smax = oracle::sho_sigma(1.0, 0.5, 1.0, 0.5, period / 4.0);
  for (double t = 0.0; t < period; t += 0.37) {
    const double s = sigma_t(spec, p, t);
    EXPECT_NEAR(sigma_t(spec, p, t + period), s, 1e-12);
    EXPECT_GE(s, 0.5 - 1e-15);
    EXPECT_LE(s, smax + 1e-15);
    EXPECT_NEAR(s, oracle::sho_sigma(1.0, 0.5, 1.0, 0.5, t), 1e-14);
  }
}

TEST(Peak, LinearGravityApproachesTerminalVelocity) {
  const auto p = make_packet(kLinear, 0.0, 0.5);
  const double t = 5.0;
  const double v = fd::first_derivative([&](double s) { return peak(kLinear, p, s); }, t, 1e-3);
  EXPECT_NEAR(v, 9.8, 0.01 * 9.8);
}

TEST(Peak, MatchesClosedFormClassicalTrajectory) {
  for (const auto& spec : {kUnderdamped, SystemSpec::oscillator(1.0, 0.5), SystemSpec::oscillator(3.0, 1.0),
                           kLinear, kQuadratic}) {
    const auto p = make_packet(spec, 0.8, 0.5);
    const Trajectory rest = trajectory_from_initial(spec, 0.8, 0.0);
    for (double t = 0.0; t <= 10.0; t += 0.5)
      EXPECT_NEAR(peak(spec, p, t), rest.position(t), 1e-10 * std::max(1.0, std::abs(rest.position(t))));
  }
}

TEST(Peak, UnderdampedMatchesRk4) {
  const auto p = make_packet(kUnderdamped, 1.0, 0.5);
  double worst = 0.0;
  for (const auto& s : integrate_ivp(kUnderdamped, 1.0, 0.0, 0.0, 10.0, 1e-3))
    worst = std::max(worst, std::abs(peak(kUnderdamped, p, s.t) - s.x));
  EXPECT_LE(worst, 1e-8);
}

TEST(MeanX, SymmetricCasesEqualPeak) {
  const auto p = make_packet(kUnderdamped, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(mean_x(kUnderdamped, p, 0.0).mean_x, 1.0);
  for (double t : {0.5, 3.0}) {
    const MeanValues m = mean_x(kUnderdamped, p, t);
    EXPECT_DOUBLE_EQ(m.mean_x, peak(kUnderdamped, p, t));
    EXPECT_FALSE(m.mean_exp_lambda_x.has_value());
  }
  // direct numerical first moment
  auto first = [&](double x) { return x * density(kUnderdamped, p, x, 2.0); };
  const double c = peak(kUnderdamped, p, 2.0);
  const double s = sigma_t(kUnderdamped, p, 2.0);
  EXPECT_NEAR(integrate_by_doubling(first, c - 14 * s, c + 14 * s, 1e-13).value, mean_x(kUnderdamped, p, 2.0).mean_x,
              1e-12);
}

TEST(MeanX, QuadraticExpectationOfExponential) {
  const auto p = make_packet(kQuadratic, 0.0, 0.5);
  const MeanValues m = mean_x(kQuadratic, p, 1.0);
  ASSERT_TRUE(m.mean_exp_lambda_x.has_value());
  EXPECT_NEAR(*m.mean_exp_lambda_x, 11.464502488114035, 1e-12);
  EXPECT_NEAR(m.mean_x, 2.439255521396585, 1e-14);
  // lambda X integrated against the dX density over the whole X line
  const double c = chart_center(kQuadratic, p, 1.0);
  const double s = sigma_t(kQuadratic, p, 1.0);
  auto weighted = [&](double q) { return q * density_chart(kQuadratic, p, q, 1.0); };
  EXPECT_NEAR(integrate_by_doubling(weighted, c - 14 * s, c + 14 * s, 1e-13).value, 11.464502488114035,
              1e-9);
}

TEST(MeanX, QuadraticChartDiagnostics) {
  const auto p = make_packet(kQuadratic, 0.0, 0.5);
  const XChartMoments m = x_chart_moments(kQuadratic, p, 1.0);
  EXPECT_GT(m.covered_mass, 0.9);
  EXPECT_LT(m.covered_mass, 1.0);
  // the x-mean over the covered part sits below the log of the mean (Jensen)
  EXPECT_LT(m.mean_x, mean_x(kQuadratic, p, 1.0).mean_x);
  EXPECT_THROW(x_chart_moments(kUnderdamped, make_packet(kUnderdamped, 1.0, 0.5), 1.0), UnsupportedSystemError);
}

TEST(Normalization, AllSystemsFiveTimes) {
  for (const auto& spec : {kUnderdamped, SystemSpec::oscillator(1.0, 0.5), SystemSpec::oscillator(3.0, 1.0),
                           kLinear, kQuadratic}) {
    const auto p = make_packet(spec, spec.system() == System::QuadraticGravity ? 0.0 : 1.0, 0.5);
    for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) EXPECT_NEAR(normalization_numeric(spec, p, t), 1.0, 1e-8);
  }
}

TEST(PropagateNumeric, UndampedHalfPeriodMirror) {
  const auto spec = SystemSpec::oscillator(0.0, 1.0);
  const auto p = make_packet(spec, 1.0, 0.5);
  const double t = kPi - 0.05;
  EXPECT_NEAR(sigma_t(spec, p, kPi), 0.5, 1e-15);
  EXPECT_NEAR(peak(spec, p, kPi), -1.0, 1e-15);
  const double rho = std::norm(propagate_numeric_at(spec, p, t, peak(spec, p, t)));
  EXPECT_NEAR(rho, density(spec, p, peak(spec, p, t), t), 1e-6 * rho);
}

TEST(PropagateNumeric, MatchesClosedFormOnGrid) {
  struct Case {
    SystemSpec spec;
    double a;
    double t;
  };
  const Case cases[] = {{kUnderdamped, 1.0, 2.0}, {kLinear, 0.0, 1.0}, {kQuadratic, 0.0, 0.5}};
  for (const auto& c : cases) {
    const auto p = make_packet(c.spec, c.a, 0.5);
    const double center = chart_center(c.spec, p, c.t);
    for (const auto& s : propagate_numeric(c.spec, p, c.t, auto_grid(c.spec, p, c.t, 256))) {
      const double exact = density_chart(c.spec, p, s.q, c.t);
      if (std::abs(s.q - center) < 1e-9) {
        EXPECT_NEAR(std::norm(s.psi), exact, 1e-6 * exact);
      }
      EXPECT_NEAR(std::norm(s.psi), exact, 1e-8) << to_string(c.spec.system()) << " q=" << s.q;
    }
  }
}

TEST(PropagateNumeric, GridRequirements) {
  const auto p = make_packet(kUnderdamped, 1.0, 0.5);
  EXPECT_THROW(propagate_numeric(kUnderdamped, p, 1.0, {-5.0, 5.0, 100}), ValidationError);
  EXPECT_THROW(propagate_numeric(kUnderdamped, p, 1.0, {0.0, 5.0, 300}), GridError);
  EXPECT_THROW(propagate_numeric(kUnderdamped, p, 1.0, {5.0, -5.0, 300}), ValidationError);
  EXPECT_NO_THROW(propagate_numeric(kUnderdamped, p, 1.0, {-6.0, 8.0, 256}));
  EXPECT_THROW(propagate_numeric_at(kUnderdamped, p, -1.0, 0.0), ValidationError);
}

TEST(PropagateNumeric, TimeZeroIsInitialState) {
  const auto p = make_packet(kLinear, 0.3, 0.5);
  EXPECT_DOUBLE_EQ(std::norm(propagate_numeric_at(kLinear, p, 0.0, 0.3)), density(kLinear, p, 0.3, 0.0));
}
