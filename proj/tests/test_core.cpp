#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "dampath/core.hpp"

using namespace dampath;

TEST(SystemSpecTest, FactoriesStoreParameters) {
  const auto spec = SystemSpec::oscillator(0.2, 0.5, 2.0, 0.5);
  EXPECT_EQ(spec.system(), System::DampedOscillator);
  EXPECT_DOUBLE_EQ(spec.lambda(), 0.2);
  EXPECT_DOUBLE_EQ(spec.omega0(), 0.5);
  EXPECT_DOUBLE_EQ(spec.m(), 2.0);
  EXPECT_DOUBLE_EQ(spec.hbar(), 0.5);
  EXPECT_TRUE(spec.has_omega0());
  EXPECT_FALSE(spec.has_g());

  const auto lin = SystemSpec::linear_gravity(1.0, 9.8);
  EXPECT_DOUBLE_EQ(lin.g(), 9.8);
  EXPECT_FALSE(lin.has_omega0());
}

TEST(SystemSpecTest, IrrelevantParameterAccessIsUnsupported) {
  EXPECT_THROW(SystemSpec::oscillator(0.1, 1.0).g(), UnsupportedSystemError);
  EXPECT_THROW(SystemSpec::quadratic_gravity(1.0, 9.8).omega0(), UnsupportedSystemError);
}

TEST(SystemSpecTest, RejectsInvalidParameters) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SystemSpec::oscillator(-0.1, 1.0), ValidationError);
  EXPECT_THROW(SystemSpec::oscillator(0.1, -1.0), ValidationError);
  EXPECT_THROW(SystemSpec::oscillator(0.1, 1.0, 0.0), ValidationError);
  EXPECT_THROW(SystemSpec::oscillator(0.1, 1.0, 1.0, -1.0), ValidationError);
  EXPECT_THROW(SystemSpec::oscillator(nan, 1.0), ValidationError);
  EXPECT_THROW(SystemSpec::linear_gravity(1.0, 0.0), ValidationError);
  EXPECT_THROW(SystemSpec::quadratic_gravity(1.0, -9.8), ValidationError);
  EXPECT_THROW(SystemSpec::linear_gravity(std::numeric_limits<double>::infinity(), 9.8),
               ValidationError);
}

TEST(SystemSpecTest, RejectsContradictoryInput) {
  EXPECT_THROW(SystemSpec::make(System::DampedOscillator, 1, 0.1, 1.0, 9.8, 1), ValidationError);
  EXPECT_THROW(SystemSpec::make(System::LinearGravity, 1, 0.1, 1.0, 9.8, 1), ValidationError);
  EXPECT_THROW(SystemSpec::make(System::DampedOscillator, 1, 0.1, std::nullopt, std::nullopt, 1),
               ValidationError);
  EXPECT_THROW(SystemSpec::make(System::QuadraticGravity, 1, 0.1, std::nullopt, std::nullopt, 1),
               ValidationError);
}

TEST(SystemSpecTest, ZeroDampingAccepted) {
  EXPECT_NO_THROW(SystemSpec::oscillator(0.0, 1.0));
  EXPECT_NO_THROW(SystemSpec::linear_gravity(0.0, 9.8));
  EXPECT_NO_THROW(SystemSpec::oscillator(0.3, 0.0));
}

TEST(SystemNames, RoundTrip) {
  for (System s : {System::DampedOscillator, System::LinearGravity, System::QuadraticGravity})
    EXPECT_EQ(parse_system(to_string(s)), s);
  EXPECT_FALSE(parse_system("pendulum").has_value());
}

TEST(ClassifyTest, ReferenceParametersAreUnderdamped) {
  const Regime r = classify(SystemSpec::oscillator(0.2, 0.5));
  EXPECT_EQ(r.kind, RegimeKind::UnderDamped);
  EXPECT_NEAR(r.rate, 0.4898979485566356, 1e-15);
}

TEST(ClassifyTest, CriticalLine) {
  const Regime r = classify(SystemSpec::oscillator(1.0, 0.5));
  EXPECT_EQ(r.kind, RegimeKind::CriticallyDamped);
}

TEST(ClassifyTest, Overdamped) {
  const Regime r = classify(SystemSpec::oscillator(3.0, 1.0));
  EXPECT_EQ(r.kind, RegimeKind::OverDamped);
  EXPECT_NEAR(r.rate, 1.118033988749895, 1e-15);
}

TEST(ClassifyTest, ToleranceBand) {
  EXPECT_EQ(classify(SystemSpec::oscillator(1.0 + 1e-14, 0.5)).kind, RegimeKind::CriticallyDamped);
  EXPECT_EQ(classify(SystemSpec::oscillator(1.0 - 1e-9, 0.5)).kind, RegimeKind::UnderDamped);
  EXPECT_EQ(classify(SystemSpec::oscillator(1.0 + 1e-9, 0.5)).kind, RegimeKind::OverDamped);
  EXPECT_EQ(classify(SystemSpec::oscillator(1.0 - 1e-9, 0.5), 1e-6).kind,
            RegimeKind::CriticallyDamped);
}

TEST(ClassifyTest, RateSquaredIdentity) {
  for (double lam : {0.0, 0.3, 0.99, 1.5, 4.0}) {
    const double w0 = 0.5;
    const Regime r = classify(SystemSpec::oscillator(lam, w0));
    const double gamma2 = lam * lam / 4 - w0 * w0;
    if (r.kind == RegimeKind::UnderDamped) {
      EXPECT_NEAR(r.rate * r.rate, -gamma2, 1e-15);
    }
    if (r.kind == RegimeKind::OverDamped) {
      EXPECT_NEAR(r.rate * r.rate, gamma2, 1e-15);
    }
    EXPECT_GT(r.rate, 0.0);
  }
}

TEST(ClassifyTest, ScaleInvariant) {
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    for (auto [lam, w0] : {std::pair{0.2, 0.5}, {1.0, 0.5}, {3.0, 1.0}}) {
      const Regime base = classify(SystemSpec::oscillator(lam, w0));
      const Regime scaled = classify(SystemSpec::oscillator(c * lam, c * w0));
      EXPECT_EQ(base.kind, scaled.kind);
      EXPECT_NEAR(scaled.rate, c * base.rate, 1e-14 * c);
    }
  }
}

TEST(ClassifyTest, GravitySystemsUnsupported) {
  EXPECT_THROW(classify(SystemSpec::linear_gravity(1.0, 9.8)), UnsupportedSystemError);
}

TEST(BoundaryDataTest, Validation) {
  EXPECT_NO_THROW(require_valid({0, 0, 1, 1}));
  EXPECT_THROW(require_valid({0, 1, 1, 1}), ValidationError);
  EXPECT_THROW(require_valid({0, 2, 1, 1}), ValidationError);
  EXPECT_THROW(require_valid({std::nan(""), 0, 1, 1}), ValidationError);
  const BoundaryData bd{1.0, 0.5, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(bd.duration(), 2.5);
  EXPECT_DOUBLE_EQ(bd.start().x, 1.0);
  EXPECT_DOUBLE_EQ(bd.end().t, 3.0);
}

TEST(ChartTest, ExponentialChartRoundTrip) {
  const auto spec = SystemSpec::quadratic_gravity(0.7, 9.8);
  for (double x : {-3.0, 0.0, 1.5}) {
    const double X = to_chart(spec, x);
    EXPECT_NEAR(X, std::exp(0.7 * x) / 0.7, 1e-15 * X);
    EXPECT_NEAR(from_chart(spec, X), x, 1e-14);
    EXPECT_NEAR(chart_jacobian(spec, x), std::exp(0.7 * x), 1e-15 * X);
  }
  EXPECT_THROW(from_chart(spec, -1.0), DomainError);
  EXPECT_THROW(to_chart(SystemSpec::quadratic_gravity(0.0, 9.8), 1.0), DomainError);
}

TEST(ChartTest, IdentityForOtherSystems) {
  const auto spec = SystemSpec::oscillator(0.2, 0.5);
  EXPECT_DOUBLE_EQ(to_chart(spec, -2.5), -2.5);
  EXPECT_DOUBLE_EQ(from_chart(spec, -2.5), -2.5);
  EXPECT_DOUBLE_EQ(chart_jacobian(spec, 3.0), 1.0);
}
