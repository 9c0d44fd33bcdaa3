#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geofree/constants.hpp"
#include "geofree/rng.hpp"

using namespace geofree;

namespace {

// Composite Simpson rule on [0, delta] of t -> s(kappa, t)^(n-1), written out independently.
double simpson_ratio(double kappa, int n, double delta) {
  auto s = [&](double t) { return kappa == 0.0 ? t : std::sinh(std::sqrt(-kappa) * t) / std::sqrt(-kappa); };
  const int m = 20000;
  const double h = delta / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(s(i * h), n - 1);
  }
  const double volume = acc * h / 3.0;
  return std::pow(s(delta), n - 1) / volume;
}

double literal_zeta(double kappa, double R) {
  const double a = 2.0 * R * std::sqrt(-kappa);
  return a * std::cosh(a) / std::sinh(a);
}

}  // namespace

TEST(Zeta, Examples) {
  EXPECT_EQ(zeta(0.0, 5.0), 1.0);
  EXPECT_NEAR(zeta(-1.0, 1e-9), 1.0, 1e-15);
  EXPECT_NEAR(zeta(-1.0, 2.0), 2.0 / std::tanh(2.0), 1e-14);
  EXPECT_NEAR(zeta(-1.0, 2.0), 2.0746294414550963, 1e-14);
}

TEST(Zeta, MatchesDefinitionAndIsMonotone) {
  Rng rng = make_stream(1, "test");
  std::uniform_real_distribution<double> uk(-4.0, -0.01);
  std::uniform_real_distribution<double> ur(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double kappa = uk(rng);
    const double R = ur(rng);
    EXPECT_NEAR(zeta(kappa, 2.0 * R), literal_zeta(kappa, R), 1e-12 * literal_zeta(kappa, R));
    EXPECT_GE(zeta(kappa, 2.0 * R), 1.0);
    EXPECT_LE(zeta(kappa, R), zeta(kappa, 2.0 * R));
    EXPECT_LE(zeta(kappa, R), zeta(1.5 * kappa, R));
  }
}

TEST(ComparisonS, Examples) {
  EXPECT_EQ(comparison_s(0.0, 3.0), 3.0);
  EXPECT_NEAR(comparison_s(-1.0, 1.0), std::sinh(1.0), 1e-15);
  EXPECT_NEAR(comparison_s(-1.0, 1.0), 1.1752, 1e-4);
  EXPECT_NEAR(comparison_s(-4.0, 0.5), 0.5 * std::sinh(1.0), 1e-15);
  for (double t : {0.0, 0.1, 1.0, 4.0}) EXPECT_GE(comparison_s(-0.3, t), t);
}

TEST(MarginRadius, Examples) {
  const GeometryParams g{-1.0, 1.0, 0.5};
  const double expected = 2.5 / std::sinh(2.5) * (1.5 / std::sinh(1.5)) * 0.5;
  EXPECT_NEAR(r_bar(g), expected, 1e-15);
  EXPECT_NEAR(r_bar(g), 0.1455, 1e-4);
  EXPECT_NEAR(r_bar({0.0, 1.0, 0.5}), 0.5, 1e-15);
}

TEST(MarginRadius, DecreasesWithCurvature) {
  double prev = r_bar({-1e-4, 1.0, 0.4});
  for (double kappa = -0.1; kappa >= -5.0; kappa -= 0.1) {
    const double cur = r_bar({kappa, 1.0, 0.4});
    EXPECT_LT(cur, prev);
    EXPECT_GT(cur, 0.0);
    prev = cur;
  }
}

TEST(SqueezeRadius, OnePointExamples) {
  const GeometryParams g{-1.0, 1.0, 0.5};
  EXPECT_NEAR(delta_prime_one_point(g, 0.1), 0.05 * 1.5 / std::sinh(1.5), 1e-15);
  EXPECT_NEAR(delta_prime_one_point(g, 0.1), 0.0352, 1e-4);
  EXPECT_NEAR(delta_prime_one_point({0.0, 1.0, 0.5}, 0.3), 0.15, 1e-15);
  EXPECT_NEAR(delta_prime_one_point(g, 0.2) / 0.2, delta_prime_one_point(g, 0.7) / 0.7, 1e-15);
  EXPECT_THROW(delta_prime_one_point(g, 0.0), std::invalid_argument);
  EXPECT_THROW(delta_prime_one_point(g, 1.0), std::invalid_argument);
}

TEST(SqueezeRadius, TwoPointExamples) {
  const GeometryParams g{-1.0, 1.0, 0.5};
  const double beta = 1.0 - 1.0 / std::sqrt(1e4);
  EXPECT_NEAR(delta_prime_two_point(g, beta), 0.01 * 0.5 * 1.5 / std::sinh(1.5), 1e-15);
  EXPECT_NEAR(delta_prime_two_point({0.0, 1.0, 0.5}, 0.75), 0.125, 1e-15);
  EXPECT_LT(delta_prime_two_point(g, 1.0 - 1e-9), 1e-9);
  EXPECT_THROW(delta_prime_two_point(g, 1.0), std::invalid_argument);
  EXPECT_THROW(delta_prime_two_point(g, -0.1), std::invalid_argument);
}

TEST(SqueezeRadius, NeverExceedsFlatLimit) {
  Rng rng = make_stream(2, "test");
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 100; ++i) {
    const GeometryParams g{-5.0 * u(rng), 1.0 + u(rng), u(rng)};
    const double t = u(rng);
    EXPECT_LE(r_bar(g), g.r);
    EXPECT_LE(delta_prime_one_point(g, t), t * g.r);
    EXPECT_LE(delta_prime_two_point(g, t), (1.0 - t) * g.r);
  }
}

TEST(SphereVolumeRatio, ClosedFormsAndQuadrature) {
  EXPECT_NEAR(sphere_volume_ratio(0.0, 3, 0.5), 6.0, 1e-12);
  EXPECT_NEAR(sphere_volume_ratio(0.0, 7, 2.0), 3.5, 1e-12);
  for (double d : {0.01, 0.3, 1.0, 2.5}) {
    EXPECT_NEAR(sphere_volume_ratio(-1.0, 2, d), std::sinh(d) / (std::cosh(d) - 1.0), 1e-9 / d);
  }
  for (int n : {2, 3, 4, 5, 8}) {
    for (double kappa : {-0.5, -1.0, -3.0}) {
      for (double d : {0.2, 1.1}) {
        const double oracle = simpson_ratio(kappa, n, d);
        EXPECT_NEAR(sphere_volume_ratio(kappa, n, d), oracle, 1e-8 * oracle) << n << ' ' << kappa << ' ' << d;
      }
    }
  }
}

TEST(SphereVolumeRatio, WithinLowerAndUpperBounds) {
  Rng rng = make_stream(3, "test");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> un(2, 9);
  for (int i = 0; i < 100; ++i) {
    const double kappa = -3.0 * u(rng);
    const int n = un(rng);
    const double d = 0.01 + 2.0 * u(rng);
    const double ratio = sphere_volume_ratio(kappa, n, d);
    EXPECT_GE(ratio, n / d * (1.0 - 1e-12));
    EXPECT_LE(ratio, n / d + n * std::abs(kappa) * d + 1e-12);
  }
}

TEST(Constants, FlatLimitIsContinuous) {
  for (double kappa : {-1e-8, -1e-10, -1e-13}) {
    EXPECT_NEAR(zeta(kappa, 2.0), 1.0, 1e-6);
    EXPECT_NEAR(r_bar({kappa, 1.0, 0.5}), 0.5, 1e-6);
    EXPECT_NEAR(delta_prime_one_point({kappa, 1.0, 0.5}, 0.2), 0.1, 1e-6);
    EXPECT_NEAR(delta_prime_two_point({kappa, 1.0, 0.5}, 0.8), 0.1, 1e-6);
    EXPECT_NEAR(comparison_s(kappa, 1.5), 1.5, 1e-6);
  }
  // Across the series switch the two evaluation paths agree.
  EXPECT_NEAR(detail::x_coth_x(0.999e-6), detail::x_coth_x(1.001e-6), 1e-14);
  EXPECT_NEAR(detail::x_over_sinh(0.999e-6), detail::x_over_sinh(1.001e-6), 1e-14);
}

TEST(GeometryParams, Validation) {
  EXPECT_THROW((GeometryParams{0.1, 1.0, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((GeometryParams{-1.0, 1.0, 1.5}.validate()), std::invalid_argument);
  EXPECT_THROW((GeometryParams{-1.0, 1.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((GeometryParams{-1.0, 1.0, 1.0}.validate()));
}
