#include "geofree/constants.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace geofree {

namespace {

constexpr double kSeriesThreshold = 1e-6;

void require_curvature(double kappa) {
  if (!(kappa <= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("curvature bound must be finite and <= 0");
  }
}

// sinh(y) - y for y >= 0 without cancellation near zero.
double sinh_minus_identity(double y) {
  if (y < 0.1) {
    const double y2 = y * y;
    return y * y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0 * (1.0 + y2 / 72.0)));
  }
  return std::sinh(y) - y;
}

}  // namespace

namespace detail {

double x_coth_x(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x / std::tanh(x);
}

double x_over_sinh(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  return x / std::sinh(x);
}

}  // namespace detail

void GeometryParams::validate() const {
  require_curvature(kappa);
  if (!(r > 0.0) || !(R >= r) || !std::isfinite(R)) {
    throw std::invalid_argument("radii must satisfy 0 < r <= R");
  }
}

double zeta(double kappa, double c) {
  require_curvature(kappa);
  if (!(c >= 0.0)) {
    throw std::invalid_argument("zeta needs c >= 0");
  }
  return detail::x_coth_x(std::sqrt(-kappa) * c);
}

double comparison_s(double kappa, double t) {
  require_curvature(kappa);
  if (!(t >= 0.0)) {
    throw std::invalid_argument("comparison function needs t >= 0");
  }
  const double x = std::sqrt(-kappa) * t;
  if (x == 0.0) {
    return t;
  }
  return t / detail::x_over_sinh(x);
}

double r_bar(const GeometryParams& g) {
  g.validate();
  const double k = std::sqrt(-g.kappa);
  return detail::x_over_sinh(k * (2.0 * g.R + g.r)) * detail::x_over_sinh(k * (g.R + g.r)) * g.r;
}

double delta_prime_one_point(const GeometryParams& g, double tau) {
  g.validate();
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("tau must lie in (0,1)");
  }
  return detail::x_over_sinh(std::sqrt(-g.kappa) * (g.R + g.r)) * tau * g.r;
}

double delta_prime_two_point(const GeometryParams& g, double beta) {
  g.validate();
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("beta must lie in (0,1)");
  }
  return (1.0 - beta) * detail::x_over_sinh(std::sqrt(-g.kappa) * (g.R + g.r)) * g.r;
}

double sphere_volume_ratio(double kappa, int n, double delta) {
  require_curvature(kappa);
  if (n < 2) {
    throw std::invalid_argument("sphere_volume_ratio needs n >= 2");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("sphere_volume_ratio needs delta > 0");
  }
  const double k = std::sqrt(-kappa);
  const double x = k * delta;
  if (x == 0.0) {
    return n / delta;
  }
  if (n == 2) {
    // k sinh(x) / (cosh(x) - 1) = k coth(x/2)
    return (2.0 / delta) * detail::x_coth_x(0.5 * x);
  }
  if (n == 3) {
    const double sh = std::sinh(x);
    return 4.0 * k * sh * sh / sinh_minus_identity(2.0 * x);
  }
  // Normalized integrand (s(t)/s(delta))^{n-1} keeps large n finite.
  const double s_delta = comparison_s(kappa, delta);
  auto integrand = [&](double t) {
    return std::pow(comparison_s(kappa, t) / s_delta, n - 1);
  };
  double error = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, delta, 15,
                                                                    1e-10, &error);
  return 1.0 / integral;
}

}  // namespace geofree
