#pragma once

namespace geofree {

// Curvature lower bound with the radii of the sandwich B_p(r) ⊆ K ⊆ B_p(R).
struct GeometryParams {
  double kappa = -1.0;
  double R = 1.0;
  double r = 1.0;

  void validate() const;
};

// sqrt(-kappa) c coth(sqrt(-kappa) c); 1 in the flat limit.
double zeta(double kappa, double c);

// Comparison function sinh(sqrt(-kappa) t) / sqrt(-kappa); t when flat.
double comparison_s(double kappa, double t);

// Margin radius for separation against the shrunken set.
double r_bar(const GeometryParams& g);

double delta_prime_one_point(const GeometryParams& g, double tau);
double delta_prime_two_point(const GeometryParams& g, double beta);

// Area of the geodesic sphere of radius delta over the volume of the ball it bounds.
double sphere_volume_ratio(double kappa, int n, double delta);

namespace detail {
double x_coth_x(double x);
double x_over_sinh(double x);
}  // namespace detail

}  // namespace geofree
