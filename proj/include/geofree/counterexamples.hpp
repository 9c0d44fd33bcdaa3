#pragma once

#include "geofree/manifold.hpp"

namespace geofree {

// Geodesic of the upper half-plane between two points, in closed form.
// Non-vertical geodesics are arcs of the circle centered at (center, 0) with the given radius.
struct HalfPlaneGeodesic {
  Vec from;
  Vec to;
  bool vertical = false;
  double center = 0.0;
  double radius = 0.0;

  HalfPlaneGeodesic(const Vec& x, const Vec& y);
  Vec at(double s) const;
};

Vec halfplane_geodesic(const Vec& x, const Vec& y, double s);

// Midpoint of the geodesic between (-lambda, mu) and (lambda, mu).
Vec halfplane_midpoint(double lambda, double mu);

// arcosh(1 + |x - y|^2 / (2 x2 y2))
double halfplane_distance(const Vec& x, const Vec& y);

// Height of the midpoint of the contracted arc minus the height of the contracted apex, for
// K bounded by the arc u1^2 + u2^2 = 3 and the contraction factor 1 - alpha toward (0, 1).
// A positive value means the contracted set misses part of a geodesic between its points.
double shrink_gap(double alpha);
// The same quantity built from generic manifold operations on the half-plane chart.
double shrink_gap_generic(double alpha);

// Gauge of the point at parameter s along the geodesic (-1, sqrt 3) -> (-2, 2) with respect to
// the set u1^2 + u2^2 <= 3 and center (0, 1), from the closed-form boundary intersection.
double minkowski_gauge_ratio(double s);
double minkowski_gauge_ratio_generic(double s);
// h(1/2) - h(0)/2 - h(1)/2; positive means the gauge is not convex along the geodesic.
double minkowski_convexity_gap();
double minkowski_convexity_gap_generic();

struct NonconvexityWitness {
  double alpha = 0.1;
  // Built with scale_toward and geodesic on the half-plane chart.
  Point u;
  Point v;
  Point w;
  Point midpoint;
  // Largest coordinate difference between the generic and closed-form constructions.
  double construction_mismatch = 0.0;
  // True when w lies strictly below the geodesic midpoint of u and v.
  bool nonconvex = false;
};

NonconvexityWitness scaled_set_nonconvexity_witness(double alpha = 0.1);

// Printed reference values with the tolerance used for comparison.
inline constexpr double kReferenceShrinkGap = 0.036;
inline constexpr double kReferenceMinkowskiGap = 0.0057;
inline constexpr double kReferenceTolerance = 1e-3;

}  // namespace geofree
