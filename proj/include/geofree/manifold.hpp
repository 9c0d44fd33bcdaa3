#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "geofree/rng.hpp"

namespace geofree {

using Vec = Eigen::VectorXd;

enum class Chart { euclidean, hyperboloid, halfplane };

// Model space of constant curvature kappa <= 0.
// hyperboloid coordinates live in R^{n+1} with <x,x>_L = 1/kappa, x0 > 0.
// halfplane is the upper half-plane model of H^2 (n = 2, kappa = -1).
struct Space {
  Chart chart = Chart::euclidean;
  int dim = 2;
  double curvature = 0.0;

  static Space euclidean(int n);
  static Space hyperbolic(int n, double kappa = -1.0);
  static Space halfplane();

  int ambient_dim() const { return chart == Chart::hyperboloid ? dim + 1 : dim; }
  // 1/sqrt(-kappa); only meaningful for curved charts.
  double radius() const;

  friend bool operator==(const Space&, const Space&) = default;
};

std::string to_string(const Space& s);

struct Point {
  Space space;
  Vec coords;
};

struct Tangent {
  Point base;
  Vec vec;
};

// Validates coordinates and snaps hyperboloid points back onto the quadric.
Point make_point(const Space& space, const Vec& coords);
Point origin(const Space& space);

// Tangent at x from a raw chart vector; hyperboloid vectors are projected onto T_x.
Tangent make_tangent(const Point& x, const Vec& v);
Tangent zero_tangent(const Point& x);

double inner(const Tangent& u, const Tangent& v);
double norm(const Tangent& v);

Tangent operator+(const Tangent& u, const Tangent& v);
Tangent operator-(const Tangent& u, const Tangent& v);
Tangent operator-(const Tangent& v);
Tangent operator*(double a, const Tangent& v);

Point exp(const Point& x, const Tangent& v);
Point exp(const Tangent& v);
Tangent log(const Point& x, const Point& y);
double dist(const Point& x, const Point& y);
Tangent transport(const Point& x, const Point& y, const Tangent& v);

// exp(x, s log(x, y))
Point geodesic(const Point& x, const Point& y, double s);

struct BallProjection {
  Point point;
  int bisections = 0;
};

// Bisection along the geodesic p -> y; the returned point is never outside the ball.
BallProjection project_ball_counted(const Point& p, double R, const Point& y, double tol = 1e-12);
Point project_ball(const Point& p, double R, const Point& y, double tol = 1e-12);

Point scale_toward(const Point& p, double c, const Point& x);

// Orthonormal basis of T_x by Gram-Schmidt on the ambient axes.
std::vector<Tangent> orthonormal_basis(const Point& x);
Tangent random_unit_tangent(const Point& x, Rng& rng);
Point sample_sphere(const Point& x, double delta, Rng& rng);
Point antipode(const Point& x, const Point& z);

// Point with coordinates `local` in the orthonormal basis at the origin, pushed through exp.
Point point_from_origin(const Space& space, const Vec& local);

// Isometries between the half-plane chart and the kappa = -1 hyperboloid in dimension 2.
Point halfplane_to_hyperboloid(const Point& x);
Point hyperboloid_to_halfplane(const Point& x);
Tangent halfplane_to_hyperboloid(const Tangent& v);
Tangent hyperboloid_to_halfplane(const Tangent& v);

// Minkowski bilinear form -a0 b0 + sum ai bi.
double minkowski(const Vec& a, const Vec& b);

void require_same_space(const Point& x, const Point& y);

}  // namespace geofree
