#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "geofree/constants.hpp"
#include "geofree/manifold.hpp"

namespace geofree {

inline constexpr double kFeasibilitySlack = 1e-12;

struct Ball {
  Point center;
  double radius = 1.0;
};

// One gsc-convex constraint h(x) <= 0 with its Riemannian gradient.
struct Constraint {
  std::function<double(const Point&)> value;
  std::function<Tangent(const Point&)> gradient;
  // Set when h = dist(., center)^2 - radius^2; enables boundary parameterization.
  std::optional<Ball> ball;
};

Constraint ball_constraint(const Ball& b);

class GscConvexSet {
 public:
  GscConvexSet(Point center, GeometryParams geometry, std::vector<Constraint> constraints);

  const Space& space() const { return center_.space; }
  const Point& center() const { return center_; }
  const GeometryParams& geometry() const { return geometry_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool all_balls() const;

  double max_violation(const Point& x) const;

 private:
  Point center_;
  GeometryParams geometry_;
  std::vector<Constraint> constraints_;
};

// Geodesic ball B_p(R); inner and outer radius both R.
GscConvexSet make_ball_set(const Point& p, double R);

// Intersection of balls; the inner radius is min_i (radius_i - dist(p, center_i)).
GscConvexSet make_ball_intersection(const Point& p, const std::vector<Ball>& balls, double outer_radius);

// Lens of two balls of radius inner + offset centered at distance offset on either side of p
// along the first basis direction. The declared outer radius must contain the lens.
GscConvexSet make_lens(const Point& p, double inner, double offset, double outer_radius);

struct OracleStats {
  long so_calls = 0;
  long loo_calls = 0;
  long membership_calls = 0;

  OracleStats& operator+=(const OracleStats& o);
  friend OracleStats operator-(OracleStats a, const OracleStats& b);
  friend bool operator==(const OracleStats&, const OracleStats&) = default;
};

struct LooOptions {
  int grid = 360;
  int restarts = 8;
};

bool membership(const GscConvexSet& K, const Point& x);
// Gradient of the lowest-index violated constraint.
Tangent separation(const GscConvexSet& K, const Point& y);
// argmin over K of <g, log(x0, x)>.
Point loo(const GscConvexSet& K, const Point& x0, const Tangent& g, const LooOptions& opts = {});

// Counting wrapper used by the online algorithms; one instance per run.
class SetOracle {
 public:
  explicit SetOracle(const GscConvexSet& K, LooOptions loo_options = {})
      : set_(&K), loo_options_(loo_options) {}

  bool membership(const Point& x);
  Tangent separation(const Point& y);
  Point loo(const Point& x0, const Tangent& g);

  const GscConvexSet& set() const { return *set_; }
  const OracleStats& stats() const { return stats_; }

 private:
  const GscConvexSet* set_;
  LooOptions loo_options_;
  OracleStats stats_;
};

// Largest t with exp(base, t u) in K; base must be feasible and u a unit tangent at base.
double exit_radius(const GscConvexSet& K, const Point& base, const Tangent& u);

// Upper estimate of the distance from y to scale_toward(p, c, K).
double distance_to_set(const GscConvexSet& K, double c, const Point& y);
inline double distance_to_set(const GscConvexSet& K, const Point& y) {
  return distance_to_set(K, 1.0, y);
}

// Deterministic low-discrepancy feasible points: p, `interior` points spread through K and
// `boundary` points on its boundary.
std::vector<Point> probe_points(const GscConvexSet& K, int interior, int boundary);
Point sample_in_set(const GscConvexSet& K, Rng& rng);

struct Evaluation {
  double value = 0.0;
  Tangent gradient;
};
using Objective = std::function<Evaluation(const Point&)>;

struct MinimizeOptions {
  int iters = 500;
  int restarts = 5;
  double step_tol = 1e-11;
};

struct MinimizeResult {
  Point point;
  double value = 0.0;
  // Norm of the Lagrangian gradient plus the constraint violation before the final pull-in.
  double residual = 0.0;
  int iterations = 0;
};

MinimizeResult constrained_minimize(const GscConvexSet& K, const Objective& F,
                                    const MinimizeOptions& opts = {});

}  // namespace geofree
