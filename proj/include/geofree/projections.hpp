#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geofree/detail/search.hpp"
#include "geofree/sets.hpp"

namespace geofree {

enum class Termination { feasible, gap_small, dist_small, budget_exhausted };

const char* to_string(Termination t);

struct ProjectionResult {
  Point y;
  // Feasible companion point (separating hyperplane / LOO projection only).
  std::optional<Point> x;
  long iterations = 0;
  // Iterations of nested separating-hyperplane calls (LOO projection only).
  long inner_iterations = 0;
  OracleStats calls;
  Termination termination = Termination::feasible;
  // Analytic iteration bound for this call, evaluated at the call's own inputs.
  double iteration_bound = 0.0;
  bool over_bound = false;
};

// Thrown when an iteration count passes twice its analytic bound.
struct IterationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pulls y0 into K with separation-oracle steps of length delta * rbar.
// The result is no farther than y0 from every point of the (1 - delta)-scaled set.
ProjectionResult so_infeasible_projection(SetOracle& oracle, double rbar, double delta, const Point& y0);

// Iteration bound for so_infeasible_projection from the start and end distances to the scaled set.
double so_projection_bound(double zeta, double delta, double rbar, double d0_sq, double d_sq);

struct RfwResult {
  std::vector<Point> iterates;
  std::vector<double> values;
  // gaps[k] = duality gap at iterates[k].
  std::vector<double> gaps;
  OracleStats calls;
};

// Frank-Wolfe with exact line search, run for `iters` steps from x0.
RfwResult rfw_min(SetOracle& oracle, const Objective& f, const Point& x0, int iters);

// max over v in K of <-log(x, v), grad>, using one LOO call.
double duality_gap(SetOracle& oracle, const Point& x, const Tangent& grad);

// Frank-Wolfe on 1/2 dist(., y)^2 from x1 until the gap or the distance test fires.
ProjectionResult separating_hyperplane_rfw(SetOracle& oracle, const Point& x1, const Point& y, double eps);

// zeta * ceil(27 R^2 / eps - 2), read literally.
double separating_hyperplane_bound(double zeta, double R, double eps);

// Returns (x, y) with x in K, dist(x, y)^2 <= 3 eps, y no farther than y0 from any point of K.
ProjectionResult loo_infeasible_projection(SetOracle& oracle, const Point& x0, const Point& y0, double eps);

// max{zeta d0^2 (d0^2 - eps) / (4 eps^2) + 1, 1} with d0 = dist(x0, y0).
double loo_projection_bound(double zeta, double d0_sq, double eps);

namespace detail {
// Minimizes phi on [0, 1]; the endpoints are candidates and ties go to the smaller argument.
ScalarMin line_search_unit(const std::function<double(double)>& phi, double tol = 1e-10);
}  // namespace detail

}  // namespace geofree
