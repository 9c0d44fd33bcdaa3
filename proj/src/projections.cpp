#include "geofree/projections.hpp"

#include <cmath>
#include <string>

namespace geofree {

namespace {

double zeta_2r(const GscConvexSet& K) {
  return zeta(K.geometry().kappa, 2.0 * K.geometry().R);
}

void check_cap(long iterations, double bound, const char* what) {
  if (static_cast<double>(iterations) > 2.0 * bound) {
    throw IterationCapExceeded(std::string(what) + ": " + std::to_string(iterations) +
                               " iterations exceed twice the bound " + std::to_string(bound));
  }
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::feasible:
      return "feasible";
    case Termination::gap_small:
      return "gap_small";
    case Termination::dist_small:
      return "dist_small";
    case Termination::budget_exhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

namespace detail {

ScalarMin line_search_unit(const std::function<double(double)>& phi, double tol) {
  ScalarMin best{0.0, phi(0.0)};
  const ScalarMin inner = golden_section(phi, 0.0, 1.0, tol);
  if (inner.value < best.value) {
    best = inner;
  }
  const double f1 = phi(1.0);
  if (f1 < best.value) {
    best = {1.0, f1};
  }
  return best;
}

}  // namespace detail

double so_projection_bound(double zeta, double delta, double rbar, double d0_sq, double d_sq) {
  return zeta * (d0_sq - d_sq) / (delta * delta * rbar * rbar) + 1.0;
}

ProjectionResult so_infeasible_projection(SetOracle& oracle, double rbar, double delta, const Point& y0) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("squeeze parameter must lie in (0,1)");
  }
  if (!(rbar > 0.0)) {
    throw std::invalid_argument("margin radius must be positive");
  }
  const GscConvexSet& K = oracle.set();
  const OracleStats before = oracle.stats();
  const double R = K.geometry().R;
  const double zeta = zeta_2r(K);

  ProjectionResult res;
  res.y = project_ball(K.center(), R, y0);
  // After the ball projection the distance to the scaled set is at most R.
  res.iteration_bound = so_projection_bound(zeta, delta, rbar, R * R, 0.0);
  const double step = delta * rbar;
  for (;;) {
    ++res.iterations;
    if (oracle.membership(res.y)) {
      break;
    }
    const Tangent g = oracle.separation(res.y);
    res.y = exp(res.y, (-step / norm(g)) * g);
    check_cap(res.iterations, res.iteration_bound, "separation-oracle projection");
  }
  res.termination = Termination::feasible;
  res.over_bound = static_cast<double>(res.iterations) > res.iteration_bound;
  res.calls = oracle.stats() - before;
  return res;
}

double duality_gap(SetOracle& oracle, const Point& x, const Tangent& grad) {
  const Point v = oracle.loo(x, grad);
  return -inner(grad, log(x, v));
}

RfwResult rfw_min(SetOracle& oracle, const Objective& f, const Point& x0, int iters) {
  if (!membership(oracle.set(), x0)) {
    throw std::invalid_argument("Frank-Wolfe needs a feasible start");
  }
  const OracleStats before = oracle.stats();
  RfwResult res;
  Point x = x0;
  Evaluation e = f(x);
  res.iterates.push_back(x);
  res.values.push_back(e.value);
  for (int k = 0; k < iters; ++k) {
    const Point v = oracle.loo(x, e.gradient);
    const Tangent dir = log(x, v);
    res.gaps.push_back(-inner(e.gradient, dir));
    const detail::ScalarMin s =
        detail::line_search_unit([&](double sigma) { return f(exp(x, sigma * dir)).value; });
    if (s.arg > 0.0) {
      x = exp(x, s.arg * dir);
      e = f(x);
    }
    res.iterates.push_back(x);
    res.values.push_back(e.value);
  }
  res.gaps.push_back(duality_gap(oracle, x, e.gradient));
  res.calls = oracle.stats() - before;
  return res;
}

double separating_hyperplane_bound(double zeta, double R, double eps) {
  return zeta * std::ceil(27.0 * R * R / eps - 2.0);
}

ProjectionResult separating_hyperplane_rfw(SetOracle& oracle, const Point& x1, const Point& y, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  const GscConvexSet& K = oracle.set();
  if (!membership(K, x1)) {
    throw std::invalid_argument("separating hyperplane needs a feasible start");
  }
  const OracleStats before = oracle.stats();
  // The stopping test runs at least once, so a bound below one is read as one.
  const double bound = std::max(1.0, separating_hyperplane_bound(zeta_2r(K), K.geometry().R, eps));
  ProjectionResult res;
  res.y = y;
  res.x = x1;
  res.iteration_bound = bound;
  Point x = x1;
  for (;;) {
    ++res.iterations;
    const double d = dist(x, y);
    if (d * d <= 3.0 * eps) {
      res.termination = Termination::dist_small;
      break;
    }
    const Tangent to_y = log(x, y);
    const Point v = oracle.loo(x, -to_y);
    const Tangent dir = log(x, v);
    if (inner(to_y, dir) <= eps) {
      res.termination = Termination::gap_small;
      break;
    }
    const detail::ScalarMin s = detail::line_search_unit([&](double sigma) {
      const double dy = dist(y, exp(x, sigma * dir));
      return dy * dy;
    });
    if (s.arg > 0.0) {
      x = exp(x, s.arg * dir);
    }
    check_cap(res.iterations, bound, "separating hyperplane");
  }
  res.x = x;
  res.over_bound = static_cast<double>(res.iterations) > bound;
  res.calls = oracle.stats() - before;
  return res;
}

double loo_projection_bound(double zeta, double d0_sq, double eps) {
  return std::max(zeta * d0_sq * (d0_sq - eps) / (4.0 * eps * eps) + 1.0, 1.0);
}

ProjectionResult loo_infeasible_projection(SetOracle& oracle, const Point& x0, const Point& y0, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  const GscConvexSet& K = oracle.set();
  const OracleStats before = oracle.stats();
  const double d0 = dist(x0, y0);
  const double d0_sq = d0 * d0;
  ProjectionResult res;
  res.y = project_ball(K.center(), K.geometry().R, y0);
  res.x = x0;
  res.iteration_bound = loo_projection_bound(zeta_2r(K), d0_sq, eps);
  if (d0_sq <= 3.0 * eps) {
    res.termination = Termination::dist_small;
    res.calls = oracle.stats() - before;
    return res;
  }
  const double gamma = 2.0 * eps / d0_sq;
  Point x = x0;
  Point y = res.y;
  for (;;) {
    ++res.iterations;
    const ProjectionResult sh = separating_hyperplane_rfw(oracle, x, y, eps);
    res.inner_iterations += sh.iterations;
    res.over_bound = res.over_bound || sh.over_bound;
    x = *sh.x;
    const double d = dist(x, y);
    if (d * d <= 3.0 * eps) {
      break;
    }
    y = exp(x, (1.0 - gamma) * log(x, y));
    check_cap(res.iterations, res.iteration_bound, "LOO infeasible projection");
  }
  res.x = x;
  res.y = y;
  res.termination = Termination::dist_small;
  res.over_bound = res.over_bound || static_cast<double>(res.iterations) > res.iteration_bound;
  res.calls = oracle.stats() - before;
  return res;
}

}  // namespace geofree
