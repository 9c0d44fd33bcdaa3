#include "geofree/sets.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "geofree/detail/search.hpp"

namespace geofree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAngleTol = 1e-9;
constexpr std::uint64_t kSearchSeed = 0x6c6f6f2d73656564ULL;

double halton(long index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr std::array<int, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

Tangent combine(const std::vector<Tangent>& basis, const Vec& w) {
  Vec v = Vec::Zero(basis.front().vec.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    v += w[static_cast<Eigen::Index>(i)] * basis[i].vec;
  }
  return Tangent{basis.front().base, v};
}

// Unit direction at the base of `basis` from the index-th low-discrepancy sample.
Tangent halton_direction(const std::vector<Tangent>& basis, long index) {
  const int n = static_cast<int>(basis.size());
  Vec w(n);
  if (n == 1) {
    w[0] = halton(index, 2) < 0.5 ? 1.0 : -1.0;
  } else if (n == 2) {
    const double a = 2.0 * std::numbers::pi * halton(index, 3);
    w << std::cos(a), std::sin(a);
  } else {
    for (int i = 0; i < n; ++i) {
      const double u = std::clamp(halton(index, kPrimes[(i + 1) % kPrimes.size()]), 1e-12, 1 - 1e-12);
      w[i] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    }
    if (w.norm() < 1e-12) {
      w = Vec::Unit(n, 0);
    }
    w.normalize();
  }
  return combine(basis, w);
}

// Minimizes psi over unit directions spanned by `basis` (n > 2) by projected descent with
// central finite differences, restarting from `starts`.
struct SphereMin {
  Vec w;
  double value = kInf;
};

SphereMin descend_on_sphere(const std::function<double(const Vec&)>& psi,
                            const std::vector<Vec>& starts, int max_iter) {
  SphereMin best;
  const double h = 1e-6;
  for (Vec w : starts) {
    w.normalize();
    double fw = psi(w);
    double step = 0.5;
    for (int it = 0; it < max_iter; ++it) {
      Vec grad(w.size());
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        Vec wp = w;
        Vec wm = w;
        wp[i] += h;
        wm[i] -= h;
        grad[i] = (psi(wp.normalized()) - psi(wm.normalized())) / (2.0 * h);
      }
      grad -= grad.dot(w) * w;
      const double gn = grad.norm();
      if (gn < 1e-10) {
        break;
      }
      bool moved = false;
      while (step > 1e-12) {
        const Vec cand = (w - step * grad).normalized();
        const double fc = psi(cand);
        if (fc <= fw - 1e-4 * step * gn * gn) {
          w = cand;
          fw = fc;
          moved = true;
          step = std::min(1.0, 2.0 * step);
          break;
        }
        step *= 0.5;
      }
      if (!moved) {
        break;
      }
    }
    if (fw < best.value) {
      best = {w, fw};
    }
  }
  return best;
}

std::vector<Vec> sphere_starts(int n, const Vec& first, int count) {
  std::vector<Vec> starts;
  if (first.norm() > 0.0) {
    starts.push_back(first.normalized());
  }
  Rng rng(kSearchSeed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(starts.size()) < count) {
    Vec w(n);
    for (int i = 0; i < n; ++i) {
      w[i] = gauss(rng);
    }
    if (w.norm() > 1e-12) {
      starts.push_back(w.normalized());
    }
  }
  return starts;
}

Vec basis_coords(const std::vector<Tangent>& basis, const Tangent& v) {
  Vec w(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = inner(basis[i], v);
  }
  return w;
}

// Minimum of psi over all unit directions at the base of `basis`.
SphereMin minimize_over_directions(const std::vector<Tangent>& basis,
                                   const std::function<double(const Vec&)>& psi,
                                   const Vec& first_guess, int grid, int restarts) {
  const int n = static_cast<int>(basis.size());
  if (n == 1) {
    SphereMin best;
    for (double s : {1.0, -1.0}) {
      Vec w(1);
      w[0] = s;
      const double v = psi(w);
      if (v < best.value) {
        best = {w, v};
      }
    }
    return best;
  }
  if (n == 2) {
    auto f = [&](double a) {
      Vec w(2);
      w << std::cos(a), std::sin(a);
      return psi(w);
    };
    const detail::ScalarMin m = detail::minimize_on_circle(f, grid, kAngleTol);
    Vec w(2);
    w << std::cos(m.arg), std::sin(m.arg);
    return {w, m.value};
  }
  return descend_on_sphere(psi, sphere_starts(n, first_guess, restarts), 200);
}

void require_tangent_at(const Point& x, const Tangent& g) {
  require_same_space(x, g.base);
  if (x.coords != g.base.coords) {
    throw std::invalid_argument("tangent vector is not based at the given point");
  }
}

}  // namespace

Constraint ball_constraint(const Ball& b) {
  if (!(b.radius > 0.0)) {
    throw std::invalid_argument("ball radius must be positive");
  }
  Constraint c;
  c.value = [b](const Point& x) {
    const double d = dist(x, b.center);
    return d * d - b.radius * b.radius;
  };
  c.gradient = [b](const Point& x) { return -2.0 * log(x, b.center); };
  c.ball = b;
  return c;
}

GscConvexSet::GscConvexSet(Point center, GeometryParams geometry, std::vector<Constraint> constraints)
    : center_(std::move(center)), geometry_(geometry), constraints_(std::move(constraints)) {
  geometry_.validate();
  if (geometry_.kappa != center_.space.curvature) {
    throw std::invalid_argument("geometry curvature differs from the manifold curvature");
  }
  if (constraints_.empty()) {
    throw std::invalid_argument("a feasible set needs at least one constraint");
  }
  for (const Constraint& c : constraints_) {
    if (c.ball) {
      require_same_space(center_, c.ball->center);
    }
    if (!(c.value(center_) < 0.0)) {
      throw std::invalid_argument("center must be strictly interior to every constraint");
    }
  }
}

bool GscConvexSet::all_balls() const {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [](const Constraint& c) { return c.ball.has_value(); });
}

double GscConvexSet::max_violation(const Point& x) const {
  double worst = -kInf;
  for (const Constraint& c : constraints_) {
    worst = std::max(worst, c.value(x));
  }
  return worst;
}

GscConvexSet make_ball_set(const Point& p, double R) {
  return GscConvexSet(p, GeometryParams{p.space.curvature, R, R}, {ball_constraint(Ball{p, R})});
}

GscConvexSet make_ball_intersection(const Point& p, const std::vector<Ball>& balls,
                                    double outer_radius) {
  if (balls.empty()) {
    throw std::invalid_argument("ball intersection needs at least one ball");
  }
  double inner = kInf;
  std::vector<Constraint> constraints;
  for (const Ball& b : balls) {
    inner = std::min(inner, b.radius - dist(p, b.center));
    constraints.push_back(ball_constraint(b));
  }
  if (!(inner > 0.0)) {
    throw std::invalid_argument("center is not interior to every ball");
  }
  return GscConvexSet(p, GeometryParams{p.space.curvature, outer_radius, inner},
                      std::move(constraints));
}

GscConvexSet make_lens(const Point& p, double inner, double offset, double outer_radius) {
  if (!(inner > 0.0) || !(offset >= 0.0)) {
    throw std::invalid_argument("lens needs inner > 0 and offset >= 0");
  }
  const Tangent e1 = orthonormal_basis(p).front();
  const double radius = inner + offset;
  return make_ball_intersection(
      p, {Ball{exp(p, offset * e1), radius}, Ball{exp(p, -offset * e1), radius}}, outer_radius);
}

OracleStats& OracleStats::operator+=(const OracleStats& o) {
  so_calls += o.so_calls;
  loo_calls += o.loo_calls;
  membership_calls += o.membership_calls;
  return *this;
}

OracleStats operator-(OracleStats a, const OracleStats& b) {
  a.so_calls -= b.so_calls;
  a.loo_calls -= b.loo_calls;
  a.membership_calls -= b.membership_calls;
  return a;
}

bool membership(const GscConvexSet& K, const Point& x) {
  require_same_space(K.center(), x);
  return K.max_violation(x) <= kFeasibilitySlack;
}

Tangent separation(const GscConvexSet& K, const Point& y) {
  require_same_space(K.center(), y);
  for (const Constraint& c : K.constraints()) {
    if (c.value(y) > kFeasibilitySlack) {
      return c.gradient(y);
    }
  }
  throw std::invalid_argument("separation oracle called at a feasible point");
}

double exit_radius(const GscConvexSet& K, const Point& base, const Tangent& u) {
  require_tangent_at(base, u);
  double lo = 0.0;
  double hi = K.geometry().R + dist(K.center(), base) + 1e-9;
  // Boundary points are kept on the feasible side of the exact constraints so that geodesic
  // combinations of them stay within the membership slack.
  while (K.max_violation(exp(base, hi * u)) <= 0.0) {
    hi *= 2.0;
  }
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (K.max_violation(exp(base, mid * u)) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Point loo(const GscConvexSet& K, const Point& x0, const Tangent& g, const LooOptions& opts) {
  require_tangent_at(x0, g);
  if (!membership(K, x0)) {
    throw std::invalid_argument("linear optimization oracle needs a feasible base point");
  }
  const double gn = norm(g);
  if (gn == 0.0) {
    return x0;
  }
  auto objective = [&](const Point& q) { return inner(g, log(x0, q)); };
  Point best = x0;
  double best_val = 0.0;
  const int n = K.space().dim;

  if (n == 2 && K.all_balls()) {
    const auto& cs = K.constraints();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const Ball& b = *cs[i].ball;
      const std::vector<Tangent> basis = orthonormal_basis(b.center);
      auto at = [&](double a) {
        return exp(b.center, Tangent{b.center, b.radius * (std::cos(a) * basis[0].vec +
                                                           std::sin(a) * basis[1].vec)});
      };
      auto f = [&](double a) {
        const Point q = at(a);
        for (std::size_t j = 0; j < cs.size(); ++j) {
          if (j != i && cs[j].value(q) > 0.0) {
            return kInf;
          }
        }
        return objective(q);
      };
      const detail::ScalarMin m = detail::minimize_on_circle(f, opts.grid, kAngleTol);
      if (m.value < best_val) {
        best = at(m.arg);
        best_val = m.value;
      }
    }
    return best;
  }

  const std::vector<Tangent> basis = orthonormal_basis(x0);
  auto direction = [&](const Vec& w) { return combine(basis, w); };
  auto psi = [&](const Vec& w) {
    const Tangent u = direction(w);
    return exit_radius(K, x0, u) * inner(g, u);
  };
  const SphereMin m =
      minimize_over_directions(basis, psi, basis_coords(basis, -g), opts.grid, opts.restarts);
  if (m.value < best_val) {
    const Tangent u = direction(m.w);
    best = exp(x0, exit_radius(K, x0, u) * u);
  }
  return best;
}

bool SetOracle::membership(const Point& x) {
  ++stats_.membership_calls;
  return geofree::membership(*set_, x);
}

Tangent SetOracle::separation(const Point& y) {
  ++stats_.so_calls;
  return geofree::separation(*set_, y);
}

Point SetOracle::loo(const Point& x0, const Tangent& g) {
  ++stats_.loo_calls;
  return geofree::loo(*set_, x0, g, loo_options_);
}

double distance_to_set(const GscConvexSet& K, double c, const Point& y) {
  const Point& p = K.center();
  require_same_space(p, y);
  if (!(c >= 0.0)) {
    throw std::invalid_argument("scale factor must be non-negative");
  }
  if (c == 0.0) {
    return dist(p, y);
  }
  if (membership(K, scale_toward(p, 1.0 / c, y))) {
    return 0.0;
  }
  const std::vector<Tangent> basis = orthonormal_basis(p);
  auto psi = [&](const Vec& w) {
    const Tangent u = combine(basis, w);
    return dist(y, exp(p, c * exit_radius(K, p, u) * u));
  };
  return minimize_over_directions(basis, psi, basis_coords(basis, log(p, y)), 360, 8).value;
}

std::vector<Point> probe_points(const GscConvexSet& K, int interior, int boundary) {
  const Point& p = K.center();
  const int n = K.space().dim;
  const std::vector<Tangent> basis = orthonormal_basis(p);
  std::vector<Point> pts;
  pts.reserve(1 + std::max(0, interior) + std::max(0, boundary));
  pts.push_back(p);
  for (long i = 1; i <= interior; ++i) {
    const Tangent u = halton_direction(basis, i);
    const double frac = std::pow(halton(i, 2), 1.0 / n);
    pts.push_back(exp(p, frac * exit_radius(K, p, u) * u));
  }
  for (long j = 1; j <= boundary; ++j) {
    const Tangent u = halton_direction(basis, 7919 + j);
    pts.push_back(exp(p, exit_radius(K, p, u) * u));
  }
  return pts;
}

Point sample_in_set(const GscConvexSet& K, Rng& rng) {
  const Point& p = K.center();
  const Tangent u = random_unit_tangent(p, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double frac = std::pow(unif(rng), 1.0 / K.space().dim);
  return exp(p, frac * exit_radius(K, p, u) * u);
}

namespace {

struct AugmentedLagrangian {
  const GscConvexSet& K;
  const Objective& F;
  std::vector<double> lambda;
  double rho = 1.0;

  Evaluation operator()(const Point& x) const {
    Evaluation e = F(x);
    const auto& cs = K.constraints();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double shifted = lambda[i] + rho * cs[i].value(x);
      if (shifted > 0.0) {
        e.value += (shifted * shifted - lambda[i] * lambda[i]) / (2.0 * rho);
        e.gradient = e.gradient + shifted * cs[i].gradient(x);
      } else {
        e.value -= lambda[i] * lambda[i] / (2.0 * rho);
      }
    }
    return e;
  }
};

// Riemannian gradient descent with Barzilai-Borwein steps and Armijo backtracking.
// Returns the number of iterations used.
int descend(const std::function<Evaluation(const Point&)>& phi, Point& x, double& step,
            int budget, double step_tol) {
  Evaluation e = phi(x);
  int it = 0;
  for (; it < budget; ++it) {
    const double gn = norm(e.gradient);
    if (gn == 0.0 || gn * step <= step_tol) {
      break;
    }
    Point xn = x;
    Evaluation en;
    bool accepted = false;
    while (gn * step > 0.1 * step_tol) {
      xn = exp(x, -step * e.gradient);
      en = phi(xn);
      if (en.value <= e.value - 1e-4 * step * gn * gn) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      break;
    }
    const Tangent dx = -log(xn, x);
    const Tangent dg = en.gradient - transport(x, xn, e.gradient);
    const double sy = inner(dx, dg);
    const double ss = inner(dx, dx);
    step = sy > 0.0 ? ss / sy : 2.0 * step;
    x = std::move(xn);
    e = std::move(en);
  }
  return it;
}

}  // namespace

MinimizeResult constrained_minimize(const GscConvexSet& K, const Objective& F,
                                    const MinimizeOptions& opts) {
  const Point& p = K.center();
  const GeometryParams& geo = K.geometry();
  const std::size_t m = K.constraints().size();

  std::vector<Point> starts{p};
  const std::vector<Tangent> basis = orthonormal_basis(p);
  for (int j = 1; j < opts.restarts; ++j) {
    const Tangent& e = basis[static_cast<std::size_t>((j - 1) / 2) % basis.size()];
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    starts.push_back(exp(p, (sign * 0.5 * geo.r) * e));
  }

  MinimizeResult best;
  best.value = kInf;
  bool have_best = false;
  for (const Point& start : starts) {
    Point x = start;
    const Evaluation e0 = F(x);
    const double g0 = norm(e0.gradient);
    AugmentedLagrangian lag{K, F, std::vector<double>(m, 0.0), 10.0 * std::max(1.0, g0) / (geo.R * geo.R)};
    double step = g0 > 0.0 ? 0.5 * geo.R / g0 : 1.0;
    int used = 0;
    double prev_violation = kInf;
    double violation = 0.0;
    for (int outer = 0; outer < 60 && used < opts.iters; ++outer) {
      used += descend(lag, x, step, opts.iters - used, opts.step_tol);
      violation = std::max(0.0, K.max_violation(x));
      double lambda_change = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double next = std::max(0.0, lag.lambda[i] + lag.rho * K.constraints()[i].value(x));
        lambda_change = std::max(lambda_change, std::abs(next - lag.lambda[i]));
        lag.lambda[i] = next;
      }
      if (violation <= kFeasibilitySlack && lambda_change <= 1e-9 * std::max(1.0, g0)) {
        break;
      }
      if (violation > 0.25 * prev_violation) {
        lag.rho *= 10.0;
      }
      prev_violation = violation;
    }

    Evaluation fx = F(x);
    Tangent kkt = fx.gradient;
    for (std::size_t i = 0; i < m; ++i) {
      if (lag.lambda[i] > 0.0) {
        kkt = kkt + lag.lambda[i] * K.constraints()[i].gradient(x);
      }
    }
    const double residual = norm(kkt) + violation;

    if (!membership(K, x)) {
      const Tangent v = log(p, x);
      double lo = 0.0;
      double hi = 1.0;
      while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (membership(K, exp(p, mid * v))) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      x = exp(p, lo * v);
      fx = F(x);
    }
    if (!have_best || fx.value < best.value) {
      best = MinimizeResult{x, fx.value, residual, used};
      have_best = true;
    }
  }
  return best;
}

}  // namespace geofree
