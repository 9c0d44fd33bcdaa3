#include "geofree/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geofree {

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

void require_upper(const Vec& x) {
  if (x.size() != 2 || !(x[1] > 0.0) || !x.allFinite()) {
    throw std::invalid_argument("half-plane points need two finite coordinates with positive height");
  }
}

const Vec& apex() {
  static const Vec p = vec2(0.0, 1.0);
  return p;
}

// Closed-form images of the arc endpoints and apex under contraction by 1 - alpha.
struct Contracted {
  Vec u;
  Vec v;
  Vec w;
  Vec mid;
};

Contracted contracted_closed_form(double alpha) {
  const double c = std::atanh(-1.0 / std::sqrt(2.0));
  const double th = std::tanh(alpha * c);
  const double ch = std::cosh(alpha * c);
  Contracted out;
  out.u = vec2(-1.0 - std::sqrt(2.0) * th, std::sqrt(2.0) / ch);
  out.v = vec2(1.0 + std::sqrt(2.0) * th, std::sqrt(2.0) / ch);
  out.w = vec2(0.0, std::exp((1.0 - alpha) * std::log(std::sqrt(3.0))));
  out.mid = vec2(0.0, std::sqrt(3.0 + 2.0 * std::sqrt(2.0) * th));
  return out;
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("contraction parameter must lie in [0,1)");
  }
}

void require_unit(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("geodesic parameter must lie in [0,1]");
  }
}

}  // namespace

HalfPlaneGeodesic::HalfPlaneGeodesic(const Vec& x, const Vec& y) : from(x), to(y) {
  require_upper(x);
  require_upper(y);
  vertical = x[0] == y[0];
  if (!vertical) {
    center = (y[0] * y[0] + y[1] * y[1] - x[0] * x[0] - x[1] * x[1]) / (2.0 * (y[0] - x[0]));
    radius = std::hypot(y[0] - center, y[1]);
  }
}

Vec HalfPlaneGeodesic::at(double s) const {
  if (vertical) {
    return vec2(from[0], std::exp((1.0 - s) * std::log(from[1]) + s * std::log(to[1])));
  }
  const double phi = (1.0 - s) * std::atanh((center - from[0]) / radius) +
                     s * std::atanh((center - to[0]) / radius);
  return vec2(center - radius * std::tanh(phi), radius / std::cosh(phi));
}

Vec halfplane_geodesic(const Vec& x, const Vec& y, double s) {
  return HalfPlaneGeodesic(x, y).at(s);
}

Vec halfplane_midpoint(double lambda, double mu) {
  if (!(mu > 0.0)) {
    throw std::invalid_argument("midpoint height needs mu > 0");
  }
  return vec2(0.0, std::hypot(lambda, mu));
}

double halfplane_distance(const Vec& x, const Vec& y) {
  require_upper(x);
  require_upper(y);
  const double arg = 1.0 + (x - y).squaredNorm() / (2.0 * x[1] * y[1]);
  return std::acosh(std::max(1.0, arg));
}

double shrink_gap(double alpha) {
  require_alpha(alpha);
  const Contracted c = contracted_closed_form(alpha);
  return c.mid[1] - c.w[1];
}

NonconvexityWitness scaled_set_nonconvexity_witness(double alpha) {
  require_alpha(alpha);
  const Space hp = Space::halfplane();
  const Point p = make_point(hp, apex());
  const double c = 1.0 - alpha;
  NonconvexityWitness out;
  out.alpha = alpha;
  out.u = scale_toward(p, c, make_point(hp, vec2(-1.0, std::sqrt(2.0))));
  out.v = scale_toward(p, c, make_point(hp, vec2(1.0, std::sqrt(2.0))));
  out.w = scale_toward(p, c, make_point(hp, vec2(0.0, std::sqrt(3.0))));
  out.midpoint = geodesic(out.u, out.v, 0.5);
  const Contracted cf = contracted_closed_form(alpha);
  out.construction_mismatch = std::max({(out.u.coords - cf.u).cwiseAbs().maxCoeff(),
                                        (out.v.coords - cf.v).cwiseAbs().maxCoeff(),
                                        (out.w.coords - cf.w).cwiseAbs().maxCoeff(),
                                        (out.midpoint.coords - cf.mid).cwiseAbs().maxCoeff()});
  out.nonconvex = out.w.coords[1] < out.midpoint.coords[1];
  return out;
}

double shrink_gap_generic(double alpha) {
  const NonconvexityWitness w = scaled_set_nonconvexity_witness(alpha);
  return w.midpoint.coords[1] - w.w.coords[1];
}

double minkowski_gauge_ratio(double s) {
  require_unit(s);
  const double phi = (1.0 - s) * std::atanh(-0.5);
  const double cos_t = std::tanh(phi);
  const double sin_t = 1.0 / std::cosh(phi);
  const Vec z = vec2(-2.0 - 2.0 * cos_t, 2.0 * sin_t);
  const double b = -(7.0 + 8.0 * cos_t) / (4.0 * (1.0 + cos_t));
  const Vec q = vec2(1.0 / b, std::sqrt(3.0 - 1.0 / (b * b)));
  return halfplane_distance(z, apex()) / halfplane_distance(q, apex());
}

double minkowski_gauge_ratio_generic(double s) {
  require_unit(s);
  const Space hp = Space::halfplane();
  const Point p = make_point(hp, apex());
  const Point x = make_point(hp, vec2(-1.0, std::sqrt(3.0)));
  const Point y = make_point(hp, vec2(-2.0, 2.0));
  const Point z = geodesic(x, y, s);
  const Tangent v = log(p, z);
  auto inside = [&](double t) { return exp(p, t * v).coords.squaredNorm() <= 3.0; };
  double lo = 0.0;
  double hi = 1.0;
  if (inside(hi)) {
    throw std::logic_error("gauge point is expected outside the set");
  }
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  const Point q = exp(p, 0.5 * (lo + hi) * v);
  return dist(p, z) / dist(p, q);
}

double minkowski_convexity_gap() {
  return minkowski_gauge_ratio(0.5) - 0.5 * minkowski_gauge_ratio(0.0) - 0.5 * minkowski_gauge_ratio(1.0);
}

double minkowski_convexity_gap_generic() {
  return minkowski_gauge_ratio_generic(0.5) - 0.5 * minkowski_gauge_ratio_generic(0.0) -
         0.5 * minkowski_gauge_ratio_generic(1.0);
}

}  // namespace geofree
