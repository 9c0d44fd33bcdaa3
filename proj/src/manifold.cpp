#include "geofree/manifold.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geofree {

namespace {

bool all_finite(const Vec& v) { return v.allFinite(); }

// sinh(x)/x with a series near zero.
double sinhc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

void snap_to_quadric(Vec& x, double rho) {
  const double spatial = x.tail(x.size() - 1).squaredNorm();
  x[0] = std::sqrt(rho * rho + spatial);
}

// Tangent projection at x on the hyperboloid <x,x>_L = -rho^2.
void project_to_tangent(const Vec& x, Vec& v, double rho) {
  v += (minkowski(x, v) / (rho * rho)) * x;
}

void require_base(const Point& x, const Tangent& v) {
  require_same_space(x, v.base);
  if (x.coords != v.base.coords) {
    throw std::invalid_argument("tangent vector is not based at the given point");
  }
}

Vec hyp_exp(const Vec& x, const Vec& v, double rho) {
  const double nv = std::sqrt(std::max(0.0, minkowski(v, v)));
  if (nv == 0.0) {
    return x;
  }
  const double theta = nv / rho;
  Vec y = std::cosh(theta) * x + sinhc(theta) * v;
  snap_to_quadric(y, rho);
  return y;
}

double hyp_dist(const Vec& x, const Vec& y, double rho) {
  const Vec delta = y - x;
  const double q = std::max(0.0, minkowski(delta, delta));
  return 2.0 * rho * std::asinh(std::sqrt(q) / (2.0 * rho));
}

Vec hyp_log(const Vec& x, const Vec& y, double rho) {
  const double d = hyp_dist(x, y, rho);
  if (d < 1e-12) {
    return Vec::Zero(x.size());
  }
  Vec u = y - x;
  project_to_tangent(x, u, rho);
  return u / sinhc(d / rho);
}

Vec hyp_transport(const Vec& x, const Vec& y, const Vec& v, double rho) {
  const double denom = rho * rho - minkowski(x, y);
  Vec w = v + (minkowski(y, v) / denom) * (x + y);
  project_to_tangent(y, w, rho);
  return w;
}

}  // namespace

Space Space::euclidean(int n) {
  if (n < 1) {
    throw std::invalid_argument("dimension must be at least 1");
  }
  return Space{Chart::euclidean, n, 0.0};
}

Space Space::hyperbolic(int n, double kappa) {
  if (n < 1) {
    throw std::invalid_argument("dimension must be at least 1");
  }
  if (!(kappa < 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("hyperbolic space needs curvature < 0");
  }
  return Space{Chart::hyperboloid, n, kappa};
}

Space Space::halfplane() { return Space{Chart::halfplane, 2, -1.0}; }

double Space::radius() const {
  if (curvature >= 0.0) {
    throw std::logic_error("flat space has no curvature radius");
  }
  return 1.0 / std::sqrt(-curvature);
}

std::string to_string(const Space& s) {
  std::ostringstream os;
  switch (s.chart) {
    case Chart::euclidean:
      os << "euclidean(n=" << s.dim << ")";
      break;
    case Chart::hyperboloid:
      os << "hyperboloid(n=" << s.dim << ", kappa=" << s.curvature << ")";
      break;
    case Chart::halfplane:
      os << "halfplane";
      break;
  }
  return os.str();
}

double minkowski(const Vec& a, const Vec& b) {
  return -a[0] * b[0] + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

void require_same_space(const Point& x, const Point& y) {
  if (!(x.space == y.space)) {
    throw std::invalid_argument("chart mismatch: " + to_string(x.space) + " vs " +
                                to_string(y.space));
  }
}

Point make_point(const Space& space, const Vec& coords) {
  if (coords.size() != space.ambient_dim()) {
    throw std::invalid_argument("coordinate count does not match " + to_string(space));
  }
  if (!all_finite(coords)) {
    throw std::invalid_argument("non-finite point coordinates");
  }
  Point p{space, coords};
  switch (space.chart) {
    case Chart::euclidean:
      break;
    case Chart::halfplane:
      if (!(coords[1] > 0.0)) {
        throw std::invalid_argument("half-plane point needs t2 > 0");
      }
      break;
    case Chart::hyperboloid: {
      const double rho = space.radius();
      const double form = minkowski(coords, coords);
      const double scale = std::max(1.0, coords[0] * coords[0]);
      if (!(coords[0] > 0.0) || std::abs(form + rho * rho) > 1e-6 * scale) {
        throw std::invalid_argument("point is not on the upper hyperboloid sheet");
      }
      snap_to_quadric(p.coords, rho);
      break;
    }
  }
  return p;
}

Point origin(const Space& space) {
  Vec c = Vec::Zero(space.ambient_dim());
  if (space.chart == Chart::hyperboloid) {
    c[0] = space.radius();
  } else if (space.chart == Chart::halfplane) {
    c[1] = 1.0;
  }
  return Point{space, c};
}

Tangent make_tangent(const Point& x, const Vec& v) {
  if (v.size() != x.space.ambient_dim()) {
    throw std::invalid_argument("tangent size does not match " + to_string(x.space));
  }
  if (!all_finite(v)) {
    throw std::invalid_argument("non-finite tangent vector");
  }
  Tangent t{x, v};
  if (x.space.chart == Chart::hyperboloid) {
    project_to_tangent(x.coords, t.vec, x.space.radius());
  }
  return t;
}

Tangent zero_tangent(const Point& x) { return Tangent{x, Vec::Zero(x.space.ambient_dim())}; }

double inner(const Tangent& u, const Tangent& v) {
  require_base(u.base, v);
  switch (u.base.space.chart) {
    case Chart::euclidean:
      return u.vec.dot(v.vec);
    case Chart::hyperboloid:
      return minkowski(u.vec, v.vec);
    case Chart::halfplane: {
      const double t2 = u.base.coords[1];
      return u.vec.dot(v.vec) / (t2 * t2);
    }
  }
  return 0.0;
}

double norm(const Tangent& v) { return std::sqrt(std::max(0.0, inner(v, v))); }

Tangent operator+(const Tangent& u, const Tangent& v) {
  require_base(u.base, v);
  return Tangent{u.base, u.vec + v.vec};
}

Tangent operator-(const Tangent& u, const Tangent& v) {
  require_base(u.base, v);
  return Tangent{u.base, u.vec - v.vec};
}

Tangent operator-(const Tangent& v) { return Tangent{v.base, -v.vec}; }

Tangent operator*(double a, const Tangent& v) { return Tangent{v.base, a * v.vec}; }

Point halfplane_to_hyperboloid(const Point& x) {
  if (x.space.chart != Chart::halfplane) {
    throw std::invalid_argument("expected a half-plane point");
  }
  const double u = x.coords[0];
  const double v = x.coords[1];
  const double s = u * u + v * v;
  Vec c(3);
  c << (s + 1.0) / (2.0 * v), u / v, (s - 1.0) / (2.0 * v);
  Point out{Space::hyperbolic(2, -1.0), c};
  snap_to_quadric(out.coords, 1.0);
  return out;
}

Point hyperboloid_to_halfplane(const Point& x) {
  if (x.space.chart != Chart::hyperboloid || x.space.dim != 2 || x.space.curvature != -1.0) {
    throw std::invalid_argument("expected a point on the 2-dimensional unit hyperboloid");
  }
  const double w = x.coords[0] - x.coords[2];
  Vec c(2);
  c << x.coords[1] / w, 1.0 / w;
  return Point{Space::halfplane(), c};
}

Tangent halfplane_to_hyperboloid(const Tangent& t) {
  const double u = t.base.coords[0];
  const double v = t.base.coords[1];
  const double du = t.vec[0];
  const double dv = t.vec[1];
  const double v2 = v * v;
  Vec w(3);
  w << (u / v) * du + ((v2 - u * u - 1.0) / (2.0 * v2)) * dv,
      du / v - (u / v2) * dv,
      (u / v) * du + ((v2 - u * u + 1.0) / (2.0 * v2)) * dv;
  Point base = halfplane_to_hyperboloid(t.base);
  project_to_tangent(base.coords, w, 1.0);
  return Tangent{base, w};
}

Tangent hyperboloid_to_halfplane(const Tangent& t) {
  const Vec& x = t.base.coords;
  const double w = x[0] - x[2];
  const double dw = t.vec[0] - t.vec[2];
  Vec out(2);
  out << t.vec[1] / w - x[1] * dw / (w * w), -dw / (w * w);
  return Tangent{hyperboloid_to_halfplane(t.base), out};
}

Point exp(const Point& x, const Tangent& v) {
  require_base(x, v);
  if (!all_finite(v.vec)) {
    throw std::invalid_argument("non-finite tangent vector");
  }
  switch (x.space.chart) {
    case Chart::euclidean:
      return Point{x.space, x.coords + v.vec};
    case Chart::hyperboloid:
      return Point{x.space, hyp_exp(x.coords, v.vec, x.space.radius())};
    case Chart::halfplane: {
      const Tangent h = halfplane_to_hyperboloid(v);
      return hyperboloid_to_halfplane(Point{h.base.space, hyp_exp(h.base.coords, h.vec, 1.0)});
    }
  }
  return x;
}

Point exp(const Tangent& v) { return exp(v.base, v); }

double dist(const Point& x, const Point& y) {
  require_same_space(x, y);
  switch (x.space.chart) {
    case Chart::euclidean:
      return (y.coords - x.coords).norm();
    case Chart::hyperboloid:
      return hyp_dist(x.coords, y.coords, x.space.radius());
    case Chart::halfplane: {
      const double chord = (y.coords - x.coords).norm();
      return 2.0 * std::asinh(chord / (2.0 * std::sqrt(x.coords[1] * y.coords[1])));
    }
  }
  return 0.0;
}

Tangent log(const Point& x, const Point& y) {
  require_same_space(x, y);
  switch (x.space.chart) {
    case Chart::euclidean:
      return Tangent{x, y.coords - x.coords};
    case Chart::hyperboloid:
      return Tangent{x, hyp_log(x.coords, y.coords, x.space.radius())};
    case Chart::halfplane: {
      const Point hx = halfplane_to_hyperboloid(x);
      const Point hy = halfplane_to_hyperboloid(y);
      Tangent out = hyperboloid_to_halfplane(Tangent{hx, hyp_log(hx.coords, hy.coords, 1.0)});
      out.base = x;
      return out;
    }
  }
  return zero_tangent(x);
}

Tangent transport(const Point& x, const Point& y, const Tangent& v) {
  require_base(x, v);
  require_same_space(x, y);
  switch (x.space.chart) {
    case Chart::euclidean:
      return Tangent{y, v.vec};
    case Chart::hyperboloid:
      return Tangent{y, hyp_transport(x.coords, y.coords, v.vec, x.space.radius())};
    case Chart::halfplane: {
      const Tangent hv = halfplane_to_hyperboloid(v);
      const Point hy = halfplane_to_hyperboloid(y);
      Tangent out = hyperboloid_to_halfplane(
          Tangent{hy, hyp_transport(hv.base.coords, hy.coords, hv.vec, 1.0)});
      out.base = y;
      return out;
    }
  }
  return v;
}

Point geodesic(const Point& x, const Point& y, double s) { return exp(x, s * log(x, y)); }

BallProjection project_ball_counted(const Point& p, double R, const Point& y, double tol) {
  if (!(R > 0.0)) {
    throw std::invalid_argument("ball radius must be positive");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("bisection tolerance must be positive");
  }
  const double d = dist(p, y);
  if (d <= R) {
    return {y, 0};
  }
  const Tangent v = log(p, y);
  double lo = 0.0;
  double hi = 1.0;
  int count = 0;
  while ((hi - lo) * d > tol) {
    const double mid = 0.5 * (lo + hi);
    if (dist(p, exp(p, mid * v)) <= R) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++count;
  }
  return {exp(p, lo * v), count};
}

Point project_ball(const Point& p, double R, const Point& y, double tol) {
  return project_ball_counted(p, R, y, tol).point;
}

Point scale_toward(const Point& p, double c, const Point& x) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("scale factor must be finite and non-negative");
  }
  if (c == 1.0) {
    require_same_space(p, x);
    return x;
  }
  return exp(p, c * log(p, x));
}

std::vector<Tangent> orthonormal_basis(const Point& x) {
  const int n = x.space.dim;
  std::vector<Tangent> basis;
  basis.reserve(n);
  if (x.space.chart != Chart::hyperboloid) {
    const double scale = x.space.chart == Chart::halfplane ? x.coords[1] : 1.0;
    for (int i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n);
      e[i] = scale;
      basis.push_back(Tangent{x, e});
    }
    return basis;
  }
  const int m = n + 1;
  const double rho = x.space.radius();
  for (int k = 0; k < m && static_cast<int>(basis.size()) < n; ++k) {
    const int axis = (k + 1) % m;  // spatial axes first, time axis last
    Vec w = Vec::Zero(m);
    w[axis] = 1.0;
    project_to_tangent(x.coords, w, rho);
    for (const Tangent& b : basis) {
      w -= minkowski(w, b.vec) * b.vec;
    }
    const double nw = std::sqrt(std::max(0.0, minkowski(w, w)));
    if (nw > 1e-8) {
      basis.push_back(Tangent{x, w / nw});
    }
  }
  if (static_cast<int>(basis.size()) != n) {
    throw std::runtime_error("failed to build a tangent basis");
  }
  return basis;
}

Tangent random_unit_tangent(const Point& x, Rng& rng) {
  const std::vector<Tangent> basis = orthonormal_basis(x);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec v = Vec::Zero(x.space.ambient_dim());
    for (const Tangent& b : basis) {
      v += gauss(rng) * b.vec;
    }
    Tangent t{x, v};
    const double nt = norm(t);
    if (nt > 1e-12) {
      return (1.0 / nt) * t;
    }
  }
}

Point sample_sphere(const Point& x, double delta, Rng& rng) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("sphere radius must be positive");
  }
  return exp(x, delta * random_unit_tangent(x, rng));
}

Point antipode(const Point& x, const Point& z) {
  const Tangent v = log(x, z);
  if (norm(v) == 0.0) {
    throw std::invalid_argument("antipode undefined for coincident points");
  }
  return exp(x, -v);
}

Point point_from_origin(const Space& space, const Vec& local) {
  if (local.size() != space.dim) {
    throw std::invalid_argument("local coordinate count must equal the dimension");
  }
  const Point o = origin(space);
  const std::vector<Tangent> basis = orthonormal_basis(o);
  Vec v = Vec::Zero(space.ambient_dim());
  for (int i = 0; i < space.dim; ++i) {
    v += local[i] * basis[i].vec;
  }
  return exp(o, Tangent{o, v});
}

}  // namespace geofree
