#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace geofree::detail {

struct ScalarMin {
  double arg = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

// Golden-section search on [a, b]; on equal values the left point is kept.
inline ScalarMin golden_section(const std::function<double(double)>& f, double a, double b,
                                double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarMin{c, fc} : ScalarMin{d, fd};
}

// Periodic search over [0, 2pi): grid scan, then golden-section refinement around each
// grid-local minimum. Non-finite values mark excluded angles; the boundaries of excluded
// arcs are located by bisection and refined from the feasible side.
inline ScalarMin minimize_on_circle(const std::function<double(double)>& f, int grid, double tol) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double h = two_pi / grid;
  std::vector<double> vals(grid);
  for (int k = 0; k < grid; ++k) {
    vals[k] = f(k * h);
  }
  ScalarMin best;
  for (int k = 0; k < grid; ++k) {
    if (vals[k] < best.value) {
      best = {k * h, vals[k]};
    }
  }
  auto feasible_edge = [&](double in, double out) {
    for (int i = 0; i < 60 && std::abs(out - in) > 1e-15; ++i) {
      const double mid = 0.5 * (in + out);
      if (std::isfinite(f(mid))) {
        in = mid;
      } else {
        out = mid;
      }
    }
    return in;
  };
  for (int k = 0; k < grid; ++k) {
    if (!std::isfinite(vals[k])) {
      continue;
    }
    const int km = (k + grid - 1) % grid;
    const int kp = (k + 1) % grid;
    const double vm = vals[km];
    const double vp = vals[kp];
    const bool local = !(vm < vals[k]) && !(vp < vals[k]);
    if (!local) {
      continue;
    }
    const double center = k * h;
    double a = center - h;
    double b = center + h;
    if (!std::isfinite(vm)) {
      a = feasible_edge(center, a);
      const double fa = f(a);
      if (fa < best.value) {
        best = {a, fa};
      }
    }
    if (!std::isfinite(vp)) {
      b = feasible_edge(center, b);
      const double fb = f(b);
      if (fb < best.value) {
        best = {b, fb};
      }
    }
    const ScalarMin m = golden_section(f, a, b, tol);
    if (m.value < best.value) {
      best = m;
    }
  }
  if (std::isfinite(best.value)) {
    best.arg = std::fmod(best.arg + two_pi, two_pi);
  }
  return best;
}

}  // namespace geofree::detail
