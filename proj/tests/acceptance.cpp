// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "geofree/bench.hpp"
#include "geofree/counterexamples.hpp"

using namespace geofree;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<std::uint64_t> seeds(int n) {
  std::vector<std::uint64_t> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 1);
  return s;
}

GscConvexSet default_set() { return make_set(SetSpec{}, make_space(ManifoldSpec{})); }

Point random_point(const Space& s, Rng& rng, double spread) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec local(s.dim);
  for (int i = 0; i < s.dim; ++i) local[i] = g(rng);
  local *= spread * std::pow(u(rng), 1.0 / s.dim) / local.norm();
  return point_from_origin(s, local);
}

Objective half_sq_dist(const Point& a) {
  return [a](const Point& x) {
    const Tangent t = log(x, a);
    return Evaluation{0.5 * inner(t, t), -1.0 * t};
  };
}

// Collects the failing checks of a report as "name obs > bound (T, seed)".
std::string failures(const Report& rep) {
  std::ostringstream s;
  int shown = 0;
  for (const RunResult& r : rep.runs) {
    for (const BoundCheck& b : r.checks) {
      if (!b.pass && shown++ < 3) {
        s << "; " << b.name << ' ' << num(b.observed) << " > " << num(b.bound) << " (T=" << r.T << " seed=" << r.seed
          << ')';
      }
    }
  }
  for (const BoundCheck& b : rep.aggregate_checks) {
    if (!b.pass) s << "; " << b.name << ' ' << num(b.observed) << " outside band";
  }
  return s.str();
}

double worst_ratio(const Report& rep, const std::string& name) {
  double w = 0.0;
  for (const RunResult& r : rep.runs) {
    for (const BoundCheck& b : r.checks) {
      if (b.name == name && b.bound > 0.0) w = std::max(w, b.observed / b.bound);
    }
  }
  return w;
}

Outcome counterexample_values() {
  const double shrink = shrink_gap(0.1);
  const double mink = minkowski_convexity_gap();
  const bool shrink_ok = std::abs(shrink - kReferenceShrinkGap) <= kReferenceTolerance && shrink > 0.0;
  const bool mink_ok = std::abs(mink - kReferenceMinkowskiGap) <= kReferenceTolerance && mink > 0.0;
  Outcome o;
  o.pass = shrink_ok && mink_ok;
  o.detail = "shrink_gap(0.1) = " + num(shrink) + " vs " + num(kReferenceShrinkGap) +
             ", minkowski gap = " + num(mink) + " vs " + num(kReferenceMinkowskiGap) + " (tol " +
             num(kReferenceTolerance) + "); both positive: " + ((shrink > 0.0 && mink > 0.0) ? "yes" : "no");
  return o;
}

Outcome full_information_bound() {
  ExperimentConfig c;
  c.algorithm = AlgorithmId::so_full;
  c.horizons = {256, 1024, 4096};
  c.seeds = seeds(20);
  const Report rep = run_experiment(c, default_thread_count());
  Outcome o;
  o.pass = rep.all_pass() && rep.runs.size() == 60;
  o.detail = std::to_string(rep.runs.size()) + " runs; max regret/bound " + num(worst_ratio(rep, "T4 regret")) +
             ", max SO calls/bound " + num(worst_ratio(rep, "T4 separation calls")) + failures(rep);
  return o;
}

Outcome block_learner_bounds() {
  Outcome o;
  std::ostringstream d;
  for (double alpha : {0.0, 1.0}) {
    ExperimentConfig c;
    c.algorithm = AlgorithmId::loo_block;
    c.alpha = alpha;
    c.horizons = {512, 4096};
    c.seeds = seeds(10);
    const Report rep = run_experiment(c, default_thread_count());
    const bool ok = rep.all_pass() && rep.runs.size() == 20;
    o.pass = o.pass && ok;
    const std::string t = alpha > 0.0 ? "T10" : "T9";
    d << (alpha > 0.0 ? "; " : "") << t << ": " << rep.runs.size() << " runs, max regret/bound "
      << num(worst_ratio(rep, t + " regret")) << ", max LOO calls/bound " << num(worst_ratio(rep, t + " LOO calls"))
      << failures(rep);
  }
  o.detail = d.str();
  return o;
}

Outcome bandit_scaling() {
  Outcome o;
  std::ostringstream d;
  for (AlgorithmId a : {AlgorithmId::so_bandit_one, AlgorithmId::so_bandit_two}) {
    ExperimentConfig c;
    c.algorithm = a;
    c.horizons = {256, 1024, 4096, 16384};
    c.seeds = seeds(20);
    const Report rep = run_experiment(c, default_thread_count());
    long infeasible = 0;
    long invariants = 0;
    for (const RunResult& r : rep.runs) {
      infeasible += r.infeasible_plays;
      invariants += r.invariant_violations;
    }
    const bool ok = rep.all_pass() && rep.slope && rep.slope_band && !rep.aggregate_checks.empty() &&
                    infeasible == 0 && invariants == 0;
    o.pass = o.pass && ok;
    d << (a == AlgorithmId::so_bandit_two ? "; " : "") << to_string(a) << " slope "
      << (rep.slope ? num(*rep.slope) : "n/a");
    if (rep.slope_band) d << " in [" << num(rep.slope_band->first) << ", " << num(rep.slope_band->second) << "]";
    d << ", infeasible plays " << infeasible;
    if (a == AlgorithmId::so_bandit_two) d << ", invariant violations " << invariants;
    d << failures(rep);
  }
  o.detail = d.str();
  return o;
}

Outcome iteration_bounds() {
  const GscConvexSet K = default_set();
  const double R = K.geometry().R;
  const double zt = zeta(K.geometry().kappa, 2.0 * R);
  const double rbar = r_bar(K.geometry());
  const std::vector<Point> probes = probe_points(K, 300, 300);
  Rng rng = make_stream(5, "sampler");
  std::uniform_real_distribution<double> udelta(0.05, 0.6);
  std::uniform_real_distribution<double> ueps(0.01, 0.3);
  int so_bad = 0;
  int sh_bad = 0;
  int loo_bad = 0;
  double worst_so = 0.0;
  double worst_sh = 0.0;
  double worst_loo = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double delta = udelta(rng);
    const Point y0 = random_point(K.space(), rng, 3.0);
    SetOracle oracle(K);
    const ProjectionResult r = so_infeasible_projection(oracle, rbar, delta, y0);
    const double d0 = distance_to_set(K, 1.0 - delta, y0);
    const double d1 = distance_to_set(K, 1.0 - delta, r.y);
    const double bound = so_projection_bound(zt, delta, rbar, d0 * d0, d1 * d1);
    worst_so = std::max(worst_so, r.iterations / bound);
    if (r.iterations > bound + 1e-9 || !membership(K, r.y)) ++so_bad;
  }
  for (int k = 0; k < 100; ++k) {
    const double eps = ueps(rng);
    const Point y = project_ball(K.center(), R, random_point(K.space(), rng, 2.0));
    const Point x1 = sample_in_set(K, rng);
    SetOracle oracle(K);
    const ProjectionResult r = separating_hyperplane_rfw(oracle, x1, y, eps);
    const double cap = std::max(1.0, separating_hyperplane_bound(zt, R, eps));
    worst_sh = std::max(worst_sh, r.iterations / cap);
    if (r.iterations > cap) ++sh_bad;
  }
  for (int k = 0; k < 100; ++k) {
    const double eps = ueps(rng);
    const Point x0 = sample_in_set(K, rng);
    const Point y0 = random_point(K.space(), rng, 2.5);
    SetOracle oracle(K);
    const ProjectionResult r = loo_infeasible_projection(oracle, x0, y0, eps);
    const double bound = loo_projection_bound(zt, std::pow(dist(x0, y0), 2), eps);
    worst_loo = std::max(worst_loo, r.iterations / std::max(bound, 1e-300));
    bool ok = r.iterations <= bound && membership(K, *r.x) && std::pow(dist(*r.x, r.y), 2) <= 3.0 * eps;
    for (const Point& z : probes) {
      ok = ok && std::pow(dist(r.y, z), 2) <= std::pow(dist(y0, z), 2) + 1e-9;
    }
    if (!ok) ++loo_bad;
  }
  Outcome o;
  o.pass = so_bad == 0 && sh_bad == 0 && loo_bad == 0;
  o.detail = "violations: separation projection " + std::to_string(so_bad) + "/100 (max iter/bound " +
             num(worst_so) + "), hyperplane search " + std::to_string(sh_bad) + "/100 (max " + num(worst_sh) +
             "), LOO projection " + std::to_string(loo_bad) + "/100 (max " + num(worst_loo) + ")";
  return o;
}

Outcome frank_wolfe_rates() {
  Rng rng = make_stream(6, "sampler");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Space h = Space::hyperbolic(2);
  const int iters = 50;
  int primal_bad = 0;
  int dual_bad = 0;
  double worst_primal = 0.0;
  double worst_dual = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double R = 0.3 + 1.2 * u(rng);
    const Point p = random_point(h, rng, 1.0);
    const GscConvexSet K = make_ball_set(p, R);
    const Point a = random_point(h, rng, 3.0);
    const double da = dist(a, p);
    const double fstar = da <= R ? 0.0 : 0.5 * (da - R) * (da - R);
    const double L = zeta(h.curvature, da + R);
    const double D = 2.0 * R;
    SetOracle oracle(K);
    const RfwResult r = rfw_min(oracle, half_sq_dist(a), sample_in_set(K, rng), iters);
    for (std::size_t i = 1; i < r.values.size(); ++i) {
      const double ratio = (r.values[i] - fstar) / (2.0 * L * D * D / (static_cast<double>(i) + 2.0));
      worst_primal = std::max(worst_primal, ratio);
      if (ratio > 1.0) ++primal_bad;
    }
    const double best_gap = *std::min_element(r.gaps.begin(), r.gaps.end());
    const double dual_ratio = best_gap / (27.0 * L * D * D / (4.0 * (iters + 2.0)));
    worst_dual = std::max(worst_dual, dual_ratio);
    if (dual_ratio > 1.0) ++dual_bad;
  }
  Outcome o;
  o.pass = primal_bad == 0 && dual_bad == 0;
  o.detail = "50 instances, " + std::to_string(iters) + " steps; primal violations " + std::to_string(primal_bad) +
             " (max gap/rate " + num(worst_primal) + "), dual violations " + std::to_string(dual_bad) +
             " (max " + num(worst_dual) + ")";
  return o;
}

Outcome geometry_suite() {
  Outcome o;
  std::ostringstream d;
  for (const Space& s : {Space::hyperbolic(2), Space::hyperbolic(5, -0.5), Space::halfplane()}) {
    const std::vector<cli::SuiteResult> res = cli::run_geometry_suites(s, {10000, 7, 2.0});
    double worst = 0.0;
    for (const cli::SuiteResult& r : res) {
      if (!r.ok()) {
        o.pass = false;
        d << "failed " << r.name << " (" << r.passed << '/' << r.trials << ", residual " << num(r.max_residual) << "); ";
      }
      worst = std::max(worst, r.max_residual / r.tolerance);
    }
    d << (s.chart == Chart::halfplane ? "halfplane" : "H" + std::to_string(s.dim)) << " max residual/tol "
      << num(worst) << "; ";
  }
  double flat = 0.0;
  for (double kappa : {-1e-8, -1e-10, -1e-12}) {
    const GeometryParams g{kappa, 1.0, 0.5};
    flat = std::max({flat, std::abs(zeta(kappa, 2.0) - 1.0), std::abs(r_bar(g) - 0.5),
                     std::abs(delta_prime_one_point(g, 0.2) - 0.2 * 0.5),
                     std::abs(delta_prime_two_point(g, 0.8) - 0.2 * 0.5)});
  }
  o.pass = o.pass && flat <= 1e-6;
  d << "flat-limit constant error " << num(flat);
  o.detail = d.str();
  return o;
}

Outcome euclidean_reduction() {
  double worst = 0.0;
  for (int n : {2, 3, 5}) {
    const Space e = Space::euclidean(n);
    const GscConvexSet K = make_ball_set(make_point(e, Vec::Zero(n)), 1.0);
    for (std::uint64_t seed : {1, 2, 3}) {
      const long T = 1000;
      const LossOracle env(K, {}, T, seed);
      auto eta = [](long t) { return 0.7 / std::sqrt(static_cast<double>(t)); };
      auto project = [&](const Point& y) { return project_ball(K.center(), 1.0, y); };
      const RegretTrace tr = run_infeasible_rogd(env, K, project, K.center(), eta, T);
      Vec x = Vec::Zero(n);
      for (long t = 1; t <= T; ++t) {
        worst = std::max(worst, (tr.rounds[static_cast<std::size_t>(t - 1)].played[0].coords - x).norm());
        x -= eta(t) * (x - env.target(t).coords);
        if (x.norm() > 1.0) x /= x.norm();
      }
    }
  }
  Outcome o;
  o.pass = worst <= 1e-9;
  o.detail = "9 traces of 1000 rounds; max per-iterate deviation " + num(worst);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "counterexample values", 1.0, counterexample_values},
      {2, "full-information regret and SO calls", 300.0, full_information_bound},
      {3, "block learner regret and LOO calls", 600.0, block_learner_bounds},
      {4, "bandit scaling and invariants", 900.0, bandit_scaling},
      {5, "projection iteration bounds", 600.0, iteration_bounds},
      {6, "Frank-Wolfe rates", 600.0, frank_wolfe_rates},
      {7, "geometry suite", 600.0, geometry_suite},
      {8, "Euclidean reduction", 600.0, euclidean_reduction},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; runtime over limit " + num(c.limit_seconds) + " s";
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL") << " [" << num(secs)
              << " s] " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criterion(s) failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
