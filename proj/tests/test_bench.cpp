#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "geofree/bench.hpp"

using namespace geofree;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

RegretTrace constant_trace(long T, double loss) {
  RegretTrace tr;
  tr.T = T;
  tr.T_padded = T;
  for (long t = 1; t <= T; ++t) {
    RoundRecord r;
    r.t = t;
    r.loss = loss;
    tr.push(r);
  }
  return tr;
}

ExperimentConfig small_config(AlgorithmId a) {
  ExperimentConfig c;
  c.algorithm = a;
  c.horizons = {64, 128};
  c.seeds = {1, 2, 3};
  c.comparator.iters = 200;
  c.comparator.restarts = 2;
  return c;
}

}  // namespace

TEST(Intervals, DyadicFamily) {
  for (long T : {1L, 7L, 8L, 10L, 100L}) {
    const std::vector<Interval> d = dyadic_intervals(T);
    long expected = 0;
    for (long len = 1; len <= T; len *= 2) expected += T / len;
    EXPECT_EQ(static_cast<long>(d.size()), expected) << T;
    for (const Interval& I : d) {
      const long len = I.e - I.s + 1;
      EXPECT_EQ(len & (len - 1), 0);
      EXPECT_EQ((I.s - 1) % len, 0);
      EXPECT_LE(I.e, T);
    }
  }
  const std::vector<Interval> d8 = dyadic_intervals(8);
  EXPECT_EQ(d8.front(), (Interval{1, 1}));
  EXPECT_EQ(d8.back(), (Interval{1, 8}));
}

TEST(Intervals, AllIntervals) {
  const std::vector<Interval> a = all_intervals(20);
  EXPECT_EQ(a.size(), 210u);
  std::set<std::pair<long, long>> seen;
  for (const Interval& I : a) seen.insert({I.s, I.e});
  EXPECT_EQ(seen.size(), 210u);
}

TEST(IntervalRegret, EuclideanClosedForm) {
  const Space e = Space::euclidean(2);
  const GscConvexSet K = make_ball_set(make_point(e, v2(0, 0)), 1.0);
  std::vector<Point> targets;
  for (int i = 0; i < 12; ++i) targets.push_back(make_point(e, v2(0.5 * std::cos(i), 0.3 * std::sin(2.0 * i))));
  const LossOracle env(K, {}, targets);
  const RegretTrace tr = constant_trace(12, 0.25);
  const Interval I{3, 9};
  Vec mean = Vec::Zero(2);
  for (long t = I.s; t <= I.e; ++t) mean += targets[static_cast<std::size_t>(t - 1)].coords;
  mean /= 7.0;
  double best = 0.0;
  for (long t = I.s; t <= I.e; ++t) best += 0.5 * (mean - targets[static_cast<std::size_t>(t - 1)].coords).squaredNorm();
  const IntervalRegret r = interval_regret(tr, env, K, I);
  EXPECT_NEAR(r.learner_loss, 7 * 0.25, 1e-12);
  EXPECT_NEAR(r.comparator_loss, best, 1e-9);
  EXPECT_NEAR(r.regret, 1.75 - best, 1e-9);
  EXPECT_NEAR((r.comparator.coords - mean).norm(), 0.0, 1e-5);
  EXPECT_THROW(interval_regret(tr, env, K, {0, 3}), std::out_of_range);
  EXPECT_THROW(interval_regret(tr, env, K, {5, 13}), std::out_of_range);
}

TEST(AdaptiveRegret, OrderingAndRunningMax) {
  const GscConvexSet K = make_lens(origin(Space::hyperbolic(2)), 0.4, 1.0, 1.0);
  const long T = 32;
  const LossOracle env(K, {}, T, 4);
  const Schedule s = make_schedule(Theorem::t4, K.geometry(), env.G(), env.M(), env.alpha(), T);
  SetOracle oracle(K);
  const RegretTrace tr = run_so_full_info(env, oracle, s);
  MinimizeOptions opts;
  opts.iters = 150;
  opts.restarts = 2;
  const IntervalRegret st = static_regret(tr, env, K, opts);
  const AdaptiveRegret dy = adaptive_regret(tr, env, K, dyadic_intervals(T), opts);
  const AdaptiveRegret ex = adaptive_regret(tr, env, K, all_intervals(T), opts);
  EXPECT_LE(st.regret, dy.value + 1e-12);
  EXPECT_LE(dy.value, ex.value + 1e-12);
  ASSERT_EQ(dy.running_max.size(), static_cast<std::size_t>(T));
  for (std::size_t i = 1; i < dy.running_max.size(); ++i) EXPECT_GE(dy.running_max[i], dy.running_max[i - 1]);
  EXPECT_DOUBLE_EQ(dy.running_max.back(), dy.value);
  EXPECT_LT(dy.max_residual, 1e-4);
}

TEST(SlopeFit, RecoversPowerLaw) {
  std::vector<double> x{64, 128, 256, 512, 1024};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.5));
  EXPECT_NEAR(fit_loglog_slope(x, y), 0.5, 1e-12);
  for (double& v : y) v = 7.0 * std::pow(v, 1.5);
  EXPECT_NEAR(fit_loglog_slope(x, y), 0.75, 1e-12);
  EXPECT_THROW(fit_loglog_slope({1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(fit_loglog_slope({1.0, 2.0}, {1.0, -1.0}), std::invalid_argument);
}

TEST(Bounds, Examples) {
  EXPECT_NEAR(bound_t4_regret(2.0, 1.0, 1.0, 400.0), 100.0, 1e-12);
  EXPECT_NEAR(bound_t9_loo_calls(1000.0), 1000.0, 0.0);
  EXPECT_NEAR(bound_t10_loo_calls(2.0, 1000.0), 2000.0, 1e-12);
  EXPECT_NEAR(bound_rogd_interval(0.5, 0.1, 2.0, 3.0), 2.5 + 0.3, 1e-15);
  // Flat case, r = R: each round costs 8 + 16 + 1 calls at most.
  EXPECT_NEAR(bound_t4_so_calls(1.0, 1.0, 1.0, 10.0), 250.0, 1e-12);
}

TEST(Experiment, FullInformationRunPassesChecks) {
  const RunResult r = run_single(small_config(AlgorithmId::so_full), 128, 5);
  EXPECT_EQ(r.theorem, Theorem::t4);
  ASSERT_TRUE(r.adaptive_regret.has_value());
  EXPECT_GE(*r.adaptive_regret, r.static_regret);
  EXPECT_EQ(r.running_max.size(), 128u);
  EXPECT_FALSE(r.checks.empty());
  for (const BoundCheck& b : r.checks) EXPECT_TRUE(b.pass) << b.name;
}

TEST(Experiment, BanditUsesStaticRegretByDefault) {
  const RunResult r = run_single(small_config(AlgorithmId::so_bandit_two), 64, 5);
  EXPECT_EQ(r.theorem, Theorem::t6);
  EXPECT_FALSE(r.adaptive_regret.has_value());
  EXPECT_EQ(r.headline_regret(), r.static_regret);
  for (const BoundCheck& b : r.checks) EXPECT_TRUE(b.pass) << b.name;
}

TEST(Experiment, BlockLearnerPadsHorizon) {
  ExperimentConfig c = small_config(AlgorithmId::loo_block);
  const RunResult r = run_single(c, 100, 1);
  EXPECT_EQ(r.theorem, Theorem::t9);
  EXPECT_EQ(r.T, 100);
  EXPECT_EQ(r.T_padded % r.schedule.B, 0);
  EXPECT_GE(r.T_padded, 100);
  c.alpha = 1.0;
  EXPECT_EQ(theorem_for(c), Theorem::t10);
  c.alpha = 5.0;
  EXPECT_THROW(run_single(c, 1000, 1), std::invalid_argument);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  const ExperimentConfig c = small_config(AlgorithmId::so_full);
  const Report a = run_experiment(c, 1);
  const Report b = run_experiment(c, 4);
  ASSERT_EQ(a.runs.size(), 6u);
  ASSERT_EQ(b.runs.size(), 6u);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].T, b.runs[i].T);
    EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
    EXPECT_EQ(a.runs[i].static_regret, b.runs[i].static_regret);
    EXPECT_EQ(a.runs[i].adaptive_regret, b.runs[i].adaptive_regret);
  }
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.runs[0].T, 64);
  EXPECT_EQ(a.runs[0].seed, 1u);
  EXPECT_EQ(a.runs[5].T, 128);
  EXPECT_EQ(a.runs[5].seed, 3u);
}

TEST(Experiment, ReportJsonCarriesConfigAndSummary) {
  const Report rep = run_experiment(small_config(AlgorithmId::so_full), 2);
  const nlohmann::json j = rep.to_json();
  EXPECT_EQ(j["library"]["version"], kLibraryVersion);
  EXPECT_EQ(j["config"]["algorithm"], "so-full");
  EXPECT_EQ(j["config"]["seeds"].size(), 3u);
  EXPECT_EQ(j["runs"].size(), 6u);
  EXPECT_EQ(j["summary"].size(), 2u);
  EXPECT_EQ(j["summary"][0]["runs"], 3);
  EXPECT_TRUE(j["slope"].is_number());
  EXPECT_TRUE(j["slope_band"].is_null());
  EXPECT_EQ(j["all_pass"], rep.all_pass());
  EXPECT_TRUE(j["runs"][0]["schedule"].contains("zeta"));
}

TEST(Experiment, RejectsEmptyGrid) {
  ExperimentConfig c = small_config(AlgorithmId::so_full);
  c.seeds.clear();
  EXPECT_THROW(run_experiment(c, 1), std::invalid_argument);
}
