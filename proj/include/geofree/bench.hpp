#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geofree/learners.hpp"

namespace geofree {

inline constexpr const char* kLibraryVersion = "0.1.0";

// ---- regret -------------------------------------------------------------

struct Interval {
  long s = 1;
  long e = 1;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// {[s, s + 2^k - 1] : s = 1 mod 2^k, s + 2^k - 1 <= T}, ordered by length then start.
std::vector<Interval> dyadic_intervals(long T);
std::vector<Interval> all_intervals(long T);

struct IntervalRegret {
  Interval interval;
  double learner_loss = 0.0;
  double comparator_loss = 0.0;
  double regret = 0.0;
  double residual = 0.0;
  Point comparator;
};

IntervalRegret interval_regret(const RegretTrace& trace, const LossOracle& env, const GscConvexSet& K,
                               Interval I, const MinimizeOptions& opts = {});

// Regret over rounds [1, trace.T].
IntervalRegret static_regret(const RegretTrace& trace, const LossOracle& env, const GscConvexSet& K,
                             const MinimizeOptions& opts = {});

struct AdaptiveRegret {
  double value = 0.0;
  Interval worst;
  double max_residual = 0.0;
  // running_max[t - 1]: largest interval regret among evaluated intervals ending at or before t.
  std::vector<double> running_max;
};

AdaptiveRegret adaptive_regret(const RegretTrace& trace, const LossOracle& env, const GscConvexSet& K,
                               const std::vector<Interval>& intervals, const MinimizeOptions& opts = {});

// Least-squares slope of log y against log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- theorem bounds -----------------------------------------------------

double bound_t4_regret(double G, double R, double zeta, double T);
double bound_t4_so_calls(double R, double zeta, double rbar, double T);
double bound_t6_so_calls(double r, double R, double G, double zeta, double rbar, double T);
double bound_t9_regret(double G, double R, double zeta, double T);
double bound_t9_loo_calls(double T);
double bound_t10_regret(double G, double R, double alpha, double zeta, double T);
double bound_t10_loo_calls(double zeta, double T);
// Interval bound of infeasible R-OGD with constant step eta; sum_sq_grad over the interval.
double bound_rogd_interval(double dist_start_sq, double eta, double zeta, double sum_sq_grad);

// ---- experiments --------------------------------------------------------

enum class AlgorithmId { so_full, so_bandit_one, so_bandit_two, loo_block };
const char* to_string(AlgorithmId a);
AlgorithmId parse_algorithm(const std::string& s);

enum class RegretMeasure { automatic, dyadic, static_only };
const char* to_string(RegretMeasure m);
RegretMeasure parse_regret_measure(const std::string& s);

struct ManifoldSpec {
  std::string kind = "hyperbolic";  // euclidean | hyperbolic | halfplane
  int n = 2;
  double kappa = -1.0;
};

struct SetSpec {
  std::string kind = "two_balls";  // ball | two_balls
  double radius = 1.0;             // ball
  double inner = 0.4;              // two_balls
  double offset = 1.0;             // two_balls
  double outer_radius = 1.0;       // two_balls
};

struct ExperimentConfig {
  AlgorithmId algorithm = AlgorithmId::so_full;
  ManifoldSpec manifold;
  SetSpec set;
  EnvironmentSpec environment;
  // Strong convexity used by the block learner; > 0 selects the strongly convex schedule.
  double alpha = 0.0;
  std::vector<long> horizons{256};
  std::vector<std::uint64_t> seeds{1};
  RegretMeasure regret = RegretMeasure::automatic;
  bool check_bounds = true;
  bool keep_traces = false;
  LooOptions loo;
  MinimizeOptions comparator;
};

Space make_space(const ManifoldSpec& m);
GscConvexSet make_set(const SetSpec& s, const Space& space);
Theorem theorem_for(const ExperimentConfig& c);

struct BoundCheck {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct RunResult {
  long T = 0;
  long T_padded = 0;
  std::uint64_t seed = 0;
  Theorem theorem = Theorem::t4;
  Schedule schedule;
  double static_regret = 0.0;
  std::optional<double> adaptive_regret;
  Interval worst_interval;
  double comparator_residual = 0.0;
  OracleStats stats;
  long infeasible_plays = 0;
  long invariant_violations = 0;
  long projections_over_bound = 0;
  double max_estimate_ratio = 0.0;
  double max_block_gap_ratio = 0.0;
  std::vector<BoundCheck> checks;
  std::optional<RegretTrace> trace;
  std::vector<double> running_max;

  // The regret the verdicts and aggregates use.
  double headline_regret() const { return adaptive_regret.value_or(static_regret); }
};

struct HorizonSummary {
  long T = 0;
  int runs = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  std::vector<HorizonSummary> summary;
  std::optional<double> slope;
  std::optional<std::pair<double, double>> slope_band;
  std::vector<BoundCheck> aggregate_checks;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

RunResult run_single(const ExperimentConfig& c, long T, std::uint64_t seed);
// Cells (T, seed) run on `threads` workers; results are ordered by (T, seed) as configured.
Report run_experiment(const ExperimentConfig& c, int threads = 1);

// Worker count from GEOFREE_THREADS, else the hardware concurrency (at least 1).
int default_thread_count();

nlohmann::json to_json(const ExperimentConfig& c);

}  // namespace geofree
