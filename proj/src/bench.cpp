#include "geofree/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace geofree {

std::vector<Interval> dyadic_intervals(long T) {
  std::vector<Interval> out;
  for (long len = 1; len <= T; len *= 2) {
    for (long s = 1; s + len - 1 <= T; s += len) {
      out.push_back({s, s + len - 1});
    }
  }
  return out;
}

std::vector<Interval> all_intervals(long T) {
  std::vector<Interval> out;
  for (long s = 1; s <= T; ++s) {
    for (long e = s; e <= T; ++e) {
      out.push_back({s, e});
    }
  }
  return out;
}

IntervalRegret interval_regret(const RegretTrace& trace, const LossOracle& env, const GscConvexSet& K,
                               Interval I, const MinimizeOptions& opts) {
  const long n = static_cast<long>(trace.cum_loss.size());
  if (I.s < 1 || I.e > n || I.s > I.e) {
    throw std::out_of_range("interval outside the trace");
  }
  IntervalRegret out;
  out.interval = I;
  const double before = I.s > 1 ? trace.cum_loss[static_cast<std::size_t>(I.s - 2)] : 0.0;
  out.learner_loss = trace.cum_loss[static_cast<std::size_t>(I.e - 1)] - before;
  const MinimizeResult m = constrained_minimize(K, env.interval_objective(I.s, I.e), opts);
  out.comparator_loss = m.value;
  out.residual = m.residual;
  out.comparator = m.point;
  out.regret = out.learner_loss - out.comparator_loss;
  return out;
}

IntervalRegret static_regret(const RegretTrace& trace, const LossOracle& env, const GscConvexSet& K,
                             const MinimizeOptions& opts) {
  return interval_regret(trace, env, K, {1, trace.T}, opts);
}

AdaptiveRegret adaptive_regret(const RegretTrace& trace, const LossOracle& env, const GscConvexSet& K,
                               const std::vector<Interval>& intervals, const MinimizeOptions& opts) {
  AdaptiveRegret out;
  out.value = -std::numeric_limits<double>::infinity();
  const long n = static_cast<long>(trace.cum_loss.size());
  std::vector<double> best_ending(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  for (const Interval& I : intervals) {
    const IntervalRegret r = interval_regret(trace, env, K, I, opts);
    out.max_residual = std::max(out.max_residual, r.residual);
    if (r.regret > out.value) {
      out.value = r.regret;
      out.worst = I;
    }
    double& slot = best_ending[static_cast<std::size_t>(I.e - 1)];
    slot = std::max(slot, r.regret);
  }
  out.running_max.resize(static_cast<std::size_t>(n));
  double run = -std::numeric_limits<double>::infinity();
  for (long t = 0; t < n; ++t) {
    run = std::max(run, best_ending[static_cast<std::size_t>(t)]);
    out.running_max[static_cast<std::size_t>(t)] = run;
  }
  return out;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs at least two matching points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("slope fit needs positive values");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double bound_t4_regret(double G, double R, double zeta, double T) {
  return 2.5 * G * R * std::sqrt(zeta * T);
}

double bound_t4_so_calls(double R, double zeta, double rbar, double T) {
  const double rb2 = rbar * rbar;
  return (8.0 * R * R * std::sqrt(zeta) / rb2 + 16.0 * R * R / rb2 + 1.0) * T;
}

double bound_t6_so_calls(double r, double R, double G, double zeta, double rbar, double T) {
  const double rb2 = rbar * rbar;
  return zeta * (2.0 * r * R * G / rb2) * T + zeta * (r * r * G * G / rb2) * T + T;
}

double bound_t9_regret(double G, double R, double zeta, double T) {
  const double t34 = std::pow(T, 0.75);
  return G * R * (2.5 * t34 * zeta * zeta + zeta * std::sqrt(180.0) * t34 + 4.0 * t34 / zeta + 20.0 * std::sqrt(T));
}

double bound_t9_loo_calls(double T) { return T; }

double bound_t10_regret(double G, double R, double alpha, double zeta, double T) {
  return (20.0 * std::sqrt(3.0) * zeta + 1.0) * std::cbrt(std::pow(G, 4) * R * R / alpha) * std::pow(T, 2.0 / 3.0) *
         (1.0 + (2.0 / 3.0) * std::log(std::sqrt(T) * G / (alpha * R)));
}

double bound_t10_loo_calls(double zeta, double T) { return zeta * T; }

double bound_rogd_interval(double dist_start_sq, double eta, double zeta, double sum_sq_grad) {
  return dist_start_sq / (2.0 * eta) + eta * zeta * sum_sq_grad / 2.0;
}

const char* to_string(AlgorithmId a) {
  switch (a) {
    case AlgorithmId::so_full:
      return "so-full";
    case AlgorithmId::so_bandit_one:
      return "so-bandit-1";
    case AlgorithmId::so_bandit_two:
      return "so-bandit-2";
    case AlgorithmId::loo_block:
      return "loo-block";
  }
  return "unknown";
}

AlgorithmId parse_algorithm(const std::string& s) {
  if (s == "so-full") return AlgorithmId::so_full;
  if (s == "so-bandit-1") return AlgorithmId::so_bandit_one;
  if (s == "so-bandit-2") return AlgorithmId::so_bandit_two;
  if (s == "loo-block") return AlgorithmId::loo_block;
  throw std::invalid_argument("unknown algorithm '" + s +
                              "' (expected so-full, so-bandit-1, so-bandit-2 or loo-block)");
}

const char* to_string(RegretMeasure m) {
  switch (m) {
    case RegretMeasure::automatic:
      return "auto";
    case RegretMeasure::dyadic:
      return "dyadic";
    case RegretMeasure::static_only:
      return "static";
  }
  return "unknown";
}

RegretMeasure parse_regret_measure(const std::string& s) {
  if (s == "auto") return RegretMeasure::automatic;
  if (s == "dyadic") return RegretMeasure::dyadic;
  if (s == "static") return RegretMeasure::static_only;
  throw std::invalid_argument("unknown regret measure '" + s + "' (expected auto, dyadic or static)");
}

Space make_space(const ManifoldSpec& m) {
  if (m.kind == "euclidean") return Space::euclidean(m.n);
  if (m.kind == "hyperbolic") return Space::hyperbolic(m.n, m.kappa);
  if (m.kind == "halfplane") return Space::halfplane();
  throw std::invalid_argument("unknown manifold kind '" + m.kind + "' (expected euclidean, hyperbolic or halfplane)");
}

GscConvexSet make_set(const SetSpec& s, const Space& space) {
  const Point p = origin(space);
  if (s.kind == "ball") return make_ball_set(p, s.radius);
  if (s.kind == "two_balls") return make_lens(p, s.inner, s.offset, s.outer_radius);
  throw std::invalid_argument("unknown set kind '" + s.kind + "' (expected ball or two_balls)");
}

Theorem theorem_for(const ExperimentConfig& c) {
  switch (c.algorithm) {
    case AlgorithmId::so_full:
      return Theorem::t4;
    case AlgorithmId::so_bandit_one:
      return Theorem::t5;
    case AlgorithmId::so_bandit_two:
      return Theorem::t6;
    case AlgorithmId::loo_block:
      return c.alpha > 0.0 ? Theorem::t10 : Theorem::t9;
  }
  return Theorem::t4;
}

namespace {

BoundCheck check_le(std::string name, double observed, double bound) {
  return {std::move(name), observed, bound, observed <= bound};
}

std::optional<std::pair<double, double>> slope_band(Theorem t) {
  switch (t) {
    case Theorem::t4:
      return std::make_pair(0.35, 0.65);
    case Theorem::t5:
      return std::make_pair(0.5, 0.85);
    case Theorem::t6:
      return std::make_pair(0.35, 0.65);
    default:
      return std::nullopt;
  }
}

bool uses_dyadic(const ExperimentConfig& c, Theorem t) {
  switch (c.regret) {
    case RegretMeasure::dyadic:
      return true;
    case RegretMeasure::static_only:
      return false;
    case RegretMeasure::automatic:
      return t == Theorem::t4 || t == Theorem::t9;
  }
  return false;
}

nlohmann::json json_of(const OracleStats& s) {
  return {{"so_calls", s.so_calls}, {"loo_calls", s.loo_calls}, {"membership_calls", s.membership_calls}};
}

nlohmann::json json_of(const BoundCheck& b) {
  return {{"name", b.name}, {"observed", b.observed}, {"bound", b.bound}, {"pass", b.pass}};
}

nlohmann::json json_of(const Schedule& s) {
  return {{"theorem", to_string(s.theorem)},
          {"T", s.T},
          {"T_padded", s.T_padded},
          {"zeta", s.zeta},
          {"rbar", s.rbar},
          {"G", s.G},
          {"M", s.M},
          {"alpha", s.alpha},
          {"eta", s.eta},
          {"delta", s.delta},
          {"tau", s.tau},
          {"beta", s.beta},
          {"delta_prime", s.delta_prime},
          {"B", s.B},
          {"block_eta_first", s.block_eta.empty() ? 0.0 : s.block_eta.front()},
          {"block_eps_first", s.block_eps.empty() ? 0.0 : s.block_eps.front()},
          {"blocks", s.block_eps.size()}};
}

}  // namespace

RunResult run_single(const ExperimentConfig& c, long T, std::uint64_t seed) {
  const Space space = make_space(c.manifold);
  const GscConvexSet K = make_set(c.set, space);
  const GeometryParams& geo = K.geometry();
  const Theorem thm = theorem_for(c);
  const LossConstants lc = loss_constants(c.environment, geo.R);
  if (thm == Theorem::t10 && c.alpha > lc.alpha) {
    throw std::invalid_argument("alpha exceeds the strong convexity of the configured losses");
  }

  RunResult out;
  out.T = T;
  out.seed = seed;
  out.theorem = thm;
  out.schedule = make_schedule(thm, geo, lc.G, lc.M, c.alpha, T);
  const Schedule& s = out.schedule;
  out.T_padded = s.T_padded;

  const LossOracle env(K, c.environment, s.T_padded, seed);
  SetOracle oracle(K, c.loo);
  Rng rng = make_stream(seed, "learner");
  RegretTrace trace;
  switch (thm) {
    case Theorem::t4:
      trace = run_so_full_info(env, oracle, s);
      break;
    case Theorem::t5:
      trace = run_so_bandit_one_point(env, oracle, s, rng);
      break;
    case Theorem::t6:
      trace = run_so_bandit_two_point(env, oracle, s, rng);
      break;
    case Theorem::t9:
    case Theorem::t10:
      trace = run_loo_block_ogd(env, oracle, s);
      break;
  }

  out.stats = trace.stats;
  out.infeasible_plays = trace.infeasible_plays;
  out.invariant_violations = trace.invariant_violations;
  out.projections_over_bound = trace.projections_over_bound;
  out.max_estimate_ratio = trace.max_estimate_ratio;
  out.max_block_gap_ratio = trace.max_block_gap_ratio;

  const IntervalRegret st = static_regret(trace, env, K, c.comparator);
  out.static_regret = st.regret;
  out.comparator_residual = st.residual;
  out.worst_interval = st.interval;
  if (uses_dyadic(c, thm)) {
    const AdaptiveRegret ar = adaptive_regret(trace, env, K, dyadic_intervals(T), c.comparator);
    if (st.regret > ar.value) {
      out.adaptive_regret = st.regret;
    } else {
      out.adaptive_regret = ar.value;
      out.worst_interval = ar.worst;
    }
    out.comparator_residual = std::max(out.comparator_residual, ar.max_residual);
    out.running_max = ar.running_max;
  }

  if (c.check_bounds) {
    const double Td = static_cast<double>(T);
    const double R = geo.R;
    out.checks.push_back(check_le("feasible plays", static_cast<double>(trace.infeasible_plays), 0.0));
    switch (thm) {
      case Theorem::t4:
        out.checks.push_back(check_le("T4 regret", out.headline_regret(), bound_t4_regret(s.G, R, s.zeta, Td)));
        out.checks.push_back(check_le("T4 separation calls", static_cast<double>(trace.stats.so_calls),
                                      bound_t4_so_calls(R, s.zeta, s.rbar, Td)));
        break;
      case Theorem::t5:
        break;
      case Theorem::t6:
        out.checks.push_back(
            check_le("T6 loop invariants", static_cast<double>(trace.invariant_violations), 0.0));
        out.checks.push_back(check_le("T6 separation calls", static_cast<double>(trace.stats.so_calls),
                                      bound_t6_so_calls(geo.r, R, s.G, s.zeta, s.rbar, Td)));
        out.checks.push_back(check_le("T6 estimate norm / (delta' G)", trace.max_estimate_ratio, 1.0 + 1e-9));
        break;
      case Theorem::t9:
        out.checks.push_back(check_le("T9 regret", out.headline_regret(), bound_t9_regret(s.G, R, s.zeta, Td)));
        out.checks.push_back(
            check_le("T9 LOO calls", static_cast<double>(trace.stats.loo_calls), bound_t9_loo_calls(Td)));
        out.checks.push_back(check_le("block gap / 3 eps", trace.max_block_gap_ratio, 1.0));
        break;
      case Theorem::t10:
        out.checks.push_back(
            check_le("T10 regret", out.static_regret, bound_t10_regret(s.G, R, c.alpha, s.zeta, Td)));
        out.checks.push_back(check_le("T10 LOO calls", static_cast<double>(trace.stats.loo_calls),
                                      bound_t10_loo_calls(s.zeta, Td)));
        out.checks.push_back(check_le("block gap / 3 eps", trace.max_block_gap_ratio, 1.0));
        break;
    }
  }
  if (c.keep_traces) {
    out.trace = std::move(trace);
  }
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("GEOFREE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) {
        return n;
      }
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Report run_experiment(const ExperimentConfig& c, int threads) {
  if (c.horizons.empty() || c.seeds.empty()) {
    throw std::invalid_argument("experiment needs at least one horizon and one seed");
  }
  struct Cell {
    long T;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (long T : c.horizons) {
    for (std::uint64_t seed : c.seeds) {
      cells.push_back({T, seed});
    }
  }
  Report report;
  report.config = c;
  report.runs.resize(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        report.runs[i] = run_single(c, cells[i].T, cells[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) {
    pool.emplace_back(worker);
  }
  worker();
  for (std::thread& th : pool) {
    th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  const Theorem thm = theorem_for(c);
  std::vector<double> xs;
  std::vector<double> ys;
  for (long T : c.horizons) {
    HorizonSummary h;
    h.T = T;
    std::vector<double> vals;
    for (const RunResult& r : report.runs) {
      if (r.T == T) {
        vals.push_back(r.headline_regret());
      }
    }
    h.runs = static_cast<int>(vals.size());
    h.mean_regret = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    if (vals.size() > 1) {
      double ss = 0.0;
      for (double v : vals) {
        ss += (v - h.mean_regret) * (v - h.mean_regret);
      }
      h.stderr_regret = std::sqrt(ss / static_cast<double>(vals.size() - 1) / static_cast<double>(vals.size()));
    }
    report.summary.push_back(h);
    xs.push_back(static_cast<double>(T));
    ys.push_back(h.mean_regret);
  }
  const bool positive = std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; });
  if (xs.size() >= 2 && positive) {
    report.slope = fit_loglog_slope(xs, ys);
  }
  if (c.check_bounds && xs.size() >= 4) {
    if (const auto band = slope_band(thm)) {
      report.slope_band = band;
      const double v = report.slope.value_or(std::numeric_limits<double>::quiet_NaN());
      report.aggregate_checks.push_back(
          {std::string(to_string(thm)) + " regret slope", v, band->second, v >= band->first && v <= band->second});
    }
  }
  return report;
}

bool Report::all_pass() const {
  for (const RunResult& r : runs) {
    for (const BoundCheck& b : r.checks) {
      if (!b.pass) return false;
    }
  }
  for (const BoundCheck& b : aggregate_checks) {
    if (!b.pass) return false;
  }
  return true;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"algorithm", to_string(c.algorithm)},
          {"manifold", {{"kind", c.manifold.kind}, {"n", c.manifold.n}, {"kappa", c.manifold.kappa}}},
          {"set",
           {{"kind", c.set.kind},
            {"radius", c.set.radius},
            {"inner", c.set.inner},
            {"offset", c.set.offset},
            {"outer_radius", c.set.outer_radius}}},
          {"environment",
           {{"losses", to_string(c.environment.family)},
            {"weight", c.environment.weight},
            {"adversary", to_string(c.environment.adversary)},
            {"period", c.environment.period}}},
          {"alpha", c.alpha},
          {"horizons", c.horizons},
          {"seeds", c.seeds},
          {"regret", to_string(c.regret)},
          {"check_bounds", c.check_bounds},
          {"loo", {{"grid", c.loo.grid}, {"restarts", c.loo.restarts}}},
          {"comparator",
           {{"iters", c.comparator.iters}, {"restarts", c.comparator.restarts}, {"step_tol", c.comparator.step_tol}}}};
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["library"] = {{"name", "geofree"}, {"version", kLibraryVersion}};
  j["metadata"] = {{"experiment_design", "synthetic benchmark defined by this library; no reference measurements exist"},
                   {"rng", "mt19937_64 substreams 'learner' and 'environment' derived from each seed"}};
  j["config"] = geofree::to_json(config);
  nlohmann::json runs_json = nlohmann::json::array();
  for (const RunResult& r : runs) {
    nlohmann::json checks = nlohmann::json::array();
    for (const BoundCheck& b : r.checks) {
      checks.push_back(json_of(b));
    }
    nlohmann::json rj = {{"T", r.T},
                         {"T_padded", r.T_padded},
                         {"seed", r.seed},
                         {"schedule", json_of(r.schedule)},
                         {"static_regret", r.static_regret},
                         {"worst_interval", {r.worst_interval.s, r.worst_interval.e}},
                         {"comparator_residual", r.comparator_residual},
                         {"oracle_calls", json_of(r.stats)},
                         {"infeasible_plays", r.infeasible_plays},
                         {"invariant_violations", r.invariant_violations},
                         {"projections_over_bound", r.projections_over_bound},
                         {"max_estimate_ratio", r.max_estimate_ratio},
                         {"max_block_gap_ratio", r.max_block_gap_ratio},
                         {"checks", checks}};
    rj["adaptive_regret"] = r.adaptive_regret ? nlohmann::json(*r.adaptive_regret) : nlohmann::json(nullptr);
    runs_json.push_back(rj);
  }
  j["runs"] = runs_json;
  nlohmann::json summary = nlohmann::json::array();
  for (const HorizonSummary& h : this->summary) {
    summary.push_back({{"T", h.T}, {"runs", h.runs}, {"mean_regret", h.mean_regret}, {"stderr", h.stderr_regret}});
  }
  j["summary"] = summary;
  j["slope"] = slope ? nlohmann::json(*slope) : nlohmann::json(nullptr);
  j["slope_band"] = slope_band ? nlohmann::json({slope_band->first, slope_band->second}) : nlohmann::json(nullptr);
  nlohmann::json agg = nlohmann::json::array();
  for (const BoundCheck& b : aggregate_checks) {
    agg.push_back(json_of(b));
  }
  j["aggregate_checks"] = agg;
  j["all_pass"] = all_pass();
  return j;
}

}  // namespace geofree
