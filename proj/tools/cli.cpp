#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "geofree/constants.hpp"
#include "geofree/counterexamples.hpp"

namespace geofree::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (v.empty() || v[0] == '-') {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

template <class F>
auto wrap_parse(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt4(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_key_values(in, path);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "algorithm",         "manifold.kind",       "manifold.n",          "manifold.kappa",
      "set.kind",          "set.radius",          "set.inner",           "set.offset",
      "set.outer_radius",  "environment.losses",  "environment.weight",  "environment.adversary",
      "environment.period", "alpha",              "horizons",            "seeds",
      "regret",            "check_bounds",        "loo.grid",            "loo.restarts",
      "comparator.iters",  "comparator.restarts", "output.dir",          "output.json",
      "output.csv",        "threads"};
  return keys;
}

RunConfig resolve_run_config(const KeyValues& kv) {
  const auto& keys = known_keys();
  for (const auto& [k, v] : kv) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ConfigError("unknown key '" + k + "'");
    }
  }
  RunConfig rc;
  ExperimentConfig& c = rc.experiment;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("algorithm")) c.algorithm = wrap_parse("algorithm", [&] { return parse_algorithm(*v); });
  if (auto v = get("manifold.kind")) {
    require(*v == "euclidean" || *v == "hyperbolic" || *v == "halfplane", "manifold.kind",
            "expected euclidean, hyperbolic or halfplane");
    c.manifold.kind = *v;
  }
  if (auto v = get("manifold.n")) {
    const long long n = to_integer("manifold.n", *v);
    require(n >= 1 && n <= 64, "manifold.n", "must lie in [1, 64]");
    c.manifold.n = static_cast<int>(n);
  }
  if (auto v = get("manifold.kappa")) c.manifold.kappa = to_double("manifold.kappa", *v);
  if (c.manifold.kind == "hyperbolic") {
    require(c.manifold.kappa < 0.0, "manifold.kappa", "hyperbolic space needs kappa < 0");
  }
  if (c.manifold.kind == "halfplane") {
    require(c.manifold.n == 2, "manifold.n", "the half-plane chart is two-dimensional");
    require(c.manifold.kappa == -1.0, "manifold.kappa", "the half-plane chart has kappa = -1");
  }
  if (c.manifold.kind == "euclidean") c.manifold.kappa = 0.0;

  if (auto v = get("set.kind")) {
    require(*v == "ball" || *v == "two_balls", "set.kind", "expected ball or two_balls");
    c.set.kind = *v;
  }
  if (auto v = get("set.radius")) c.set.radius = to_double("set.radius", *v);
  if (auto v = get("set.inner")) c.set.inner = to_double("set.inner", *v);
  if (auto v = get("set.offset")) c.set.offset = to_double("set.offset", *v);
  if (auto v = get("set.outer_radius")) c.set.outer_radius = to_double("set.outer_radius", *v);
  require(c.set.radius > 0.0, "set.radius", "must be positive");
  require(c.set.inner > 0.0, "set.inner", "must be positive");
  require(c.set.offset >= 0.0, "set.offset", "must be non-negative");
  require(c.set.outer_radius > 0.0, "set.outer_radius", "must be positive");

  if (auto v = get("environment.losses"))
    c.environment.family = wrap_parse("environment.losses", [&] { return parse_loss_family(*v); });
  if (auto v = get("environment.weight")) c.environment.weight = to_double("environment.weight", *v);
  require(c.environment.weight > 0.0, "environment.weight", "must be positive");
  if (auto v = get("environment.adversary"))
    c.environment.adversary = wrap_parse("environment.adversary", [&] { return parse_adversary(*v); });
  if (auto v = get("environment.period")) {
    const long long p = to_integer("environment.period", *v);
    require(p >= 0, "environment.period", "must be non-negative");
    c.environment.period = static_cast<long>(p);
  }
  if (auto v = get("alpha")) c.alpha = to_double("alpha", *v);
  require(c.alpha >= 0.0, "alpha", "must be non-negative");

  if (auto v = get("horizons")) {
    c.horizons.clear();
    for (const std::string& s : split_list(*v)) {
      const long long T = to_integer("horizons", s);
      require(T >= 1 && T <= 10'000'000, "horizons", "each horizon must lie in [1, 1e7]");
      c.horizons.push_back(static_cast<long>(T));
    }
    require(!c.horizons.empty(), "horizons", "at least one horizon is required");
  }
  if (auto v = get("seeds")) {
    c.seeds.clear();
    for (const std::string& s : split_list(*v)) c.seeds.push_back(to_seed("seeds", s));
    require(!c.seeds.empty(), "seeds", "at least one seed is required");
  }
  if (auto v = get("regret")) c.regret = wrap_parse("regret", [&] { return parse_regret_measure(*v); });
  if (auto v = get("check_bounds")) c.check_bounds = to_bool("check_bounds", *v);
  if (auto v = get("loo.grid")) {
    const long long g = to_integer("loo.grid", *v);
    require(g >= 8 && g <= 100000, "loo.grid", "must lie in [8, 100000]");
    c.loo.grid = static_cast<int>(g);
  }
  if (auto v = get("loo.restarts")) {
    const long long r = to_integer("loo.restarts", *v);
    require(r >= 1 && r <= 1000, "loo.restarts", "must lie in [1, 1000]");
    c.loo.restarts = static_cast<int>(r);
  }
  if (auto v = get("comparator.iters")) {
    const long long r = to_integer("comparator.iters", *v);
    require(r >= 1 && r <= 1000000, "comparator.iters", "must lie in [1, 1e6]");
    c.comparator.iters = static_cast<int>(r);
  }
  if (auto v = get("comparator.restarts")) {
    const long long r = to_integer("comparator.restarts", *v);
    require(r >= 1 && r <= 1000, "comparator.restarts", "must lie in [1, 1000]");
    c.comparator.restarts = static_cast<int>(r);
  }
  if (auto v = get("output.dir")) {
    require(!v->empty(), "output.dir", "must not be empty");
    rc.out_dir = *v;
  }
  if (auto v = get("output.json")) {
    require(!v->empty(), "output.json", "must not be empty");
    rc.json = *v;
  }
  if (auto v = get("output.csv")) rc.write_csv = to_bool("output.csv", *v);
  if (auto v = get("threads")) {
    const long long t = to_integer("threads", *v);
    require(t >= 0 && t <= 1024, "threads", "must lie in [0, 1024]");
    rc.threads = static_cast<int>(t);
  }

  // Geometry and schedules validate the remaining cross-field constraints.
  try {
    const Space space = make_space(c.manifold);
    const GscConvexSet K = make_set(c.set, space);
    const LossConstants lc = loss_constants(c.environment, K.geometry().R);
    for (long T : c.horizons) {
      make_schedule(theorem_for(c), K.geometry(), lc.G, lc.M, c.alpha, T);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

std::string csv_file_name(const ExperimentConfig& c, const RunResult& r) {
  return std::string("run_") + to_string(c.algorithm) + "_T" + std::to_string(r.T) + "_seed" +
         std::to_string(r.seed) + ".csv";
}

void write_run_csv(std::ostream& out, const RunResult& r) {
  if (!r.trace) throw std::logic_error("CSV output needs the round trace");
  const RegretTrace& tr = *r.trace;
  out << "t,played_coords,loss,cum_loss,interval_regret_max,so_calls,loo_calls,membership_calls\n";
  for (long t = 1; t <= r.T; ++t) {
    const RoundRecord& rec = tr.rounds[static_cast<std::size_t>(t - 1)];
    out << t << ',';
    const Vec& x = rec.played.front().coords;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (i > 0) out << ';';
      out << fmt17(x[i]);
    }
    out << ',' << fmt17(rec.loss) << ',' << fmt17(tr.cum_loss[static_cast<std::size_t>(t - 1)]) << ',';
    if (!r.running_max.empty()) out << fmt17(r.running_max[static_cast<std::size_t>(t - 1)]);
    out << ',' << rec.calls.so_calls << ',' << rec.calls.loo_calls << ',' << rec.calls.membership_calls << '\n';
  }
}

std::vector<std::string> verdict_lines(const Report& report) {
  struct Worst {
    std::string name;
    double observed = 0.0;
    double bound = 0.0;
    double ratio = -1.0;
    bool pass = true;
    const RunResult* run = nullptr;
  };
  std::vector<std::string> lines;
  std::vector<Theorem> theorems;
  for (const RunResult& r : report.runs) {
    if (std::find(theorems.begin(), theorems.end(), r.theorem) == theorems.end()) theorems.push_back(r.theorem);
  }
  for (Theorem thm : theorems) {
    std::vector<Worst> worst;
    for (const RunResult& r : report.runs) {
      if (r.theorem != thm) continue;
      for (const BoundCheck& b : r.checks) {
        auto it = std::find_if(worst.begin(), worst.end(), [&](const Worst& w) { return w.name == b.name; });
        if (it == worst.end()) {
          worst.push_back({b.name});
          it = std::prev(worst.end());
        }
        const double ratio = b.bound > 0.0 ? b.observed / b.bound : (b.observed > 0.0 ? INFINITY : 0.0);
        const bool replace = (it->pass && !b.pass) || (it->pass == b.pass && ratio > it->ratio);
        if (replace) *it = {b.name, b.observed, b.bound, ratio, b.pass, &r};
      }
    }
    bool pass = true;
    for (const Worst& w : worst) pass = pass && w.pass;
    for (const BoundCheck& b : report.aggregate_checks) pass = pass && b.pass;
    std::ostringstream line;
    line << to_string(thm) << ": " << (pass ? "PASS" : "FAIL") << " (runs: " << report.runs.size() << ")";
    if (report.runs.empty() || worst.empty()) line << " no bound checks";
    for (const Worst& w : worst) {
      line << "; " << w.name << ' ' << fmt4(w.observed) << (w.pass ? " <= " : " > ") << fmt4(w.bound);
      if (!w.pass && w.run) {
        const Schedule& s = w.run->schedule;
        line << " at T=" << w.run->T << " seed=" << w.run->seed << " [G=" << fmt4(s.G)
             << " R=" << fmt4(s.geometry.R) << " r=" << fmt4(s.geometry.r) << " kappa=" << fmt4(s.geometry.kappa)
             << " zeta=" << fmt4(s.zeta) << " rbar=" << fmt4(s.rbar) << " eta=" << fmt4(s.eta) << ']';
      }
    }
    for (const BoundCheck& b : report.aggregate_checks) {
      line << "; " << b.name << ' ' << fmt4(b.observed) << (b.pass ? " ok" : " out of range");
    }
    lines.push_back(line.str());
  }
  return lines;
}

std::vector<SuiteResult> run_geometry_suites(const Space& space, const GeometrySuiteOptions& opts) {
  Rng rng = make_stream(opts.seed, "sampler");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = space.dim;
  auto random_point = [&] {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    const double len = opts.spread * std::pow(unif(rng), 1.0 / n);
    return point_from_origin(space, (len / std::max(v.norm(), 1e-300)) * v);
  };
  auto random_tangent = [&](const Point& x) { return (1.0 + gauss(rng)) * random_unit_tangent(x, rng); };

  SuiteResult round_trip{"exp/log round trip", 0, 0, 0.0, 1e-8};
  SuiteResult speed{"constant speed", 0, 0, 0.0, 1e-9};
  SuiteResult cos_upper{"cos1 upper comparison", 0, 0, 0.0, 1e-8};
  SuiteResult cos_lower{"cos2 lower comparison", 0, 0, 0.0, 1e-8};
  SuiteResult isometry{"transport isometry", 0, 0, 0.0, 1e-9};
  SuiteResult grad{"squared-distance gradient vs finite difference", 0, 0, 0.0, 1e-5};
  SuiteResult chart{"half-plane chart isometry", 0, 0, 0.0, 1e-9};
  const bool has_chart = space.chart == Chart::halfplane || (space.chart == Chart::hyperboloid && n == 2 &&
                                                             space.curvature == -1.0);
  auto record = [](SuiteResult& s, double residual) {
    ++s.trials;
    if (residual <= s.tolerance) ++s.passed;
    s.max_residual = std::max(s.max_residual, residual);
  };
  const double kappa = space.curvature;

  for (long k = 0; k < opts.trials; ++k) {
    const Point x = random_point();
    const Point y = random_point();
    const Point z = random_point();
    const Tangent xy = log(x, y);
    record(round_trip, dist(exp(x, xy), y));
    const double t = unif(rng);
    record(speed, std::abs(dist(x, exp(x, t * xy)) - t * norm(xy)));

    const Tangent xz = log(x, z);
    const double b = norm(xy);
    const double c = norm(xz);
    const double a = dist(y, z);
    const double two_bc_cos = 2.0 * inner(xy, xz);
    record(cos_upper, std::max(0.0, a * a - (zeta(kappa, c) * b * b + c * c - two_bc_cos)));
    record(cos_lower, std::max(0.0, (b * b + c * c - two_bc_cos) - a * a));

    const Tangent u = random_tangent(x);
    const Tangent v = random_tangent(x);
    const Tangent tu = transport(x, y, u);
    const Tangent tv = transport(x, y, v);
    record(isometry, std::max(std::abs(inner(tu, tv) - inner(u, v)), std::abs(norm(tu) - norm(u))));

    const double h = 1e-5;
    const Tangent w = random_unit_tangent(x, rng);
    auto f = [&](const Point& q) { return 0.5 * std::pow(dist(q, z), 2); };
    const double fd = (f(exp(x, h * w)) - f(exp(x, -h * w))) / (2.0 * h);
    record(grad, std::abs(fd - inner(-1.0 * xz, w)));

    if (has_chart) {
      double residual = 0.0;
      if (space.chart == Chart::halfplane) {
        residual = std::abs(dist(halfplane_to_hyperboloid(x), halfplane_to_hyperboloid(y)) - dist(x, y));
      } else {
        residual = std::abs(dist(hyperboloid_to_halfplane(x), hyperboloid_to_halfplane(y)) - dist(x, y));
      }
      record(chart, residual);
    }
  }
  std::vector<SuiteResult> out{round_trip, speed, cos_upper, cos_lower, isometry, grad};
  if (has_chart) out.push_back(chart);
  return out;
}

int cmd_verify_geometry(const Space& space, const GeometrySuiteOptions& opts, std::ostream& out) {
  out << "geometry: " << to_string(space) << ", " << opts.trials << " trials, seed " << opts.seed << '\n';
  bool ok = true;
  for (const SuiteResult& s : run_geometry_suites(space, opts)) {
    out << "  " << std::left << std::setw(48) << s.name << s.passed << '/' << s.trials
        << "  max residual " << fmt4(s.max_residual) << " (tol " << fmt4(s.tolerance) << ")"
        << (s.ok() ? "" : "  BREACH") << '\n';
    ok = ok && s.ok();
  }
  out << (ok ? "all invariants hold" : "invariant breach") << '\n';
  return ok ? kOk : kCheckFailed;
}

int cmd_counterexamples(const std::vector<std::string>& which, std::ostream& out, std::ostream& err) {
  std::vector<std::string> items = which;
  if (items.empty()) items = {"shrink", "minkowski", "midpoint"};
  bool ok = true;
  auto compare = [&](const std::string& name, double computed, double reference) {
    const bool pass = std::abs(computed - reference) <= kReferenceTolerance && (computed > 0.0) == (reference > 0.0);
    out << name << ": " << std::setprecision(10) << computed << " vs reference " << reference << "...: "
        << (pass ? "PASS" : "FAIL") << '\n';
    ok = ok && pass;
  };
  for (const std::string& w : items) {
    if (w == "shrink") {
      compare("shrink", shrink_gap(0.1), kReferenceShrinkGap);
    } else if (w == "minkowski") {
      compare("minkowski", minkowski_convexity_gap(), kReferenceMinkowskiGap);
    } else if (w == "midpoint") {
      const Vec closed = halfplane_midpoint(1.0, std::sqrt(2.0));
      const Point hp1 = make_point(Space::halfplane(), (Vec(2) << -1.0, std::sqrt(2.0)).finished());
      const Point hp2 = make_point(Space::halfplane(), (Vec(2) << 1.0, std::sqrt(2.0)).finished());
      const Vec generic = geodesic(hp1, hp2, 0.5).coords;
      const Vec expected = (Vec(2) << 0.0, std::sqrt(3.0)).finished();
      const double residual = std::max((closed - expected).cwiseAbs().maxCoeff(),
                                       (generic - expected).cwiseAbs().maxCoeff());
      const bool pass = residual <= 1e-12;
      out << "midpoint: (" << std::setprecision(17) << closed[0] << ", " << closed[1] << ") vs reference (0, sqrt 3)"
          << " residual " << std::setprecision(3) << residual << ": " << (pass ? "PASS" : "FAIL") << '\n';
      ok = ok && pass;
    } else {
      err << "unknown counterexample '" << w << "' (expected shrink, minkowski or midpoint)\n";
      return kConfigError;
    }
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  ExperimentConfig c = cfg.experiment;
  c.keep_traces = cfg.write_csv;
  const int threads = cfg.threads > 0 ? cfg.threads : default_thread_count();
  Report report;
  try {
    report = run_experiment(c, threads);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kCheckFailed;
  }
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    err << "cannot create output directory '" << cfg.out_dir << "': " << ec.message() << '\n';
    return kConfigError;
  }
  if (cfg.write_csv) {
    for (const RunResult& r : report.runs) {
      const fs::path p = fs::path(cfg.out_dir) / csv_file_name(c, r);
      std::ofstream f(p);
      if (!f) {
        err << "cannot write " << p.string() << '\n';
        return kConfigError;
      }
      write_run_csv(f, r);
    }
  }
  const fs::path json_path = fs::path(cfg.json).is_absolute() ? fs::path(cfg.json) : fs::path(cfg.out_dir) / cfg.json;
  {
    std::ofstream f(json_path);
    if (!f) {
      err << "cannot write " << json_path.string() << '\n';
      return kConfigError;
    }
    f << report.to_json().dump(2) << '\n';
  }
  for (const HorizonSummary& h : report.summary) {
    out << "T=" << h.T << "  runs " << h.runs << "  mean regret " << fmt4(h.mean_regret) << " +- "
        << fmt4(h.stderr_regret) << '\n';
  }
  if (c.check_bounds) {
    for (const std::string& l : verdict_lines(report)) out << l << '\n';
  }
  out << "report: " << json_path.string() << '\n';
  return !c.check_bounds || report.all_pass() ? kOk : kCheckFailed;
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"geodesically convex online learning without projections"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  CLI::App* run = app.add_subcommand("run", "run an online learner and check its bounds");
  std::string config_path;
  KeyValues flags;
  auto flag_value = [&](const std::string& opt, const std::string& key, const std::string& desc) {
    run->add_option_function<std::string>(opt, [&flags, key](const std::string& v) { flags[key] = v; }, desc);
  };
  run->add_option("--config", config_path, "key=value configuration file");
  flag_value("--algo", "algorithm", "so-full | so-bandit-1 | so-bandit-2 | loo-block");
  flag_value("--T", "horizons", "comma-separated horizons");
  flag_value("--seed", "seeds", "comma-separated seeds");
  flag_value("--losses", "environment.losses", "sq_dist | dist");
  flag_value("--adversary", "environment.adversary", "fixed | shifting | random");
  flag_value("--alpha", "alpha", "strong convexity for the block learner (> 0 selects its strongly convex schedule)");
  flag_value("--manifold", "manifold.kind", "euclidean | hyperbolic | halfplane");
  flag_value("--n", "manifold.n", "dimension");
  flag_value("--kappa", "manifold.kappa", "curvature");
  flag_value("--set", "set.kind", "ball | two_balls");
  flag_value("--regret", "regret", "auto | dyadic | static");
  flag_value("--out-dir", "output.dir", "directory for CSV and JSON output");
  flag_value("--json", "output.json", "report path");
  flag_value("--threads", "threads", "worker threads (0: GEOFREE_THREADS or all cores)");
  run->add_flag_callback("--no-bound-checks", [&flags] { flags["check_bounds"] = "false"; }, "skip bound checks");
  run->add_flag_callback("--no-csv", [&flags] { flags["output.csv"] = "false"; }, "skip per-run CSV files");
  std::vector<std::string> defines;
  run->add_option("-D,--define", defines, "extra key=value overrides");

  CLI::App* geo = app.add_subcommand("verify-geometry", "run the geometric invariant suites");
  std::string geo_manifold = "h2";
  int geo_n = 2;
  double geo_kappa = -1.0;
  GeometrySuiteOptions geo_opts;
  geo->add_option("--manifold", geo_manifold, "euclidean | h2 | hn | halfplane")
      ->check(CLI::IsMember({"euclidean", "h2", "hn", "halfplane"}));
  geo->add_option("--n", geo_n, "dimension for euclidean and hn")->check(CLI::Range(1, 64));
  geo->add_option("--kappa", geo_kappa, "curvature for h2 and hn")->check(CLI::Range(-1e6, -1e-12));
  geo->add_option("--trials", geo_opts.trials, "random trials per suite")->check(CLI::Range(1L, 10'000'000L));
  geo->add_option("--seed", geo_opts.seed, "seed");

  CLI::App* cex = app.add_subcommand("counterexamples", "recompute the half-plane counterexample values");
  std::vector<std::string> which;
  cex->add_option("which", which, "shrink | minkowski | midpoint (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (run->parsed()) {
    try {
      KeyValues kv = config_path.empty() ? KeyValues{} : read_config_file(config_path);
      for (const std::string& d : defines) {
        const auto eq = d.find('=');
        if (eq == std::string::npos) throw ConfigError("--define expects key=value, got '" + d + "'");
        flags[trim(d.substr(0, eq))] = trim(d.substr(eq + 1));
      }
      for (const auto& [k, v] : flags) kv[k] = v;
      return cmd_run(resolve_run_config(kv), out, err);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kConfigError;
    }
  }
  if (geo->parsed()) {
    Space space;
    if (geo_manifold == "euclidean") {
      space = Space::euclidean(geo_n);
    } else if (geo_manifold == "h2") {
      space = Space::hyperbolic(2, geo_kappa);
    } else if (geo_manifold == "hn") {
      space = Space::hyperbolic(geo_n, geo_kappa);
    } else {
      space = Space::halfplane();
    }
    return cmd_verify_geometry(space, geo_opts, out);
  }
  return cmd_counterexamples(which, out, err);
}

}  // namespace geofree::cli
