#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace geofree;
using namespace geofree::cli;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "geofree");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = main_with_args(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("geofree_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in, "test");
}

}  // namespace

TEST(KeyValueParsing, CommentsAndBlanks) {
  const KeyValues kv = parse("# header\n\nalgorithm = so-full  # trailing\n  horizons=64, 128\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("algorithm"), "so-full");
  EXPECT_EQ(kv.at("horizons"), "64, 128");
}

TEST(KeyValueParsing, RejectsMalformedLines) {
  EXPECT_THROW(parse("algorithm so-full\n"), ConfigError);
  EXPECT_THROW(parse("seeds=1\nseeds=2\n"), ConfigError);
  EXPECT_THROW(parse("=3\n"), ConfigError);
  EXPECT_THROW(read_config_file("/nonexistent/geofree.cfg"), ConfigError);
}

TEST(RunConfigResolution, DefaultsAndOverrides) {
  const RunConfig d = resolve_run_config({});
  EXPECT_EQ(d.experiment.algorithm, AlgorithmId::so_full);
  EXPECT_TRUE(d.write_csv);

  const RunConfig c = resolve_run_config(parse(
      "algorithm=so-bandit-2\nhorizons=128,256\nseeds=3,4,5\nmanifold.kind=hyperbolic\nmanifold.n=3\n"
      "manifold.kappa=-0.5\nset.kind=ball\nset.radius=0.8\nenvironment.losses=dist\noutput.csv=false\nthreads=2\n"));
  EXPECT_EQ(c.experiment.algorithm, AlgorithmId::so_bandit_two);
  EXPECT_EQ(c.experiment.horizons, (std::vector<long>{128, 256}));
  EXPECT_EQ(c.experiment.seeds, (std::vector<std::uint64_t>{3, 4, 5}));
  EXPECT_EQ(c.experiment.manifold.n, 3);
  EXPECT_DOUBLE_EQ(c.experiment.manifold.kappa, -0.5);
  EXPECT_EQ(c.experiment.set.kind, "ball");
  EXPECT_DOUBLE_EQ(c.experiment.set.radius, 0.8);
  EXPECT_EQ(c.experiment.environment.family, LossFamily::dist);
  EXPECT_FALSE(c.write_csv);
  EXPECT_EQ(c.threads, 2);
}

TEST(RunConfigResolution, RejectsBadValues) {
  EXPECT_THROW(resolve_run_config({{"no.such.key", "1"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"algorithm", "sgd"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"manifold.kappa", "0.5"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"horizons", "0"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"horizons", "12x"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"seeds", "-1"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"check_bounds", "maybe"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"set.radius", "nan"}}), ConfigError);
  EXPECT_THROW(resolve_run_config({{"algorithm", "loo-block"}, {"alpha", "1"}, {"horizons", "5"}}), ConfigError);
  for (const std::string& k : known_keys()) EXPECT_FALSE(k.empty());
}

TEST(CommandLine, ExitCodes) {
  EXPECT_EQ(run_cli({}), kConfigError);
  EXPECT_EQ(run_cli({"bogus"}), kConfigError);
  EXPECT_EQ(run_cli({"--help"}), kOk);
  EXPECT_EQ(run_cli({"run", "--algo", "sgd"}), kConfigError);
  EXPECT_EQ(run_cli({"run", "--kappa", "1"}), kConfigError);
  EXPECT_EQ(run_cli({"run", "-D", "nonsense"}), kConfigError);
  EXPECT_EQ(run_cli({"run", "--config", "/nonexistent/geofree.cfg"}), kConfigError);
  EXPECT_EQ(run_cli({"counterexamples", "nothing"}), kConfigError);
  EXPECT_EQ(run_cli({"verify-geometry", "--manifold", "sphere"}), kConfigError);
}

TEST(CommandLine, CounterexamplesReportHonestly) {
  std::string out;
  EXPECT_EQ(run_cli({"counterexamples", "midpoint"}, &out), kOk);
  EXPECT_NE(out.find("PASS"), std::string::npos);
  // The recomputed shrink gap differs from the printed reference, so this command fails.
  EXPECT_EQ(run_cli({"counterexamples", "shrink"}, &out), kCheckFailed);
  EXPECT_NE(out.find("0.01924"), std::string::npos);
  EXPECT_NE(out.find("FAIL"), std::string::npos);
}

TEST(CommandLine, VerifyGeometryPasses) {
  std::string out;
  EXPECT_EQ(run_cli({"verify-geometry", "--manifold", "h2", "--trials", "200"}, &out), kOk);
  EXPECT_EQ(run_cli({"verify-geometry", "--manifold", "halfplane", "--trials", "200"}, &out), kOk);
  EXPECT_EQ(out.find("FAIL"), std::string::npos);
}

TEST(GeometrySuites, AllSuitesPassOnHyperbolicSpace) {
  const std::vector<SuiteResult> r = run_geometry_suites(Space::hyperbolic(4, -0.7), {300, 2, 1.5});
  EXPECT_GE(r.size(), 5u);
  for (const SuiteResult& s : r) {
    EXPECT_TRUE(s.ok()) << s.name << ' ' << s.max_residual;
    EXPECT_EQ(s.trials, 300);
  }
}

TEST(CommandLine, RunWritesCsvAndReport) {
  const fs::path dir = fresh_dir("run");
  std::string out;
  std::string err;
  const int code = run_cli({"run", "--algo", "so-full", "--T", "64", "--seed", "1,2", "--out-dir", dir.string(),
                            "--threads", "1"},
                           &out, &err);
  EXPECT_EQ(code, kOk) << err;
  EXPECT_NE(out.find("T4: PASS"), std::string::npos) << out;
  const fs::path csv = dir / "run_so-full_T64_seed1.csv";
  ASSERT_TRUE(fs::exists(csv));
  ASSERT_TRUE(fs::exists(dir / "run_so-full_T64_seed2.csv"));
  const std::vector<std::string> rows = lines_of(slurp(csv));
  ASSERT_EQ(rows.size(), 65u);
  EXPECT_EQ(rows[0], "t,played_coords,loss,cum_loss,interval_regret_max,so_calls,loo_calls,membership_calls");
  EXPECT_EQ(rows[1].substr(0, 2), "1,");
  EXPECT_EQ(std::count(rows[64].begin(), rows[64].end(), ','), 7);
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(j["runs"].size(), 2u);
  EXPECT_EQ(j["config"]["horizons"][0], 64);

  const std::string first = slurp(csv);
  const std::string first_json = slurp(dir / "report.json");
  EXPECT_EQ(run_cli({"run", "--algo", "so-full", "--T", "64", "--seed", "1,2", "--out-dir", dir.string(),
                     "--threads", "2"}),
            kOk);
  EXPECT_EQ(slurp(csv), first);
  EXPECT_EQ(slurp(dir / "report.json"), first_json);
  fs::remove_all(dir);
}

TEST(CommandLine, ConfigFileWithFlagOverride) {
  const fs::path dir = fresh_dir("cfg");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "exp.cfg");
    f << "algorithm = loo-block\nhorizons = 100\nseeds = 4\noutput.csv = true\n";
  }
  std::string out;
  std::string err;
  const int code = run_cli(
      {"run", "--config", (dir / "exp.cfg").string(), "--out-dir", (dir / "out").string(), "-D", "regret=static"},
      &out, &err);
  EXPECT_EQ(code, kOk) << err << out;
  const fs::path csv = dir / "out" / "run_loo-block_T100_seed4.csv";
  ASSERT_TRUE(fs::exists(csv));
  const std::vector<std::string> rows = lines_of(slurp(csv));
  // Rows cover the requested horizon even though the block learner pads it.
  EXPECT_EQ(rows.size(), 101u);
  // Static regret leaves the running interval maximum empty.
  EXPECT_NE(rows[1].find(",,"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Verdicts, FailingCheckListsConstants) {
  Report rep;
  RunResult r;
  r.T = 256;
  r.seed = 9;
  r.theorem = Theorem::t4;
  r.schedule = make_schedule(Theorem::t4, {-1.0, 1.0, 0.5}, 2.0, 4.5, 1.0, 256);
  r.checks.push_back({"T4 regret", 50.0, 40.0, false});
  r.checks.push_back({"feasible plays", 0.0, 0.0, true});
  rep.runs.push_back(r);
  const std::vector<std::string> lines = verdict_lines(rep);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].rfind("T4: FAIL (runs: 1)", 0), 0u) << lines[0];
  EXPECT_NE(lines[0].find("T4 regret 50 > 40 at T=256 seed=9"), std::string::npos) << lines[0];
  EXPECT_NE(lines[0].find("zeta=2.075"), std::string::npos) << lines[0];
  EXPECT_NE(lines[0].find("feasible plays 0 <= 0"), std::string::npos);
}
