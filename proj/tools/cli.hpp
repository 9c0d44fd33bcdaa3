#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geofree/bench.hpp"

namespace geofree::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

// key=value lines; '#' starts a comment; blank lines ignored; a repeated key is an error.
KeyValues parse_key_values(std::istream& in, const std::string& source = "config");
KeyValues read_config_file(const std::string& path);

struct RunConfig {
  ExperimentConfig experiment;
  std::string out_dir = "geofree_out";
  // Report path; relative paths resolve against out_dir.
  std::string json = "report.json";
  bool write_csv = true;
  int threads = 0;  // 0: GEOFREE_THREADS or hardware concurrency
};

// Every accepted key, in a stable order.
const std::vector<std::string>& known_keys();

// Applies validated values on top of the defaults. Throws ConfigError on unknown keys,
// unparsable values and out-of-range numbers.
RunConfig resolve_run_config(const KeyValues& kv);

// CSV for one run; needs the trace. Rows cover rounds 1..T.
void write_run_csv(std::ostream& out, const RunResult& r);
std::string csv_file_name(const ExperimentConfig& c, const RunResult& r);

// One line per theorem: the verdict plus failing checks with the constants involved.
std::vector<std::string> verdict_lines(const Report& report);

struct SuiteResult {
  std::string name;
  long trials = 0;
  long passed = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool ok() const { return passed == trials; }
};

struct GeometrySuiteOptions {
  long trials = 1000;
  std::uint64_t seed = 1;
  // Pairs are drawn with dist(x, y) <= 2 * spread.
  double spread = 2.0;
};

std::vector<SuiteResult> run_geometry_suites(const Space& space, const GeometrySuiteOptions& opts);

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify_geometry(const Space& space, const GeometrySuiteOptions& opts, std::ostream& out);
int cmd_counterexamples(const std::vector<std::string>& which, std::ostream& out, std::ostream& err);

// Entry point shared by the executable and the tests.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geofree::cli
