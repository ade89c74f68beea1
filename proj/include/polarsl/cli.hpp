#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polarsl/hypotheses.hpp"
#include "polarsl/measures.hpp"
#include "polarsl/reduction.hpp"
#include "polarsl/solve.hpp"

namespace polarsl::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericError = 3,
  kHypothesesFail = 4,
};

// A named builtin with numeric arguments, e.g. `gaussian(1.5)`, or a table
// file, e.g. `table(b.txt)`.
struct FunctionSpec {
  std::string name;
  std::vector<double> params;
  std::string path;
};

FunctionSpec parse_function_spec(const std::string& text);

struct RunConfig {
  // [measure]
  std::string measure_kind = "euclidean";  // builtin kind or "profile"
  int dim = 2;
  bool normalize = false;
  std::string profile_path;
  // [problem]
  double r0 = 1.0;
  FunctionSpec b{"constant", {1.0}, {}};
  FunctionSpec f{"power", {0.5}, {}};
  // [solver]
  std::string method = "collocation";  // green | shooting | shooting_bvp | collocation
  double L = 4.0;
  int n = 401;
  double bc = 0.1;
  double d = 1.0;
  double slope = 0.0;
  double cv_tol = 1e-10;
  double newton_tol = 1e-10;
  // [reduce]
  double reduce_r_min = 0.5;
  double reduce_r_max = 2.0;
  int reduce_points = 16;
  // [verify]
  HypothesisConfig verify{};
};

// Parses a sectioned key = value file. Relative file paths inside it are
// resolved against the directory of `path`. Throws ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in, const std::string& base_dir = ".");

// Objects built from a validated configuration.
struct Pipeline {
  GeodesicMeasure measure;
  ChangeOfVariables cv;
  ScalarMap b;
  Nonlinearity f;
  ReducedProblem rp;
  TruncatedDomain domain;
};

Pipeline build_pipeline(const RunConfig& cfg);

// Text for `--help`, including every configuration key.
std::string config_help();

// Entry point: `polarsl <reduce|solve|verify|residual|measures> [options]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polarsl::cli
