#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "polarsl/reduction.hpp"

namespace polarsl {

// Numerical checks can only be consistent with a limit statement at the
// scales tested; `holds` means exactly that.
enum class Verdict { holds, fails, inconclusive };

std::string to_string(Verdict v);

struct Evidence {
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string note;
};

struct CheckResult {
  Verdict verdict = Verdict::inconclusive;
  Evidence evidence;
};

// All thresholds used by the checks.
struct HypothesisConfig {
  // Unboundedness of J.
  int endpoint_samples = 60;          // geometric approach steps per endpoint
  double divergence_threshold = 25.0; // |J| beyond this with non-vanishing gaps
  double divergence_gap = 1e-3;       // smallest gap still counted as non-vanishing
  double convergence_gap = 1e-10;     // successive gap below this => convergent

  // Linear problem z'' + q = 0.
  std::vector<double> L_list{4.0, 8.0, 16.0};
  int linear_nodes = 401;
  double sup_stability = 1e-3;        // relative change of sup norm, last two L
  double boundary_zone = 0.1;         // outer fraction of [-L, L]
  double boundary_ratio = 0.5;        // zone max must be below ratio * sup
  double holder_exponent = 0.5;

  // Limits of f(q)/q.
  int tail_samples = 10;              // q = 10^{-k} and 10^{k}, k = 1..tail_samples
  double small_ratio_threshold = 1e3; // rho must exceed this at the small end...
  double large_ratio_threshold = 1e-3;// ...and drop below this at the large end,
  double slope_holds = 0.05;          // or keep a log-log slope <= -slope_holds
  double slope_stall = 1e-3;          // slope >= -slope_stall at the tail => fails
};

CheckResult check_domain_unbounded(const ChangeOfVariables& cv,
                                   const HypothesisConfig& cfg = {});
CheckResult check_linear_positive(const ReducedProblem& rp, const HypothesisConfig& cfg = {});
CheckResult check_nonlinearity_limits(const Nonlinearity& f, const HypothesisConfig& cfg = {});

struct HypothesisReport {
  CheckResult h1;
  CheckResult h2;
  CheckResult h3;
  Verdict overall = Verdict::inconclusive;
};

// holds iff all three hold; fails if any fails; inconclusive otherwise.
Verdict aggregate(Verdict a, Verdict b, Verdict c);

HypothesisReport verify_all(const ReducedProblem& rp, const HypothesisConfig& cfg = {});

// `key: value` blocks, one section per hypothesis.
void write_report(std::ostream& out, const HypothesisReport& report);
void write_evidence_csv(std::ostream& out, const CheckResult& check);

}  // namespace polarsl
