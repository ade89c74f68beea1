#include "polarsl/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "polarsl/csv.hpp"
#include "polarsl/error.hpp"
#include "polarsl/solve.hpp"

namespace polarsl {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict aggregate(Verdict a, Verdict b, Verdict c) {
  if (a == Verdict::holds && b == Verdict::holds && c == Verdict::holds) return Verdict::holds;
  if (a == Verdict::fails || b == Verdict::fails || c == Verdict::fails) return Verdict::fails;
  return Verdict::inconclusive;
}

namespace {

enum class EndBehaviour { divergent, convergent, unknown };

double verdict_code(EndBehaviour e) {
  switch (e) {
    case EndBehaviour::divergent: return 1.0;
    case EndBehaviour::convergent: return -1.0;
    case EndBehaviour::unknown: return 0.0;
  }
  return 0.0;
}

EndBehaviour probe_endpoint(const ChangeOfVariables& cv, const HypothesisConfig& cfg, int dir,
                            Evidence& ev, double& last_j) {
  const auto& m = cv.measure();
  const double r0 = cv.r0();
  const Endpoint end = dir > 0 ? m.hi : m.lo;
  const double scale = std::max(1.0, std::abs(r0));
  double prev = 0.0;
  last_j = 0.0;
  for (int k = 1; k <= cfg.endpoint_samples; ++k) {
    const double r = end.unbounded ? r0 + dir * scale * std::ldexp(1.0, k - 1)
                                   : end.value + (r0 - end.value) * std::ldexp(1.0, -k);
    double j = 0.0;
    try {
      j = cv.forward(r);
    } catch (const DomainError&) {
      break;
    } catch (const NumericError&) {
      break;
    }
    const double gap = std::abs(j - prev);
    ev.rows.push_back({static_cast<double>(dir), static_cast<double>(k), r, j, gap});
    prev = j;
    last_j = j;
    if (std::abs(j) > cfg.divergence_threshold && gap >= cfg.divergence_gap) {
      return EndBehaviour::divergent;
    }
    if (k > 1 && gap < cfg.convergence_gap) return EndBehaviour::convergent;
  }
  return EndBehaviour::unknown;
}

}  // namespace

CheckResult check_domain_unbounded(const ChangeOfVariables& cv, const HypothesisConfig& cfg) {
  CheckResult out;
  out.evidence.columns = {"side", "k", "r", "J", "gap"};
  double j_lo = 0.0, j_hi = 0.0;
  const EndBehaviour lo = probe_endpoint(cv, cfg, -1, out.evidence, j_lo);
  const EndBehaviour hi = probe_endpoint(cv, cfg, +1, out.evidence, j_hi);
  out.evidence.summary = {{"lower_behaviour", verdict_code(lo)},
                          {"lower_last_J", j_lo},
                          {"upper_behaviour", verdict_code(hi)},
                          {"upper_last_J", j_hi}};
  out.evidence.note = "behaviour codes: 1 divergent, -1 convergent, 0 undetermined";
  if (lo == EndBehaviour::divergent && hi == EndBehaviour::divergent) {
    out.verdict = Verdict::holds;
  } else if (lo == EndBehaviour::convergent || hi == EndBehaviour::convergent) {
    out.verdict = Verdict::fails;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

CheckResult check_linear_positive(const ReducedProblem& rp, const HypothesisConfig& cfg) {
  if (cfg.L_list.size() < 3) {
    throw DomainError("check_linear_positive: at least 3 truncation lengths required");
  }
  for (std::size_t i = 0; i < cfg.L_list.size(); ++i) {
    if (!(cfg.L_list[i] > 0.0) || (i > 0 && !(cfg.L_list[i] > cfg.L_list[i - 1]))) {
      throw DomainError("check_linear_positive: L_list must be positive and increasing");
    }
  }
  CheckResult out;
  out.evidence.columns = {"L", "min_interior", "sup", "boundary_zone_max", "z_at_base"};

  std::vector<double> sups;
  double last_zone = 0.0;
  bool positive = true;
  try {
    for (double L : cfg.L_list) {
      const TruncatedDomain dom{L, cfg.linear_nodes, 0.0};
      const SolutionProfile z = solve_linear(rp.q, dom);
      double min_interior = HUGE_VAL, zone = 0.0;
      for (std::size_t i = 1; i + 1 < z.grid.size(); ++i) {
        min_interior = std::min(min_interior, z.values[i]);
        if (std::abs(z.grid[i]) >= (1.0 - cfg.boundary_zone) * L) {
          zone = std::max(zone, std::abs(z.values[i]));
        }
      }
      const double base = z.values[z.grid.size() / 2];
      out.evidence.rows.push_back({L, min_interior, z.sup_norm(), zone, base});
      sups.push_back(z.sup_norm());
      last_zone = zone;
      positive = positive && min_interior > 0.0;
    }
  } catch (const std::exception& e) {
    out.verdict = Verdict::inconclusive;
    out.evidence.summary.push_back({"solved_truncations", static_cast<double>(sups.size())});
    out.evidence.note = std::string("linear solve failed: ") + e.what();
    return out;
  }

  // Positivity and a sampled Hoelder quotient of b on the largest window.
  double b_min = HUGE_VAL, holder = 0.0;
  bool b_checked = false;
  if (rp.b && rp.cv) {
    try {
      const double L = cfg.L_list.back();
      std::vector<double> r, bv;
      for (int i = 0; i <= 200; ++i) {
        const double s = -L + 2.0 * L * i / 200.0;
        r.push_back(rp.cv->inverse(s));
        bv.push_back(rp.b(r.back()));
        b_min = std::min(b_min, bv.back());
      }
      for (std::size_t i = 1; i < r.size(); ++i) {
        const double dr = std::abs(r[i] - r[i - 1]);
        if (dr > 0.0) {
          holder = std::max(holder, std::abs(bv[i] - bv[i - 1]) / std::pow(dr, cfg.holder_exponent));
        }
      }
      b_checked = true;
    } catch (const std::exception&) {
      b_checked = false;
    }
  }

  const double last = sups.back();
  const double prev = sups[sups.size() - 2];
  const double change = last > 0.0 ? std::abs(last - prev) / last : HUGE_VAL;
  out.evidence.summary = {{"all_positive", positive ? 1.0 : 0.0},
                          {"sup_relative_change", change},
                          {"boundary_zone_ratio", last > 0.0 ? last_zone / last : HUGE_VAL}};
  if (b_checked) {
    out.evidence.summary.push_back({"b_min", b_min});
    out.evidence.summary.push_back({"b_holder_quotient", holder});
  }
  out.evidence.note =
      "regularity of b is only sampled (positivity and a Hoelder quotient); not certified";

  if (b_checked && b_min == 0.0) out.evidence.note += "; b underflows to 0 at sampled nodes";
  if (!positive || (b_checked && b_min < 0.0)) {
    out.verdict = Verdict::fails;
  } else if (change <= cfg.sup_stability && last_zone <= cfg.boundary_ratio * last) {
    out.verdict = Verdict::holds;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

namespace {

enum class TailResult { holds, fails, unknown };

TailResult probe_tail(const Nonlinearity& f, const HypothesisConfig& cfg, int dir, Evidence& ev,
                      bool& evaluated) {
  std::vector<double> qs, rhos;
  for (int k = 1; k <= cfg.tail_samples; ++k) {
    const double q = std::pow(10.0, dir * k);
    double value = 0.0;
    try {
      value = f.eval(q);
    } catch (const std::exception&) {
      evaluated = false;
      return TailResult::unknown;
    }
    if (!std::isfinite(value) || !(value > 0.0)) {
      evaluated = false;
      return TailResult::unknown;
    }
    qs.push_back(q);
    rhos.push_back(value / q);
  }
  bool all_descending = true;  // every slope < -stall
  bool all_steep = true;       // every slope <= -slope_holds
  double last_slope = 0.0;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    double slope = std::nan("");
    if (k > 0) {
      slope = (std::log(rhos[k]) - std::log(rhos[k - 1])) / (std::log(qs[k]) - std::log(qs[k - 1]));
      all_descending = all_descending && slope < -cfg.slope_stall;
      all_steep = all_steep && slope <= -cfg.slope_holds;
      last_slope = slope;
    }
    ev.rows.push_back({static_cast<double>(dir), static_cast<double>(k + 1), qs[k], rhos[k], slope});
  }
  if (qs.size() < 2) return TailResult::unknown;
  const double rho_end = rhos.back();
  const bool beyond = dir < 0 ? rho_end > cfg.small_ratio_threshold
                              : rho_end < cfg.large_ratio_threshold;
  if (last_slope >= -cfg.slope_stall) return TailResult::fails;
  if (all_descending && (beyond || all_steep)) return TailResult::holds;
  return TailResult::unknown;
}

}  // namespace

CheckResult check_nonlinearity_limits(const Nonlinearity& f, const HypothesisConfig& cfg) {
  CheckResult out;
  out.evidence.columns = {"tail", "k", "q", "ratio", "log_slope"};
  bool eval_small = true, eval_large = true;
  const TailResult small = probe_tail(f, cfg, -1, out.evidence, eval_small);
  const TailResult large = probe_tail(f, cfg, +1, out.evidence, eval_large);
  auto code = [](TailResult t) {
    return t == TailResult::holds ? 1.0 : (t == TailResult::fails ? -1.0 : 0.0);
  };
  out.evidence.summary = {{"small_tail", code(small)}, {"large_tail", code(large)}};
  out.evidence.note = "tail codes: 1 limit consistent, -1 limit violated, 0 undetermined";
  if (!eval_small || !eval_large) out.evidence.note += "; f could not be evaluated on a tail";
  if (small == TailResult::holds && large == TailResult::holds) {
    out.verdict = Verdict::holds;
  } else if (small == TailResult::fails || large == TailResult::fails) {
    out.verdict = Verdict::fails;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

HypothesisReport verify_all(const ReducedProblem& rp, const HypothesisConfig& cfg) {
  HypothesisReport report;
  if (rp.cv) {
    report.h1 = check_domain_unbounded(*rp.cv, cfg);
  } else {
    report.h1.verdict = Verdict::inconclusive;
    report.h1.evidence.summary = {{"change_of_variables", 0.0}};
    report.h1.evidence.note = "problem has no change of variables; J cannot be probed";
  }
  report.h2 = check_linear_positive(rp, cfg);
  report.h3 = check_nonlinearity_limits(rp.f, cfg);
  report.overall = aggregate(report.h1.verdict, report.h2.verdict, report.h3.verdict);
  return report;
}

namespace {

void write_check(std::ostream& out, const char* name, const CheckResult& c) {
  out << '[' << name << "]\n";
  out << "verdict: " << to_string(c.verdict) << '\n';
  for (const auto& [key, value] : c.evidence.summary) {
    out << key << ": " << format_double(value) << '\n';
  }
  out << "evidence_rows: " << c.evidence.rows.size() << '\n';
  if (!c.evidence.note.empty()) out << "note: " << c.evidence.note << '\n';
  out << '\n';
}

}  // namespace

void write_report(std::ostream& out, const HypothesisReport& report) {
  out << "overall: " << to_string(report.overall) << "\n\n";
  write_check(out, "h1_domain_unbounded", report.h1);
  write_check(out, "h2_linear_positive", report.h2);
  write_check(out, "h3_nonlinearity_limits", report.h3);
}

void write_evidence_csv(std::ostream& out, const CheckResult& check) {
  CsvWriter csv(out, check.evidence.columns.empty() ? std::vector<std::string>{"value"}
                                                    : check.evidence.columns);
  for (const auto& row : check.evidence.rows) csv.row(row);
}

}  // namespace polarsl
