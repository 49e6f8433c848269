#pragma once

#include <cstdint>
#include <vector>

#include "egai/evidence.hpp"

namespace egai {

/// A completed run: the decision log and, in simulation contexts, the
/// ground-truth labels theta_t (0 = null true, 1 = alternative).
/// Levels and evidence ride along inside each Decision. labels may be
/// empty (unlabeled run); otherwise sizes must match.
struct LabeledRun {
  std::vector<Decision> decisions;
  std::vector<int> labels;

  std::int64_t size() const {
    return static_cast<std::int64_t>(decisions.size());
  }
  bool labeled() const { return !labels.empty(); }
};

// Ground-truth error metrics. All take the prefix length t (1-based).

/// False discovery proportion: falsely rejected nulls over max(R_t, 1).
double fdp(const LabeledRun& run, std::int64_t t);

/// Rejected non-nulls over total non-nulls so far; 0 if none exist yet.
double power(const LabeledRun& run, std::int64_t t);

/// Decaying-memory FDP with weight d^(t-j); 0 when nothing is rejected.
double mem_fdp(const LabeledRun& run, std::int64_t t, double d);

/// Decaying-memory power; denominator sums d^(t-j) over non-nulls.
double mem_power(const LabeledRun& run, std::int64_t t, double d);

// FDP estimators. These recompute the rejection trajectory from the
// decision log, independently of any procedure internals, so they
// double as cross-checks of the engine's wealth accounting.

/// Oracle estimate sum_{j null} alpha_j / (R_{j-1}+1); needs labels.
double fdp_star_e(const LabeledRun& run, std::int64_t t);

/// Memory analogue with (d R^d_{j-1} + 1) denominators; needs labels.
double mem_fdp_star(const LabeledRun& run, std::int64_t t, double d);

/// Independence-case oracle sum_{j null} alpha_j / max(R_t, 1).
double fdp_star_e_ind(const LabeledRun& run, std::int64_t t);

/// LORD-style overestimate sum_j alpha_j / (R_{j-1}+1).
double fdp_hat_lord_e(const LabeledRun& run, std::int64_t t);

/// Adaptive overestimate; terms carry 1{e_j < 1/lambda} / (1-lambda).
double fdp_hat_saffron_e(const LabeledRun& run, std::int64_t t, double lambda);

/// p-value RAI variants: pL-RAI shares the LORD-style sum; pS-RAI
/// carries 1{p_j > lambda} / (1-lambda).
inline double fdp_hat_pl_rai(const LabeledRun& run, std::int64_t t) {
  return fdp_hat_lord_e(run, t);
}
double fdp_hat_ps_rai(const LabeledRun& run, std::int64_t t, double lambda);

double mem_fdp_hat_lord(const LabeledRun& run, std::int64_t t, double d);
double mem_fdp_hat_saffron(const LabeledRun& run, std::int64_t t, double d,
                           double lambda);
inline double mem_fdp_hat_pl_rai(const LabeledRun& run, std::int64_t t,
                                 double d) {
  return mem_fdp_hat_lord(run, t, d);
}
double mem_fdp_hat_ps_rai(const LabeledRun& run, std::int64_t t, double d,
                          double lambda);

/// Classic GAI estimators for LORD++/SAFFRON runs:
/// sum_j alpha_j / max(R_t,1), with the SAFFRON variant keeping only
/// terms with p_j > lambda, scaled by 1/(1-lambda).
double fdp_hat_gai_lord(const LabeledRun& run, std::int64_t t);
double fdp_hat_gai_saffron(const LabeledRun& run, std::int64_t t,
                           double lambda);

} // namespace egai
