#pragma once

#include <cstdint>
#include <vector>

namespace egai {

/// Alpha-investing state shared by all procedures. The time index t is
/// the next step to be taken (1-based). decayed_rejections tracks
/// sum_j d^{t-j} delta_j; with d=1 it equals the plain count exactly.
///
/// rejection_times and candidate tallies are maintained only for the
/// baselines whose level formulas consume them (LORD++/SAFFRON); the
/// RAI procedures keep O(1) state per step.
struct ProcedureState {
  std::int64_t t = 1;
  double remaining_wealth = 0.0;
  std::int64_t rejections = 0;
  double decayed_rejections = 0.0;
  double omega = 0.0;
  std::vector<std::int64_t> rejection_times;
  // Cumulative candidate count (p <= lambda) and its value at each
  // rejection time; together they yield the per-epoch counters C_{i+}.
  std::int64_t candidates = 0;
  std::vector<std::int64_t> candidates_at_rejection;
};

} // namespace egai
