#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace egai {

/// Parameters of the risk-aversion investing procedures (e-LORD,
/// e-SAFFRON, pL-RAI, pS-RAI and their decaying-memory variants).
///
/// The bounds omega1 in (0,0.5), phi in [0,0.5], psi in [0,0.5]
/// guarantee the allocation coefficient stays in (0,1) at every step.
struct RaiConfig {
  double alpha = 0.05;  // target FDR level, in (0,1)
  double omega1 = 0.005;  // initial allocation coefficient
  double phi = 0.5;   // stimulation intensity after an acceptance
  double psi = 0.5;   // risk regulation after a rejection
  double lambda = 0.0;  // adaptivity threshold; 0 disables adaptivity
  double decay = 1.0;   // memory decay d; 1 disables decay

  void validate() const;
};

/// Lazily evaluated nonnegative sequence whose partial sums must stay
/// <= 1. Values are memoized; the partial-sum invariant is checked as
/// terms are consumed. Copies are independent.
class GammaSequence {
public:
  /// gamma_t = (6/pi^2)/t^2, the summable default (sums to exactly 1).
  GammaSequence();

  explicit GammaSequence(std::function<double(std::int64_t)> fn);

  /// Finite sequence from explicit weights; terms beyond the end are 0.
  static GammaSequence from_weights(std::vector<double> weights);

  /// 1-based lookup. Throws if a term is negative or the partial sum
  /// through t exceeds 1 (beyond rounding slack).
  double at(std::int64_t t) const;

  /// Partial sum of the first t terms.
  double partial_sum(std::int64_t t) const;

private:
  std::function<double(std::int64_t)> fn_;
  mutable std::vector<double> values_;
  mutable std::vector<double> sums_;

  void extend(std::int64_t t) const;
};

/// Parameters of the GAI baselines (e-LOND, LORD++, SAFFRON).
struct GaiConfig {
  double alpha = 0.05;  // target FDR level
  double w0 = 0.025;    // initial alpha-wealth (LORD++/SAFFRON)
  GammaSequence gamma;  // descending spending sequence
  double lambda = 0.5;  // candidate threshold (SAFFRON only)

  void validate() const;
};

} // namespace egai
