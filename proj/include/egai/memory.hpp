#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace egai {

/// Exponentially decayed rejection count R^d_t = sum_j d^{t-j} delta_j,
/// maintained recursively as value' = d * value + delta. With d=1 the
/// updates are exact integer arithmetic and reduce to plain counting.
class DecayedCounter {
public:
  explicit DecayedCounter(double decay) : decay_(decay) {
    if (!(decay > 0.0 && decay <= 1.0))
      throw std::invalid_argument("decay must lie in (0,1]");
  }

  void update(bool delta) { value_ = decay_ * value_ + (delta ? 1.0 : 0.0); }

  double value() const { return value_; }
  double decay() const { return decay_; }

private:
  double decay_;
  double value_ = 0.0;
};

inline DecayedCounter decay_update(DecayedCounter counter, bool delta) {
  counter.update(delta);
  return counter;
}

/// Checks the denominator inequality behind decaying-memory FDR control:
/// for every rejection time j <= t,
///   d^{t-j} * (d * R^d_{j-1} + 1) <= max(R^d_t, 1).
///
/// decayed_history[k] must hold R^d_{k+1}, i.e. the counter value after
/// step k+1, for k+1 = 1..t (R^d_0 = 0 is implied).
inline bool mem_denominator_bound_check(
    std::span<const std::int64_t> rejection_times,
    std::span<const double> decayed_history, double d, std::int64_t t) {
  if (t < 1 || static_cast<std::int64_t>(decayed_history.size()) < t)
    throw std::invalid_argument("decayed history shorter than t");
  // The inequality can be an exact tie (last rejection, nothing after);
  // allow rounding slack for the recursively accumulated counter.
  const double cap = std::max(decayed_history[t - 1], 1.0) * (1.0 + 1e-12);
  for (std::int64_t j : rejection_times) {
    if (j > t) break;
    const double prev = j >= 2 ? decayed_history[j - 2] : 0.0;
    const double predicted = std::pow(d, static_cast<double>(t - j)) * (d * prev + 1.0);
    if (predicted > cap) return false;
  }
  return true;
}

} // namespace egai
