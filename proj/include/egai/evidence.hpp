#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace egai {

enum class EvidenceKind { e_value, p_value };

/// Thrown when a procedure is fed evidence of the wrong kind
/// (e.g. p-values into an e-value procedure).
class EvidenceMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A single test statistic: either an e-value (finite, >= 0) or a
/// p-value (in [0,1]). Validated at construction; immutable afterwards.
class Evidence {
public:
  static Evidence e(double value) {
    if (!std::isfinite(value) || value < 0.0)
      throw std::invalid_argument("e-value must be finite and non-negative");
    return Evidence(EvidenceKind::e_value, value);
  }

  static Evidence p(double value) {
    if (!(value >= 0.0 && value <= 1.0))
      throw std::invalid_argument("p-value must lie in [0,1]");
    return Evidence(EvidenceKind::p_value, value);
  }

  EvidenceKind kind() const { return kind_; }
  double value() const { return value_; }

  bool is_e() const { return kind_ == EvidenceKind::e_value; }
  bool is_p() const { return kind_ == EvidenceKind::p_value; }

private:
  Evidence(EvidenceKind kind, double value) : kind_(kind), value_(value) {}

  EvidenceKind kind_;
  double value_;
};

/// Per-step outcome: 1-based time index, the testing level in force,
/// the evidence seen, and the reject flag.
struct Decision {
  std::int64_t t;
  double level;
  Evidence evidence;
  bool reject;
};

/// Rejection rule: e-values reject iff value >= 1/level, p-values iff
/// value <= level. A level of 0 never rejects (exhausted wealth means
/// the e-value threshold is unreachable).
inline Decision make_decision(const Evidence& evidence, double level,
                              std::int64_t t = 0) {
  if (!(level >= 0.0 && level <= 1.0))
    throw std::invalid_argument("testing level must lie in [0,1]");
  bool reject = false;
  if (level > 0.0) {
    if (evidence.is_e())
      reject = evidence.value() >= 1.0 / level;
    else
      reject = evidence.value() <= level;
  }
  return Decision{t, level, evidence, reject};
}

} // namespace egai
