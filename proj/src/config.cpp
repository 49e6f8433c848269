#include "egai/config.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace egai {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Slack for the lazy partial-sum check; sequences that sum to exactly 1
// may overshoot by rounding.
constexpr double kSumSlack = 1e-9;

} // namespace

void RaiConfig::validate() const {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  require(omega1 > 0.0 && omega1 < 0.5, "omega1 must lie in (0,0.5)");
  require(phi >= 0.0 && phi <= 0.5, "phi must lie in [0,0.5]");
  require(psi >= 0.0 && psi <= 0.5, "psi must lie in [0,0.5]");
  require(lambda >= 0.0 && lambda < 1.0, "lambda must lie in [0,1)");
  require(decay > 0.0 && decay <= 1.0, "decay must lie in (0,1]");
}

void GaiConfig::validate() const {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  require(w0 > 0.0, "w0 must be positive");
  require(lambda > 0.0 && lambda < 1.0, "lambda must lie in (0,1)");
}

GammaSequence::GammaSequence()
    : fn_([](std::int64_t t) {
        const double c = 6.0 / (std::numbers::pi * std::numbers::pi);
        return c / (static_cast<double>(t) * static_cast<double>(t));
      }) {}

GammaSequence::GammaSequence(std::function<double(std::int64_t)> fn)
    : fn_(std::move(fn)) {
  if (!fn_) throw std::invalid_argument("gamma generator must be callable");
}

GammaSequence GammaSequence::from_weights(std::vector<double> weights) {
  auto shared = std::make_shared<std::vector<double>>(std::move(weights));
  return GammaSequence([shared](std::int64_t t) {
    return t <= static_cast<std::int64_t>(shared->size()) ? (*shared)[t - 1]
                                                          : 0.0;
  });
}

void GammaSequence::extend(std::int64_t t) const {
  while (static_cast<std::int64_t>(values_.size()) < t) {
    const std::int64_t k = static_cast<std::int64_t>(values_.size()) + 1;
    const double v = fn_(k);
    if (!(v >= 0.0))
      throw std::invalid_argument("gamma sequence term is negative at t=" +
                                  std::to_string(k));
    const double s = (sums_.empty() ? 0.0 : sums_.back()) + v;
    if (s > 1.0 + kSumSlack)
      throw std::invalid_argument("gamma sequence partial sum exceeds 1 at t=" +
                                  std::to_string(k));
    values_.push_back(v);
    sums_.push_back(s);
  }
}

double GammaSequence::at(std::int64_t t) const {
  if (t < 1) throw std::invalid_argument("gamma index must be >= 1");
  extend(t);
  return values_[t - 1];
}

double GammaSequence::partial_sum(std::int64_t t) const {
  if (t < 0) throw std::invalid_argument("gamma index must be >= 0");
  if (t == 0) return 0.0;
  extend(t);
  return sums_[t - 1];
}

} // namespace egai
