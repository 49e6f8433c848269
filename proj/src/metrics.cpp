#include "egai/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace egai {

namespace {

void check_prefix(const LabeledRun& run, std::int64_t t, bool needs_labels) {
  if (t < 1 || t > run.size())
    throw std::invalid_argument("t out of range for run");
  if (needs_labels && static_cast<std::int64_t>(run.labels.size()) != run.size())
    throw std::invalid_argument("run has no labels");
}

bool is_null(const LabeledRun& run, std::int64_t j) {
  return run.labels[j - 1] == 0;
}

// sum over j<=t of alpha_j * weight(j) / (d R^d_{j-1} + 1), the shared
// shape of all LORD/SAFFRON-style overestimates (d=1 gives R_{j-1}+1).
template <typename Weight, typename Keep>
double overestimate(const LabeledRun& run, std::int64_t t, double d,
                    Weight weight, Keep keep) {
  double decayed = 0.0;
  double acc = 0.0;
  for (std::int64_t j = 1; j <= t; ++j) {
    const Decision& dec = run.decisions[j - 1];
    if (keep(j))
      acc += dec.level * weight(dec) / (d * decayed + 1.0);
    decayed = d * decayed + (dec.reject ? 1.0 : 0.0);
  }
  return acc;
}

const auto kUnitWeight = [](const Decision&) { return 1.0; };

} // namespace

double fdp(const LabeledRun& run, std::int64_t t) {
  check_prefix(run, t, true);
  std::int64_t false_rejects = 0;
  std::int64_t rejects = 0;
  for (std::int64_t j = 1; j <= t; ++j) {
    if (!run.decisions[j - 1].reject) continue;
    ++rejects;
    if (is_null(run, j)) ++false_rejects;
  }
  return static_cast<double>(false_rejects) /
         static_cast<double>(std::max<std::int64_t>(rejects, 1));
}

double power(const LabeledRun& run, std::int64_t t) {
  check_prefix(run, t, true);
  std::int64_t non_nulls = 0;
  std::int64_t hits = 0;
  for (std::int64_t j = 1; j <= t; ++j) {
    if (is_null(run, j)) continue;
    ++non_nulls;
    if (run.decisions[j - 1].reject) ++hits;
  }
  if (non_nulls == 0) return 0.0;
  return static_cast<double>(hits) / static_cast<double>(non_nulls);
}

double mem_fdp(const LabeledRun& run, std::int64_t t, double d) {
  check_prefix(run, t, true);
  double num = 0.0;
  double den = 0.0;
  for (std::int64_t j = 1; j <= t; ++j) {
    if (!run.decisions[j - 1].reject) continue;
    const double w = std::pow(d, static_cast<double>(t - j));
    den += w;
    if (is_null(run, j)) num += w;
  }
  return den == 0.0 ? 0.0 : num / den;
}

double mem_power(const LabeledRun& run, std::int64_t t, double d) {
  check_prefix(run, t, true);
  double num = 0.0;
  double den = 0.0;
  for (std::int64_t j = 1; j <= t; ++j) {
    if (is_null(run, j)) continue;
    const double w = std::pow(d, static_cast<double>(t - j));
    den += w;
    if (run.decisions[j - 1].reject) num += w;
  }
  return den == 0.0 ? 0.0 : num / den;
}

double fdp_star_e(const LabeledRun& run, std::int64_t t) {
  check_prefix(run, t, true);
  return overestimate(run, t, 1.0, kUnitWeight,
                      [&](std::int64_t j) { return is_null(run, j); });
}

double mem_fdp_star(const LabeledRun& run, std::int64_t t, double d) {
  check_prefix(run, t, true);
  return overestimate(run, t, d, kUnitWeight,
                      [&](std::int64_t j) { return is_null(run, j); });
}

double fdp_star_e_ind(const LabeledRun& run, std::int64_t t) {
  check_prefix(run, t, true);
  double acc = 0.0;
  std::int64_t rejects = 0;
  for (std::int64_t j = 1; j <= t; ++j) {
    if (is_null(run, j)) acc += run.decisions[j - 1].level;
    if (run.decisions[j - 1].reject) ++rejects;
  }
  return acc / static_cast<double>(std::max<std::int64_t>(rejects, 1));
}

double fdp_hat_lord_e(const LabeledRun& run, std::int64_t t) {
  check_prefix(run, t, false);
  return overestimate(run, t, 1.0, kUnitWeight, [](std::int64_t) { return true; });
}

double fdp_hat_saffron_e(const LabeledRun& run, std::int64_t t, double lambda) {
  check_prefix(run, t, false);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in (0,1)");
  const auto weight = [lambda](const Decision& dec) {
    return dec.evidence.value() < 1.0 / lambda ? 1.0 / (1.0 - lambda) : 0.0;
  };
  return overestimate(run, t, 1.0, weight, [](std::int64_t) { return true; });
}

double fdp_hat_ps_rai(const LabeledRun& run, std::int64_t t, double lambda) {
  check_prefix(run, t, false);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in (0,1)");
  const auto weight = [lambda](const Decision& dec) {
    return dec.evidence.value() > lambda ? 1.0 / (1.0 - lambda) : 0.0;
  };
  return overestimate(run, t, 1.0, weight, [](std::int64_t) { return true; });
}

double mem_fdp_hat_lord(const LabeledRun& run, std::int64_t t, double d) {
  check_prefix(run, t, false);
  return overestimate(run, t, d, kUnitWeight, [](std::int64_t) { return true; });
}

double mem_fdp_hat_saffron(const LabeledRun& run, std::int64_t t, double d,
                           double lambda) {
  check_prefix(run, t, false);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in (0,1)");
  const auto weight = [lambda](const Decision& dec) {
    return dec.evidence.value() < 1.0 / lambda ? 1.0 / (1.0 - lambda) : 0.0;
  };
  return overestimate(run, t, d, weight, [](std::int64_t) { return true; });
}

double mem_fdp_hat_ps_rai(const LabeledRun& run, std::int64_t t, double d,
                          double lambda) {
  check_prefix(run, t, false);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in (0,1)");
  const auto weight = [lambda](const Decision& dec) {
    return dec.evidence.value() > lambda ? 1.0 / (1.0 - lambda) : 0.0;
  };
  return overestimate(run, t, d, weight, [](std::int64_t) { return true; });
}

double fdp_hat_gai_lord(const LabeledRun& run, std::int64_t t) {
  check_prefix(run, t, false);
  double acc = 0.0;
  std::int64_t rejects = 0;
  for (std::int64_t j = 1; j <= t; ++j) {
    acc += run.decisions[j - 1].level;
    if (run.decisions[j - 1].reject) ++rejects;
  }
  return acc / static_cast<double>(std::max<std::int64_t>(rejects, 1));
}

double fdp_hat_gai_saffron(const LabeledRun& run, std::int64_t t,
                           double lambda) {
  check_prefix(run, t, false);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in (0,1)");
  double acc = 0.0;
  std::int64_t rejects = 0;
  for (std::int64_t j = 1; j <= t; ++j) {
    const Decision& dec = run.decisions[j - 1];
    if (dec.evidence.value() > lambda) acc += dec.level / (1.0 - lambda);
    if (dec.reject) ++rejects;
  }
  return acc / static_cast<double>(std::max<std::int64_t>(rejects, 1));
}

} // namespace egai
