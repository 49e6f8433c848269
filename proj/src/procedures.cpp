#include "egai/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace egai {

EvidenceKind required_evidence(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::e_lord:
    case ProcedureKind::e_saffron:
    case ProcedureKind::e_lond:
      return EvidenceKind::e_value;
    case ProcedureKind::pl_rai:
    case ProcedureKind::ps_rai:
    case ProcedureKind::lord_pp:
    case ProcedureKind::saffron:
      return EvidenceKind::p_value;
  }
  throw std::logic_error("unknown procedure kind");
}

bool is_rai(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::e_lord:
    case ProcedureKind::e_saffron:
    case ProcedureKind::pl_rai:
    case ProcedureKind::ps_rai:
      return true;
    default:
      return false;
  }
}

const char* procedure_name(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::e_lord: return "e-lord";
    case ProcedureKind::e_saffron: return "e-saffron";
    case ProcedureKind::pl_rai: return "pl-rai";
    case ProcedureKind::ps_rai: return "ps-rai";
    case ProcedureKind::e_lond: return "e-lond";
    case ProcedureKind::lord_pp: return "lord++";
    case ProcedureKind::saffron: return "saffron";
  }
  return "?";
}

ProcedureKind parse_procedure(const std::string& name) {
  if (name == "e-lord") return ProcedureKind::e_lord;
  if (name == "e-saffron") return ProcedureKind::e_saffron;
  if (name == "pl-rai") return ProcedureKind::pl_rai;
  if (name == "ps-rai") return ProcedureKind::ps_rai;
  if (name == "e-lond") return ProcedureKind::e_lond;
  if (name == "lord++" || name == "lordpp") return ProcedureKind::lord_pp;
  if (name == "saffron") return ProcedureKind::saffron;
  throw std::invalid_argument("unknown procedure: " + name);
}

GaiConfig gai_defaults(ProcedureKind kind, double alpha) {
  GaiConfig cfg;
  cfg.alpha = alpha;
  if (kind == ProcedureKind::saffron) {
    cfg.lambda = 0.5;
    cfg.w0 = (1.0 - cfg.lambda) * alpha / 2.0;
  } else {
    cfg.w0 = alpha / 2.0;
  }
  return cfg;
}

double update_omega(double omega, std::int64_t t, std::int64_t rejections_after,
                    bool delta, const RaiConfig& config) {
  // delta=0 implies t-R >= 1 and delta=1 implies R >= 1, so the
  // exponents below are always >= 1 and phi=psi=0 never hits 0^0.
  if (delta)
    return omega - config.omega1 *
                       std::pow(config.psi, static_cast<double>(rejections_after));
  return omega + config.omega1 *
                     std::pow(config.phi, static_cast<double>(t - rejections_after));
}

Procedure::Procedure(ProcedureKind kind, RaiConfig config)
    : kind_(kind), uses_rai_config_(true), rai_(config) {}

Procedure::Procedure(ProcedureKind kind, GaiConfig config)
    : kind_(kind), uses_rai_config_(false), gai_(std::move(config)) {}

Procedure Procedure::init(ProcedureKind kind, RaiConfig config) {
  if (!is_rai(kind))
    throw std::invalid_argument("RaiConfig applies to the RAI procedures only");
  config.validate();
  Procedure proc(kind, config);
  const bool adaptive =
      kind == ProcedureKind::e_saffron || kind == ProcedureKind::ps_rai;
  proc.state_.remaining_wealth =
      adaptive ? config.alpha * (1.0 - config.lambda) : config.alpha;
  proc.state_.omega = config.omega1;
  return proc;
}

Procedure Procedure::init(ProcedureKind kind, GaiConfig config) {
  if (is_rai(kind))
    throw std::invalid_argument("GaiConfig applies to the baselines only");
  config.validate();
  if (kind == ProcedureKind::lord_pp && config.w0 > config.alpha)
    throw std::invalid_argument("w0 must not exceed alpha");
  if (kind == ProcedureKind::saffron &&
      config.w0 > (1.0 - config.lambda) * config.alpha)
    throw std::invalid_argument("w0 must not exceed (1-lambda)*alpha");
  Procedure proc(kind, std::move(config));
  proc.state_.remaining_wealth = kind == ProcedureKind::e_lond
                                     ? proc.gai_.alpha
                                     : proc.gai_.w0;
  return proc;
}

const RaiConfig& Procedure::rai_config() const {
  if (!uses_rai_config_) throw std::logic_error("procedure has no RaiConfig");
  return rai_;
}

const GaiConfig& Procedure::gai_config() const {
  if (uses_rai_config_) throw std::logic_error("procedure has no GaiConfig");
  return gai_;
}

double Procedure::rai_level() const {
  // Recursive remaining-wealth form: alpha_t = omega_t * rw_t * (d R^d + 1).
  // With d=1 the decayed counter tracks R exactly, so one expression
  // serves both the plain and the decaying-memory variants.
  const double denom = rai_.decay * state_.decayed_rejections + 1.0;
  return state_.omega * state_.remaining_wealth * denom;
}

double Procedure::gai_level() const {
  const std::int64_t t = state_.t;
  const double alpha = gai_.alpha;
  switch (kind_) {
    case ProcedureKind::e_lond:
      return alpha * gai_.gamma.at(t) *
             static_cast<double>(state_.rejections + 1);
    case ProcedureKind::lord_pp: {
      double level = gai_.gamma.at(t) * gai_.w0;
      const auto& tau = state_.rejection_times;
      if (!tau.empty()) level += (alpha - gai_.w0) * gai_.gamma.at(t - tau[0]);
      for (std::size_t j = 1; j < tau.size(); ++j)
        level += alpha * gai_.gamma.at(t - tau[j]);
      return level;
    }
    case ProcedureKind::saffron: {
      // Indices shift by the per-epoch candidate counts C_{i+}(t),
      // recovered as candidates(t-1) - candidates(tau_i).
      const std::int64_t cand_before = state_.candidates;
      double level =
          gai_.w0 * gai_.gamma.at(t - cand_before);
      const auto& tau = state_.rejection_times;
      const auto& marks = state_.candidates_at_rejection;
      if (!tau.empty()) {
        level += ((1.0 - gai_.lambda) * alpha - gai_.w0) *
                 gai_.gamma.at(t - tau[0] - (cand_before - marks[0]));
        for (std::size_t j = 1; j < tau.size(); ++j)
          level += (1.0 - gai_.lambda) * alpha *
                   gai_.gamma.at(t - tau[j] - (cand_before - marks[j]));
      }
      return std::min(gai_.lambda, level);
    }
    default:
      throw std::logic_error("gai_level on a RAI procedure");
  }
}

double Procedure::next_level() const {
  const double raw = uses_rai_config_ ? rai_level() : gai_level();
  return std::clamp(raw, 0.0, 1.0);
}

Decision Procedure::step(const Evidence& evidence) {
  if (evidence.kind() != required_evidence(kind_))
    throw EvidenceMismatchError(
        std::string("procedure ") + procedure_name(kind_) + " expects " +
        (required_evidence(kind_) == EvidenceKind::e_value ? "e-values"
                                                           : "p-values"));
  const double level = next_level();
  Decision decision = make_decision(evidence, level, state_.t);
  if (uses_rai_config_)
    advance_rai(decision);
  else
    advance_gai(decision);
  return decision;
}

void Procedure::advance_rai(const Decision& decision) {
  const bool delta = decision.reject;
  bool spend = true;
  if (rai_.lambda > 0.0) {
    // Adaptivity indicator: 1{e_t < 1/lambda} on the e-value side,
    // 1{p_t > lambda} on the p-value side. Steps whose indicator does
    // not fire cost no wealth.
    if (kind_ == ProcedureKind::e_saffron)
      spend = decision.evidence.value() < 1.0 / rai_.lambda;
    else if (kind_ == ProcedureKind::ps_rai)
      spend = decision.evidence.value() > rai_.lambda;
  }
  if (spend) {
    const double denom = rai_.decay * state_.decayed_rejections + 1.0;
    state_.remaining_wealth =
        std::max(state_.remaining_wealth - decision.level / denom, 0.0);
  }
  state_.rejections += delta ? 1 : 0;
  state_.decayed_rejections =
      rai_.decay * state_.decayed_rejections + (delta ? 1.0 : 0.0);
  state_.omega =
      update_omega(state_.omega, state_.t, state_.rejections, delta, rai_);
  state_.t += 1;
}

void Procedure::advance_gai(const Decision& decision) {
  const bool delta = decision.reject;
  const double alpha = gai_.alpha;
  switch (kind_) {
    case ProcedureKind::e_lond:
      state_.remaining_wealth = std::max(
          state_.remaining_wealth -
              decision.level / static_cast<double>(state_.rejections + 1),
          0.0);
      break;
    case ProcedureKind::lord_pp:
      state_.remaining_wealth -= decision.level;
      if (delta)
        state_.remaining_wealth +=
            state_.rejection_times.empty() ? alpha - gai_.w0 : alpha;
      state_.remaining_wealth = std::max(state_.remaining_wealth, 0.0);
      break;
    case ProcedureKind::saffron: {
      const bool candidate = decision.evidence.value() <= gai_.lambda;
      if (!candidate) state_.remaining_wealth -= decision.level;
      if (delta)
        state_.remaining_wealth += state_.rejection_times.empty()
                                       ? (1.0 - gai_.lambda) * alpha - gai_.w0
                                       : (1.0 - gai_.lambda) * alpha;
      state_.remaining_wealth = std::max(state_.remaining_wealth, 0.0);
      state_.candidates += candidate ? 1 : 0;
      break;
    }
    default:
      throw std::logic_error("advance_gai on a RAI procedure");
  }
  if (delta) {
    if (kind_ != ProcedureKind::e_lond) {
      state_.rejection_times.push_back(state_.t);
      if (kind_ == ProcedureKind::saffron)
        state_.candidates_at_rejection.push_back(state_.candidates);
    }
    state_.rejections += 1;
  }
  state_.decayed_rejections = static_cast<double>(state_.rejections);
  state_.t += 1;
}

double closed_form_level_elord(double alpha, std::int64_t t,
                               std::span<const double> omega_history,
                               std::int64_t rejections_before) {
  if (t < 1 || static_cast<std::int64_t>(omega_history.size()) < t)
    throw std::invalid_argument("omega history shorter than t");
  double carried = 1.0;
  for (std::int64_t j = 0; j + 1 < t; ++j) carried *= 1.0 - omega_history[j];
  return alpha * static_cast<double>(rejections_before + 1) *
         omega_history[t - 1] * carried;
}

double closed_form_level_esaffron(double alpha, double lambda, std::int64_t t,
                                  std::span<const double> omega_history,
                                  const std::vector<bool>& indicator_history,
                                  std::int64_t rejections_before) {
  if (t < 1 || static_cast<std::int64_t>(omega_history.size()) < t ||
      static_cast<std::int64_t>(indicator_history.size()) + 1 < t)
    throw std::invalid_argument("history shorter than t");
  double carried = 1.0;
  for (std::int64_t j = 0; j + 1 < t; ++j)
    if (indicator_history[j]) carried *= 1.0 - omega_history[j];
  return alpha * (1.0 - lambda) * static_cast<double>(rejections_before + 1) *
         omega_history[t - 1] * carried;
}

std::vector<double> elond_gamma_from_omegas(std::span<const double> omegas) {
  std::vector<double> gamma;
  gamma.reserve(omegas.size());
  double carried = 1.0;
  for (double w : omegas) {
    if (!(w > 0.0 && w < 1.0))
      throw std::invalid_argument("omega values must lie in (0,1)");
    gamma.push_back(w * carried);
    carried *= 1.0 - w;
  }
  return gamma;
}

} // namespace egai
