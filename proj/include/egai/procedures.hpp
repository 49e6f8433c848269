#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egai/config.hpp"
#include "egai/evidence.hpp"
#include "egai/state.hpp"

namespace egai {

enum class ProcedureKind {
  e_lord,
  e_saffron,
  pl_rai,
  ps_rai,
  e_lond,
  lord_pp,
  saffron,
};

/// Evidence kind the procedure consumes: e-values for e_lord, e_saffron
/// and e_lond; p-values for the rest.
EvidenceKind required_evidence(ProcedureKind kind);

bool is_rai(ProcedureKind kind);

const char* procedure_name(ProcedureKind kind);

/// Parses the CLI spelling ("e-lord", "ps-rai", "lord++", ...).
ProcedureKind parse_procedure(const std::string& name);

/// Per-kind baseline defaults: LORD++ starts with W0 = alpha/2; SAFFRON
/// with lambda = 0.5 and W0 = (1-lambda) * alpha / 2; e-LOND uses the
/// quadratic gamma sequence only.
GaiConfig gai_defaults(ProcedureKind kind, double alpha);

/// Allocation-coefficient update
///   omega' = omega + omega1 * phi^(t-R) * (1-delta) - omega1 * psi^R * delta
/// with R the post-decision rejection count at step t. The config
/// bounds keep the result in (0,1).
double update_omega(double omega, std::int64_t t, std::int64_t rejections_after,
                    bool delta, const RaiConfig& config);

/// One online testing procedure: emits a predictable level each step,
/// decides on the supplied evidence, and advances its investing state.
/// Single-owner sequential state machine; instances are independent.
class Procedure {
public:
  static Procedure init(ProcedureKind kind, RaiConfig config);
  static Procedure init(ProcedureKind kind, GaiConfig config);

  /// The level alpha_t the next step will test at. Depends on state
  /// derived from decisions 1..t-1 only, never on upcoming evidence.
  double next_level() const;

  /// Emits the decision for the next time step and advances the state.
  /// Throws EvidenceMismatchError if the evidence kind is wrong.
  Decision step(const Evidence& evidence);

  ProcedureKind kind() const { return kind_; }
  const ProcedureState& state() const { return state_; }
  const RaiConfig& rai_config() const;
  const GaiConfig& gai_config() const;

private:
  Procedure(ProcedureKind kind, RaiConfig config);
  Procedure(ProcedureKind kind, GaiConfig config);

  double rai_level() const;
  double gai_level() const;
  void advance_rai(const Decision& decision);
  void advance_gai(const Decision& decision);

  ProcedureKind kind_;
  bool uses_rai_config_;
  RaiConfig rai_{};
  GaiConfig gai_{};
  ProcedureState state_{};
};

/// Closed form of the e-LORD level,
///   alpha_t = alpha * (R_{t-1}+1) * omega_t * prod_{j<t} (1 - omega_j),
/// evaluated from the omega history. Test oracle for the recursive
/// remaining-wealth implementation.
double closed_form_level_elord(double alpha, std::int64_t t,
                               std::span<const double> omega_history,
                               std::int64_t rejections_before);

/// e-SAFFRON sibling: the product skips steps whose adaptivity
/// indicator did not fire (indicator_history[j-1] = 1{e_j < 1/lambda}).
double closed_form_level_esaffron(double alpha, double lambda, std::int64_t t,
                                  std::span<const double> omega_history,
                                  const std::vector<bool>& indicator_history,
                                  std::int64_t rejections_before);

/// gamma_t = omega_t * prod_{j<t} (1 - omega_j). Feeding this sequence
/// into e-LOND reproduces the e-LORD levels pathwise.
std::vector<double> elond_gamma_from_omegas(std::span<const double> omegas);

} // namespace egai
