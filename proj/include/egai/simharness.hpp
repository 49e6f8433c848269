#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "egai/config.hpp"
#include "egai/evidence.hpp"
#include "egai/metrics.hpp"
#include "egai/procedures.hpp"
#include "egai/rng.hpp"

namespace egai {

/// How the Gaussian harness turns observations into evidence.
///
/// `conditional` evaluates the law of X_t given the full past (exactly
/// valid e-values, exactly uniform null p-values; the dependence is
/// absorbed by the conditioning, so the evidence stream is independent).
/// `marginal` uses the per-coordinate statistics exp(mu_c x - mu_c^2/2)
/// and 1 - Phi(x): valid marginally but serially dependent through the
/// covariance, the regime where candidate-earning baselines overshoot
/// their FDR target.
enum class GaussianEvidenceMode { conditional, marginal };

/// Correlated-Gaussian stream: theta_t ~ Bernoulli(pi1) i.i.d.,
/// X ~ N(mu, Sigma) with mu_t = mu_c * theta_t and the banded covariance
/// Sigma_ij = rho^|i-j| * 1{|i-j| <= L}. Sigma must be positive
/// definite (checked when the banded Cholesky factor is built).
struct GaussianConfig {
  std::int64_t T = 500;
  double pi1 = 0.2;
  double mu_c = 3.0;
  double rho = 0.5;
  std::int64_t L = 30;
  std::uint64_t seed = 1;
  GaussianEvidenceMode evidence = GaussianEvidenceMode::conditional;
};

/// Time-varying AR(1) stream: X_t = rho_t X_{t-1} + mu_t + eps_t with
/// eps_t ~ N(0,1), X_0 = 0, and logistic coefficient
/// rho_t = 2 / (1 + exp(-eta (t - t0))) - 1. t0 < 0 means T/2.
struct Ar1Config {
  std::int64_t T = 500;
  double pi1 = 0.2;
  double mu_c = 3.0;
  double eta = 0.01;
  double t0 = -1.0;
  std::uint64_t seed = 1;
};

double ar1_rho(const Ar1Config& config, std::int64_t t);

/// Lower-triangular Cholesky factor of a symmetric banded matrix,
/// stored band-compressed. Construction throws if a pivot is not
/// strictly positive (matrix not positive definite).
class BandedCholesky {
public:
  BandedCholesky(std::int64_t n, std::int64_t bandwidth,
                 const std::vector<double>& band);

  /// Factor of the truncated-AR covariance rho^|i-j| 1{|i-j| <= L}.
  static BandedCholesky gaussian_covariance(std::int64_t n, double rho,
                                            std::int64_t bandwidth);

  double at(std::int64_t i, std::int64_t j) const; // 0-based, j <= i
  std::int64_t size() const { return n_; }
  std::int64_t bandwidth() const { return bw_; }

private:
  std::int64_t n_;
  std::int64_t bw_;
  std::vector<double> g_; // row-major band, (bw_+1) entries per row
};

struct SampledStream {
  std::vector<double> x;
  std::vector<int> labels;
};

SampledStream sample_gaussian_stream(const GaussianConfig& config, Rng& rng);
SampledStream sample_ar1_stream(const Ar1Config& config, Rng& rng);

/// Streaming evaluator of the conditional law of X_t given the full
/// past under the banded Gaussian model. Conditioning uses the true
/// past means mu_c * theta_j (oracle conditioning), which makes the
/// emitted e-values exactly conditionally valid and the p-values
/// exactly conditionally uniform under the null.
class GaussianEvidenceModel {
public:
  explicit GaussianEvidenceModel(const GaussianConfig& config);

  /// Evidence for step t computed from x_t and the recorded past; then
  /// records (x_t, theta_t) for conditioning of later steps. theta_t
  /// itself does not influence the returned pair.
  std::pair<Evidence, Evidence> step(double x, int theta);

  /// Null conditional mean and standard deviation the next step will use.
  double conditional_mean() const;
  double conditional_sd() const;

private:
  GaussianConfig config_;
  BandedCholesky chol_;
  std::vector<double> whitened_; // z_j = (x_j - mu_j - m_j) / sd_j
  std::int64_t t_ = 0;           // steps recorded so far
};

/// Evidence under the AR(1) model: residual r = x_t - rho_t x_prev,
/// e_t = exp(mu_c r - mu_c^2/2), p_t = 1 - Phi(r).
std::pair<Evidence, Evidence> ar1_evidence(double x, double x_prev, double rho,
                                           const Ar1Config& config);

using ModelConfig = std::variant<GaussianConfig, Ar1Config>;

/// One procedure entry in an experiment: display name, kind, and the
/// matching config (RAI or baseline).
struct ProcedureSpec {
  std::string name;
  ProcedureKind kind;
  RaiConfig rai{};
  GaiConfig gai{};

  Procedure instantiate() const;
  /// Decay used when reporting mem-metrics (procedure's d; 1 for baselines).
  double mem_decay() const;
};

/// Aggregated results of one (model, procedure) cell: mean and standard
/// error over replications of the final-time FDP (estimating FDR),
/// power, and their decaying-memory analogues.
struct RunMetrics {
  std::string procedure;
  double pi1 = 0.0;
  std::int64_t reps = 0;
  double fdr_mean = 0.0, fdr_se = 0.0;
  double power_mean = 0.0, power_se = 0.0;
  double mem_fdr_mean = 0.0, mem_fdr_se = 0.0;
  double mem_power_mean = 0.0, mem_power_se = 0.0;
};

/// Per-replication trace, for callers that need full trajectories.
LabeledRun drive_procedure(Procedure& proc, const SampledStream& stream,
                           const std::vector<Evidence>& evidence);

/// Evidence streams (one e-value and one p-value per step) for a
/// sampled stream under the given model.
std::pair<std::vector<Evidence>, std::vector<Evidence>> compute_evidence(
    const ModelConfig& model, const SampledStream& stream);

/// Runs `reps` replications: sample stream, compute evidence, drive
/// each procedure, aggregate. Replication r draws from the sub-stream
/// (seed, r), so results are deterministic and order-independent.
std::vector<RunMetrics> run_experiment(const ModelConfig& model,
                                       const std::vector<ProcedureSpec>& procs,
                                       std::int64_t reps);

} // namespace egai
