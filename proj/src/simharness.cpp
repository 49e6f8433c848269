#include "egai/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace egai {

double ar1_rho(const Ar1Config& config, std::int64_t t) {
  const double t0 = config.t0 < 0.0 ? static_cast<double>(config.T) / 2.0
                                    : config.t0;
  return 2.0 / (1.0 + std::exp(-config.eta * (static_cast<double>(t) - t0))) -
         1.0;
}

BandedCholesky::BandedCholesky(std::int64_t n, std::int64_t bandwidth,
                               const std::vector<double>& band)
    : n_(n), bw_(bandwidth), g_(band) {
  if (n < 1 || bandwidth < 0 ||
      static_cast<std::int64_t>(band.size()) != n * (bandwidth + 1))
    throw std::invalid_argument("bad band dimensions");
}

double BandedCholesky::at(std::int64_t i, std::int64_t j) const {
  if (j > i || i - j > bw_) return 0.0;
  return g_[i * (bw_ + 1) + (j - i + bw_)];
}

BandedCholesky BandedCholesky::gaussian_covariance(std::int64_t n, double rho,
                                                   std::int64_t bandwidth) {
  if (n < 1) throw std::invalid_argument("covariance size must be >= 1");
  if (bandwidth < 0) throw std::invalid_argument("bandwidth must be >= 0");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("rho must lie in [0,1)");
  const std::int64_t w = bandwidth + 1;
  std::vector<double> g(n * w, 0.0);
  auto idx = [&](std::int64_t i, std::int64_t j) {
    return i * w + (j - i + bandwidth);
  };
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t lo = std::max<std::int64_t>(0, i - bandwidth);
    for (std::int64_t j = lo; j <= i; ++j) {
      double s = std::pow(rho, static_cast<double>(i - j));
      const std::int64_t klo = std::max(lo, j - bandwidth);
      for (std::int64_t k = klo; k < j; ++k)
        s -= g[idx(i, k)] * g[idx(j, k)];
      if (j < i) {
        g[idx(i, j)] = s / g[idx(j, j)];
      } else {
        if (!(s > 0.0))
          throw std::invalid_argument(
              "covariance is not positive definite (rho/L too aggressive)");
        g[idx(i, i)] = std::sqrt(s);
      }
    }
  }
  return BandedCholesky(n, bandwidth, g);
}

SampledStream sample_gaussian_stream(const GaussianConfig& config, Rng& rng) {
  const auto chol =
      BandedCholesky::gaussian_covariance(config.T, config.rho, config.L);
  SampledStream out;
  out.labels.resize(config.T);
  for (auto& label : out.labels) label = rng.bernoulli(config.pi1) ? 1 : 0;
  std::vector<double> z(config.T);
  for (auto& v : z) v = rng.normal();
  out.x.resize(config.T);
  for (std::int64_t i = 0; i < config.T; ++i) {
    double acc = config.mu_c * out.labels[i];
    const std::int64_t lo = std::max<std::int64_t>(0, i - config.L);
    for (std::int64_t k = lo; k <= i; ++k) acc += chol.at(i, k) * z[k];
    out.x[i] = acc;
  }
  return out;
}

SampledStream sample_ar1_stream(const Ar1Config& config, Rng& rng) {
  SampledStream out;
  out.labels.resize(config.T);
  out.x.resize(config.T);
  double prev = 0.0;
  for (std::int64_t t = 1; t <= config.T; ++t) {
    const int label = rng.bernoulli(config.pi1) ? 1 : 0;
    out.labels[t - 1] = label;
    const double x =
        ar1_rho(config, t) * prev + config.mu_c * label + rng.normal();
    out.x[t - 1] = x;
    prev = x;
  }
  return out;
}

GaussianEvidenceModel::GaussianEvidenceModel(const GaussianConfig& config)
    : config_(config),
      chol_(BandedCholesky::gaussian_covariance(config.T, config.rho,
                                                config.L)) {
  whitened_.reserve(config.T);
}

double GaussianEvidenceModel::conditional_mean() const {
  const std::int64_t i = t_;
  double m = 0.0;
  const std::int64_t lo = std::max<std::int64_t>(0, i - config_.L);
  for (std::int64_t k = lo; k < i; ++k) m += chol_.at(i, k) * whitened_[k];
  return m;
}

double GaussianEvidenceModel::conditional_sd() const {
  return chol_.at(t_, t_);
}

std::pair<Evidence, Evidence> GaussianEvidenceModel::step(double x,
                                                          int theta) {
  if (t_ >= config_.T) throw std::logic_error("stream longer than T");
  const double m = conditional_mean(); // null conditional mean
  const double sd = conditional_sd();
  const double var = sd * sd;
  const double centered = x - m;
  // Conditional-Gaussian likelihood ratio, mean shift mu_c versus 0.
  const double e =
      std::exp(config_.mu_c * centered / var -
               config_.mu_c * config_.mu_c / (2.0 * var));
  const double p = normal_upper_tail(centered / sd);
  whitened_.push_back((centered - config_.mu_c * theta) / sd);
  t_ += 1;
  return {Evidence::e(e), Evidence::p(p)};
}

std::pair<Evidence, Evidence> ar1_evidence(double x, double x_prev, double rho,
                                           const Ar1Config& config) {
  const double r = x - rho * x_prev;
  const double e = std::exp(config.mu_c * r - config.mu_c * config.mu_c / 2.0);
  return {Evidence::e(e), Evidence::p(normal_upper_tail(r))};
}

Procedure ProcedureSpec::instantiate() const {
  if (is_rai(kind)) return Procedure::init(kind, rai);
  return Procedure::init(kind, gai);
}

double ProcedureSpec::mem_decay() const {
  return is_rai(kind) ? rai.decay : 1.0;
}

std::pair<std::vector<Evidence>, std::vector<Evidence>> compute_evidence(
    const ModelConfig& model, const SampledStream& stream) {
  std::vector<Evidence> es;
  std::vector<Evidence> ps;
  const auto n = static_cast<std::int64_t>(stream.x.size());
  es.reserve(n);
  ps.reserve(n);
  if (const auto* gauss = std::get_if<GaussianConfig>(&model)) {
    if (gauss->evidence == GaussianEvidenceMode::marginal) {
      const double mu = gauss->mu_c;
      for (std::int64_t t = 1; t <= n; ++t) {
        const double x = stream.x[t - 1];
        es.push_back(Evidence::e(std::exp(mu * x - mu * mu / 2.0)));
        ps.push_back(Evidence::p(normal_upper_tail(x)));
      }
      return {std::move(es), std::move(ps)};
    }
    GaussianEvidenceModel m(*gauss);
    for (std::int64_t t = 1; t <= n; ++t) {
      auto [e, p] = m.step(stream.x[t - 1], stream.labels[t - 1]);
      es.push_back(e);
      ps.push_back(p);
    }
  } else {
    const auto& ar1 = std::get<Ar1Config>(model);
    double prev = 0.0;
    for (std::int64_t t = 1; t <= n; ++t) {
      auto [e, p] =
          ar1_evidence(stream.x[t - 1], prev, ar1_rho(ar1, t), ar1);
      es.push_back(e);
      ps.push_back(p);
      prev = stream.x[t - 1];
    }
  }
  return {std::move(es), std::move(ps)};
}

LabeledRun drive_procedure(Procedure& proc, const SampledStream& stream,
                           const std::vector<Evidence>& evidence) {
  LabeledRun run;
  run.labels = stream.labels;
  run.decisions.reserve(evidence.size());
  for (const Evidence& ev : evidence) run.decisions.push_back(proc.step(ev));
  return run;
}

namespace {

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    n += 1;
  }
  double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
  double se() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) /
                          static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

std::uint64_t model_seed(const ModelConfig& model) {
  if (const auto* gauss = std::get_if<GaussianConfig>(&model))
    return gauss->seed;
  return std::get<Ar1Config>(model).seed;
}

double model_pi1(const ModelConfig& model) {
  if (const auto* gauss = std::get_if<GaussianConfig>(&model))
    return gauss->pi1;
  return std::get<Ar1Config>(model).pi1;
}

} // namespace

std::vector<RunMetrics> run_experiment(const ModelConfig& model,
                                       const std::vector<ProcedureSpec>& procs,
                                       std::int64_t reps) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const std::uint64_t seed = model_seed(model);
  struct Cell {
    Accumulator fdr, power, mem_fdr, mem_power;
  };
  std::vector<Cell> cells(procs.size());

  for (std::int64_t rep = 0; rep < reps; ++rep) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(rep));
    SampledStream stream;
    if (const auto* gauss = std::get_if<GaussianConfig>(&model))
      stream = sample_gaussian_stream(*gauss, rng);
    else
      stream = sample_ar1_stream(std::get<Ar1Config>(model), rng);
    const auto [es, ps] = compute_evidence(model, stream);
    const auto T = static_cast<std::int64_t>(stream.x.size());

    for (std::size_t i = 0; i < procs.size(); ++i) {
      Procedure proc = procs[i].instantiate();
      const auto& evidence =
          required_evidence(procs[i].kind) == EvidenceKind::e_value ? es : ps;
      LabeledRun run = drive_procedure(proc, stream, evidence);
      const double d = procs[i].mem_decay();
      cells[i].fdr.add(fdp(run, T));
      cells[i].power.add(power(run, T));
      cells[i].mem_fdr.add(mem_fdp(run, T, d));
      cells[i].mem_power.add(mem_power(run, T, d));
    }
  }

  std::vector<RunMetrics> out;
  out.reserve(procs.size());
  for (std::size_t i = 0; i < procs.size(); ++i) {
    RunMetrics m;
    m.procedure = procs[i].name;
    m.pi1 = model_pi1(model);
    m.reps = reps;
    m.fdr_mean = cells[i].fdr.mean();
    m.fdr_se = cells[i].fdr.se();
    m.power_mean = cells[i].power.mean();
    m.power_se = cells[i].power.se();
    m.mem_fdr_mean = cells[i].mem_fdr.mean();
    m.mem_fdr_se = cells[i].mem_fdr.se();
    m.mem_power_mean = cells[i].mem_power.mean();
    m.mem_power_se = cells[i].mem_power.se();
    out.push_back(std::move(m));
  }
  return out;
}

} // namespace egai
