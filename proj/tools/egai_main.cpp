// egai: run online FDR procedures over evidence streams, simulate the
// bench experiments, and compute FDP-estimator diagnostics.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "egai/io.hpp"
#include "egai/metrics.hpp"
#include "egai/procedures.hpp"
#include "egai/simharness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;    // malformed input or config
constexpr int kExitContract = 3; // evidence kind / procedure mismatch

struct ProcedureFlags {
  std::string procedure = "e-lord";
  double alpha = 0.05;
  std::optional<double> omega1;
  double phi = 0.5;
  double psi = 0.5;
  std::optional<double> lambda;
  double decay = 1.0;
  std::optional<double> w0;
  std::vector<double> gamma;
};

egai::ProcedureSpec build_spec(const ProcedureFlags& flags) {
  egai::ProcedureSpec spec;
  spec.name = flags.procedure;
  spec.kind = egai::parse_procedure(flags.procedure);
  if (egai::is_rai(spec.kind)) {
    spec.rai.alpha = flags.alpha;
    spec.rai.omega1 = flags.omega1.value_or(0.005);
    spec.rai.phi = flags.phi;
    spec.rai.psi = flags.psi;
    const bool adaptive = spec.kind == egai::ProcedureKind::e_saffron ||
                          spec.kind == egai::ProcedureKind::ps_rai;
    spec.rai.lambda = flags.lambda.value_or(adaptive ? 0.1 : 0.0);
    spec.rai.decay = flags.decay;
  } else {
    spec.gai = egai::gai_defaults(spec.kind, flags.alpha);
    if (flags.lambda) spec.gai.lambda = *flags.lambda;
    if (flags.w0) spec.gai.w0 = *flags.w0;
    if (!flags.gamma.empty())
      spec.gai.gamma = egai::GammaSequence::from_weights(flags.gamma);
  }
  return spec;
}

int cmd_test(const std::string& input, const ProcedureFlags& flags,
             const std::string& kind_flag, const std::string& output) {
  egai::StreamFile stream;
  try {
    stream = egai::read_stream_csv_file(input);
  } catch (const egai::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::optional<egai::EvidenceKind> kind = stream.kind;
  if (kind_flag == "e") kind = egai::EvidenceKind::e_value;
  else if (kind_flag == "p") kind = egai::EvidenceKind::p_value;
  else if (!kind_flag.empty()) {
    std::cerr << "error: --kind must be 'e' or 'p'\n";
    return kExitInput;
  }
  if (!stream.records.empty() && !kind) {
    std::cerr << "error: evidence kind not declared (use --kind or a "
                 "'# kind=e' header comment)\n";
    return kExitInput;
  }

  egai::Procedure proc = [&] {
    const auto spec = build_spec(flags);
    return spec.instantiate();
  }();
  if (kind && *kind != egai::required_evidence(proc.kind())) {
    std::cerr << "error: " << egai::procedure_name(proc.kind()) << " expects "
              << (egai::required_evidence(proc.kind()) ==
                          egai::EvidenceKind::e_value
                      ? "e-values"
                      : "p-values")
              << "\n";
    return kExitContract;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!output.empty() && output != "-") {
    file.open(output);
    if (!file) {
      std::cerr << "error: cannot open " << output << "\n";
      return kExitInput;
    }
    out = &file;
  }

  for (const auto& rec : stream.records) {
    egai::Evidence ev = [&] {
      try {
        return *kind == egai::EvidenceKind::e_value
                   ? egai::Evidence::e(rec.value)
                   : egai::Evidence::p(rec.value);
      } catch (const std::invalid_argument& e) {
        throw egai::ParseError(std::string("record t=") +
                               std::to_string(rec.t) + ": " + e.what());
      }
    }();
    const egai::Decision d = proc.step(ev);
    egai::DecisionRecord row;
    row.t = rec.t;
    row.level = d.level;
    row.value = rec.value;
    row.reject = d.reject;
    row.remaining_wealth = proc.state().remaining_wealth;
    row.omega = proc.state().omega;
    *out << egai::decision_to_jsonl(row) << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::int64_t> reps_override,
                 std::optional<std::uint64_t> seed_override) {
  egai::ExperimentConfig cfg;
  try {
    cfg = egai::parse_experiment_config_file(config_path);
  } catch (const egai::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (reps_override) {
    if (*reps_override < 1) {
      std::cerr << "error: field reps: must be >= 1\n";
      return kExitInput;
    }
    cfg.reps = *reps_override;
  }
  if (seed_override) cfg.seed = *seed_override;

  std::filesystem::create_directories(out_dir);
  const auto out_path = std::filesystem::path(out_dir) / "results.csv";
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot open " << out_path.string() << "\n";
    return kExitInput;
  }

  out << egai::metrics_csv_header() << "\n";
  for (double pi1 : cfg.pi1_grid) {
    egai::ModelConfig model;
    if (cfg.model == "gaussian") {
      egai::GaussianConfig g;
      g.T = cfg.T;
      g.pi1 = pi1;
      g.mu_c = cfg.mu_c;
      g.rho = cfg.rho;
      g.L = cfg.L;
      g.seed = cfg.seed;
      g.evidence = cfg.evidence == "marginal"
                       ? egai::GaussianEvidenceMode::marginal
                       : egai::GaussianEvidenceMode::conditional;
      model = g;
    } else {
      egai::Ar1Config a;
      a.T = cfg.T;
      a.pi1 = pi1;
      a.mu_c = cfg.mu_c;
      a.eta = cfg.eta;
      a.t0 = cfg.t0;
      a.seed = cfg.seed;
      model = a;
    }
    std::vector<egai::RunMetrics> rows;
    try {
      rows = egai::run_experiment(model, cfg.procedures, cfg.reps);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInput;
    }
    for (const auto& row : rows) out << egai::metrics_csv_row(row) << "\n";
  }
  std::cout << "wrote " << out_path.string() << "\n";
  return kExitOk;
}

std::vector<int> parse_labels_file(const std::string& path,
                                   std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw egai::ParseError("cannot open " + path);
  std::vector<int> labels;
  std::string line;
  std::int64_t lineno = 0;
  bool header_seen = false;
  int label_col = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string text = line;
    if (text.empty() || text[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (!header_seen) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == "label") label_col = static_cast<int>(i);
      if (label_col < 0)
        throw egai::ParseError("labels file needs a 'label' column", lineno);
      header_seen = true;
      continue;
    }
    if (static_cast<int>(cols.size()) <= label_col)
      throw egai::ParseError("missing label column", lineno);
    const std::string& v = cols[label_col];
    if (v != "0" && v != "1")
      throw egai::ParseError("label must be 0 or 1", lineno);
    labels.push_back(v == "1" ? 1 : 0);
  }
  if (labels.size() != expected)
    throw egai::ParseError("labels file has " + std::to_string(labels.size()) +
                           " rows, expected " + std::to_string(expected));
  return labels;
}

int cmd_diagnose(const std::string& decisions_path, const std::string& labels_path,
                 const std::string& kind_flag, const std::string& estimator,
                 double lambda, double decay) {
  std::vector<egai::DecisionRecord> records;
  try {
    records = egai::read_decisions_jsonl_file(decisions_path);
  } catch (const egai::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  if (!kind_flag.empty() && kind_flag != "e" && kind_flag != "p") {
    std::cerr << "error: --kind must be 'e' or 'p'\n";
    return kExitInput;
  }
  const egai::EvidenceKind kind = kind_flag == "p"
                                      ? egai::EvidenceKind::p_value
                                      : egai::EvidenceKind::e_value;
  std::vector<int> labels;
  if (!labels_path.empty()) {
    try {
      labels = parse_labels_file(labels_path, records.size());
    } catch (const egai::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInput;
    }
  }

  egai::LabeledRun run;
  try {
    run = egai::run_from_records(records, kind, labels);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  using Estimator = std::function<double(const egai::LabeledRun&, std::int64_t)>;
  Estimator fn;
  if (estimator == "lord-e" || estimator == "pl-rai") {
    fn = [](const egai::LabeledRun& r, std::int64_t t) {
      return egai::fdp_hat_lord_e(r, t);
    };
  } else if (estimator == "saffron-e") {
    fn = [lambda](const egai::LabeledRun& r, std::int64_t t) {
      return egai::fdp_hat_saffron_e(r, t, lambda);
    };
  } else if (estimator == "ps-rai") {
    fn = [lambda](const egai::LabeledRun& r, std::int64_t t) {
      return egai::fdp_hat_ps_rai(r, t, lambda);
    };
  } else if (estimator == "mem-lord-e" || estimator == "mem-pl-rai") {
    fn = [decay](const egai::LabeledRun& r, std::int64_t t) {
      return egai::mem_fdp_hat_lord(r, t, decay);
    };
  } else if (estimator == "mem-saffron-e") {
    fn = [lambda, decay](const egai::LabeledRun& r, std::int64_t t) {
      return egai::mem_fdp_hat_saffron(r, t, decay, lambda);
    };
  } else if (estimator == "mem-ps-rai") {
    fn = [lambda, decay](const egai::LabeledRun& r, std::int64_t t) {
      return egai::mem_fdp_hat_ps_rai(r, t, decay, lambda);
    };
  } else if (estimator == "gai-lord") {
    fn = [](const egai::LabeledRun& r, std::int64_t t) {
      return egai::fdp_hat_gai_lord(r, t);
    };
  } else if (estimator == "gai-saffron") {
    fn = [lambda](const egai::LabeledRun& r, std::int64_t t) {
      return egai::fdp_hat_gai_saffron(r, t, lambda);
    };
  } else if (estimator == "star-e") {
    fn = [](const egai::LabeledRun& r, std::int64_t t) {
      return egai::fdp_star_e(r, t);
    };
  } else if (estimator == "mem-star") {
    fn = [decay](const egai::LabeledRun& r, std::int64_t t) {
      return egai::mem_fdp_star(r, t, decay);
    };
  } else if (estimator == "star-e-ind") {
    fn = [](const egai::LabeledRun& r, std::int64_t t) {
      return egai::fdp_star_e_ind(r, t);
    };
  } else {
    std::cerr << "error: unknown estimator '" << estimator << "'\n";
    return kExitInput;
  }

  const bool needs_labels = estimator == "star-e" || estimator == "mem-star" ||
                            estimator == "star-e-ind";
  if ((needs_labels || !labels.empty()) && !run.labeled()) {
    std::cerr << "error: estimator '" << estimator << "' needs --labels\n";
    return kExitInput;
  }

  std::cout << "t,fdp_hat";
  if (run.labeled()) std::cout << ",fdp,power,mem_fdp,mem_power";
  std::cout << "\n";
  for (std::int64_t t = 1; t <= run.size(); ++t) {
    std::cout << records[t - 1].t << "," << egai::format_double(fn(run, t));
    if (run.labeled()) {
      std::cout << "," << egai::format_double(egai::fdp(run, t)) << ","
                << egai::format_double(egai::power(run, t)) << ","
                << egai::format_double(egai::mem_fdp(run, t, decay)) << ","
                << egai::format_double(egai::mem_power(run, t, decay));
    }
    std::cout << "\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"online FDR control procedures on evidence streams"};
  app.require_subcommand(1);

  ProcedureFlags flags;
  std::string input, output, kind_flag;

  auto* test = app.add_subcommand(
      "test", "run a procedure over an evidence stream (JSONL decisions)");
  test->add_option("--input,-i", input, "evidence CSV: t,value[,label]")
      ->required();
  test->add_option("--output,-o", output, "JSONL output path (default stdout)");
  test->add_option("--procedure", flags.procedure,
                   "e-lord|e-saffron|pl-rai|ps-rai|e-lond|lord++|saffron");
  test->add_option("--kind", kind_flag, "evidence kind: e or p");
  test->add_option("--alpha", flags.alpha, "target FDR level");
  test->add_option("--omega1", flags.omega1, "initial allocation coefficient");
  test->add_option("--phi", flags.phi, "stimulation intensity");
  test->add_option("--psi", flags.psi, "risk regulation");
  test->add_option("--lambda", flags.lambda, "adaptivity/candidate threshold");
  test->add_option("--decay", flags.decay, "memory decay d");
  test->add_option("--w0", flags.w0, "baseline initial wealth");
  test->add_option("--gamma", flags.gamma,
                   "explicit gamma weights for the baselines")
      ->delimiter(',');

  std::string config_path, out_dir = ".";
  std::optional<std::int64_t> reps_override;
  std::optional<std::uint64_t> seed_override;
  auto* simulate = app.add_subcommand(
      "simulate", "run a simulation sweep from a config file (CSV results)");
  simulate->add_option("--config,-c", config_path, "experiment config file")
      ->required();
  simulate->add_option("--output-dir,-d", out_dir, "output directory");
  simulate->add_option("--reps", reps_override, "override config reps");
  simulate->add_option("--seed", seed_override, "override config seed");

  std::string decisions_path, labels_path, estimator = "lord-e";
  double diag_lambda = 0.1, diag_decay = 1.0;
  auto* diagnose = app.add_subcommand(
      "diagnose", "FDP-estimator trajectories from a decision log");
  diagnose->add_option("--decisions", decisions_path, "JSONL decision log")
      ->required();
  diagnose->add_option("--labels", labels_path,
                       "CSV with a 'label' column (enables fdp/power)");
  diagnose->add_option("--kind", kind_flag, "evidence kind: e or p");
  diagnose->add_option("--estimator", estimator,
                       "lord-e|saffron-e|pl-rai|ps-rai|mem-lord-e|"
                       "mem-saffron-e|mem-pl-rai|mem-ps-rai|gai-lord|"
                       "gai-saffron|star-e|mem-star|star-e-ind");
  diagnose->add_option("--lambda", diag_lambda, "lambda for adaptive estimators");
  diagnose->add_option("--decay", diag_decay, "decay for mem estimators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (test->parsed()) return cmd_test(input, flags, kind_flag, output);
    if (simulate->parsed())
      return cmd_simulate(config_path, out_dir, reps_override, seed_override);
    return cmd_diagnose(decisions_path, labels_path, kind_flag, estimator,
                        diag_lambda, diag_decay);
  } catch (const egai::EvidenceMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
