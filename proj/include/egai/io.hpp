#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "egai/evidence.hpp"
#include "egai/metrics.hpp"
#include "egai/simharness.hpp"

namespace egai {

/// Input/config problem; carries the offending line (0 = whole file)
/// so the CLI can report it and exit with code 2.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, std::int64_t line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                          message
                                    : std::move(message)),
        line_(line) {}
  std::int64_t line() const { return line_; }

private:
  std::int64_t line_;
};

/// One row of an evidence stream file.
struct StreamRecord {
  std::int64_t t = 0;
  double value = 0.0;
  std::optional<int> label;
};

/// Parsed evidence stream: records plus the declared kind. Kind comes
/// from a `# kind=e` / `# kind=p` header comment, overridden by any
/// explicit kind passed by the caller.
struct StreamFile {
  std::vector<StreamRecord> records;
  std::optional<EvidenceKind> kind;
  bool has_labels = false;
};

/// Reads `t,value[,label]` CSV (UTF-8, LF). Throws ParseError with the
/// line number on malformed input; enforces strictly increasing t.
StreamFile read_stream_csv(std::istream& in);
StreamFile read_stream_csv_file(const std::string& path);

/// One JSONL decision record as written by the `test` command.
/// remaining_wealth and omega are the state after the step (omega is 0
/// for procedures without an allocation coefficient).
struct DecisionRecord {
  std::int64_t t = 0;
  double level = 0.0;
  double value = 0.0;
  bool reject = false;
  double remaining_wealth = 0.0;
  double omega = 0.0;
};

std::string decision_to_jsonl(const DecisionRecord& record);
std::vector<DecisionRecord> read_decisions_jsonl(std::istream& in);
std::vector<DecisionRecord> read_decisions_jsonl_file(const std::string& path);

/// Rebuilds a run from decision records for the estimators; labels may
/// be empty.
LabeledRun run_from_records(const std::vector<DecisionRecord>& records,
                            EvidenceKind kind, std::vector<int> labels = {});

/// Declarative experiment description, parsed from `key = value` lines.
struct ExperimentConfig {
  std::string model;      // "gaussian" | "ar1"
  std::string evidence = "conditional"; // gaussian only: or "marginal"
  std::int64_t T = 500;
  std::vector<double> pi1_grid;
  double mu_c = 3.0;
  double rho = 0.5;
  std::int64_t L = 30;
  double eta = 0.01;
  double t0 = -1.0;
  double alpha = 0.05;
  std::int64_t reps = 100;
  std::uint64_t seed = 1;
  std::vector<ProcedureSpec> procedures;
};

/// Parses the simulate config format: `#` comments, `key = value`
/// pairs, comma-separated lists, and per-procedure overrides spelled
/// `<procedure>.<param> = value`. Throws ParseError naming the field.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig parse_experiment_config_file(const std::string& path);

/// 17-significant-digit serialization so doubles round-trip exactly.
std::string format_double(double v);

/// Header + rows of the simulate output CSV.
std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics& m);

} // namespace egai
