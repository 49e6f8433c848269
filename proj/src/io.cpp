#include "egai/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace egai {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s, std::int64_t line,
                    const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse " + what + " '" + s + "'", line);
  }
}

std::int64_t parse_int(const std::string& s, std::int64_t line,
                       const std::string& what) {
  std::int64_t v = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError("cannot parse " + what + " '" + s + "'", line);
  return v;
}

} // namespace

StreamFile read_stream_csv(std::istream& in) {
  StreamFile out;
  std::string line;
  std::int64_t lineno = 0;
  bool header_seen = false;
  std::int64_t prev_t = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text[0] == '#') {
      const std::string body = trim(text.substr(1));
      if (body == "kind=e" || body == "kind=p") {
        const EvidenceKind declared =
            body == "kind=e" ? EvidenceKind::e_value : EvidenceKind::p_value;
        if (out.kind && *out.kind != declared)
          throw ParseError("conflicting kind declarations", lineno);
        out.kind = declared;
      }
      continue;
    }
    if (!header_seen) {
      const auto cols = split(text, ',');
      if (cols.size() < 2 || cols[0] != "t" || cols[1] != "value")
        throw ParseError("expected header 't,value[,label]'", lineno);
      if (cols.size() > 3 || (cols.size() == 3 && cols[2] != "label"))
        throw ParseError("expected header 't,value[,label]'", lineno);
      out.has_labels = cols.size() == 3;
      header_seen = true;
      continue;
    }
    const auto cols = split(text, ',');
    if (cols.size() != (out.has_labels ? 3u : 2u))
      throw ParseError("expected " + std::to_string(out.has_labels ? 3 : 2) +
                           " columns",
                       lineno);
    StreamRecord rec;
    rec.t = parse_int(cols[0], lineno, "t");
    rec.value = parse_double(cols[1], lineno, "value");
    if (out.has_labels) {
      const std::int64_t label = parse_int(cols[2], lineno, "label");
      if (label != 0 && label != 1)
        throw ParseError("label must be 0 or 1", lineno);
      rec.label = static_cast<int>(label);
    }
    if (rec.t <= prev_t)
      throw ParseError("t must be strictly increasing", lineno);
    prev_t = rec.t;
    out.records.push_back(rec);
  }
  return out;
}

StreamFile read_stream_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_stream_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string decision_to_jsonl(const DecisionRecord& r) {
  std::string out = "{\"t\":" + std::to_string(r.t);
  out += ",\"level\":" + format_double(r.level);
  out += ",\"value\":" + format_double(r.value);
  out += std::string(",\"reject\":") + (r.reject ? "true" : "false");
  out += ",\"remaining_wealth\":" + format_double(r.remaining_wealth);
  out += ",\"omega\":" + format_double(r.omega);
  out += "}";
  return out;
}

std::vector<DecisionRecord> read_decisions_jsonl(std::istream& in) {
  std::vector<DecisionRecord> out;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("malformed JSON record", lineno);
    try {
      DecisionRecord rec;
      rec.t = j.at("t").get<std::int64_t>();
      rec.level = j.at("level").get<double>();
      rec.value = j.at("value").get<double>();
      rec.reject = j.at("reject").get<bool>();
      rec.remaining_wealth = j.value("remaining_wealth", 0.0);
      rec.omega = j.value("omega", 0.0);
      out.push_back(rec);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad decision record: ") + e.what(),
                       lineno);
    }
  }
  return out;
}

std::vector<DecisionRecord> read_decisions_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_decisions_jsonl(in);
}

LabeledRun run_from_records(const std::vector<DecisionRecord>& records,
                            EvidenceKind kind, std::vector<int> labels) {
  if (!labels.empty() && labels.size() != records.size())
    throw ParseError("labels/decisions length mismatch");
  LabeledRun run;
  run.decisions.reserve(records.size());
  for (const auto& r : records) {
    const Evidence ev = kind == EvidenceKind::e_value ? Evidence::e(r.value)
                                                      : Evidence::p(r.value);
    run.decisions.push_back(Decision{r.t, r.level, ev, r.reject});
  }
  run.labels = std::move(labels);
  return run;
}

namespace {

struct KeyValue {
  std::string key;
  std::string value;
  std::int64_t line;
};

std::vector<KeyValue> read_key_values(std::istream& in) {
  std::vector<KeyValue> out;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", lineno);
    out.push_back(
        {trim(text.substr(0, eq)), trim(text.substr(eq + 1)), lineno});
  }
  return out;
}

void apply_rai_key(RaiConfig& cfg, const std::string& param,
                   const std::string& value, std::int64_t line) {
  const double v = parse_double(value, line, "field " + param);
  if (param == "alpha") cfg.alpha = v;
  else if (param == "omega1") cfg.omega1 = v;
  else if (param == "phi") cfg.phi = v;
  else if (param == "psi") cfg.psi = v;
  else if (param == "lambda") cfg.lambda = v;
  else if (param == "decay") cfg.decay = v;
  else throw ParseError("field " + param + ": unknown parameter", line);
}

void apply_gai_key(GaiConfig& cfg, const std::string& param,
                   const std::string& value, std::int64_t line) {
  const double v = parse_double(value, line, "field " + param);
  if (param == "alpha") cfg.alpha = v;
  else if (param == "w0") cfg.w0 = v;
  else if (param == "lambda") cfg.lambda = v;
  else throw ParseError("field " + param + ": unknown parameter", line);
}

} // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
  const auto kvs = read_key_values(in);
  ExperimentConfig cfg;
  std::vector<std::string> procedure_names;
  std::vector<KeyValue> rai_globals;
  std::vector<KeyValue> overrides;

  for (const auto& kv : kvs) {
    if (kv.key == "model") {
      if (kv.value != "gaussian" && kv.value != "ar1")
        throw ParseError("field model: expected 'gaussian' or 'ar1'", kv.line);
      cfg.model = kv.value;
    } else if (kv.key == "evidence") {
      if (kv.value != "conditional" && kv.value != "marginal")
        throw ParseError("field evidence: expected 'conditional' or 'marginal'",
                         kv.line);
      cfg.evidence = kv.value;
    } else if (kv.key == "T") {
      cfg.T = parse_int(kv.value, kv.line, "field T");
      if (cfg.T < 1) throw ParseError("field T: must be >= 1", kv.line);
    } else if (kv.key == "pi1") {
      for (const auto& item : split(kv.value, ','))
        cfg.pi1_grid.push_back(parse_double(item, kv.line, "field pi1"));
    } else if (kv.key == "mu_c") {
      cfg.mu_c = parse_double(kv.value, kv.line, "field mu_c");
    } else if (kv.key == "rho") {
      cfg.rho = parse_double(kv.value, kv.line, "field rho");
    } else if (kv.key == "L") {
      cfg.L = parse_int(kv.value, kv.line, "field L");
    } else if (kv.key == "eta") {
      cfg.eta = parse_double(kv.value, kv.line, "field eta");
    } else if (kv.key == "t0") {
      cfg.t0 = parse_double(kv.value, kv.line, "field t0");
    } else if (kv.key == "alpha") {
      cfg.alpha = parse_double(kv.value, kv.line, "field alpha");
    } else if (kv.key == "reps") {
      cfg.reps = parse_int(kv.value, kv.line, "field reps");
      if (cfg.reps < 1) throw ParseError("field reps: must be >= 1", kv.line);
    } else if (kv.key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(
          parse_int(kv.value, kv.line, "field seed"));
    } else if (kv.key == "procedures") {
      for (const auto& item : split(kv.value, ','))
        if (!item.empty()) procedure_names.push_back(item);
    } else if (kv.key.find('.') != std::string::npos) {
      overrides.push_back(kv);
    } else if (kv.key == "omega1" || kv.key == "phi" || kv.key == "psi" ||
               kv.key == "lambda" || kv.key == "decay" || kv.key == "w0") {
      rai_globals.push_back(kv);
    } else {
      throw ParseError("field " + kv.key + ": unknown key", kv.line);
    }
  }

  if (cfg.model.empty()) throw ParseError("field model: missing");
  if (cfg.pi1_grid.empty()) throw ParseError("field pi1: missing");
  if (procedure_names.empty()) throw ParseError("field procedures: missing");
  if (cfg.model == "ar1" && cfg.evidence != "conditional")
    throw ParseError("field evidence: marginal mode applies to the gaussian model");

  for (const auto& name : procedure_names) {
    ProcedureSpec spec;
    spec.name = name;
    try {
      spec.kind = parse_procedure(name);
    } catch (const std::invalid_argument& e) {
      throw ParseError("field procedures: " + std::string(e.what()));
    }
    if (is_rai(spec.kind)) {
      spec.rai.alpha = cfg.alpha;
      spec.rai.omega1 = std::min(0.005, 1.0 / static_cast<double>(cfg.T));
      spec.rai.lambda = (spec.kind == ProcedureKind::e_saffron ||
                         spec.kind == ProcedureKind::ps_rai)
                            ? 0.1
                            : 0.0;
    } else {
      spec.gai = gai_defaults(spec.kind, cfg.alpha);
    }
    for (const auto& kv : rai_globals) {
      if (is_rai(spec.kind)) {
        if (kv.key == "w0") continue;
        // Global lambda only applies to the adaptive procedures.
        if (kv.key == "lambda" && spec.kind != ProcedureKind::e_saffron &&
            spec.kind != ProcedureKind::ps_rai)
          continue;
        apply_rai_key(spec.rai, kv.key, kv.value, kv.line);
      } else {
        if (kv.key == "w0" || kv.key == "lambda") {
          if (kv.key == "lambda" && spec.kind != ProcedureKind::saffron)
            continue;
          apply_gai_key(spec.gai, kv.key, kv.value, kv.line);
        }
      }
    }
    for (const auto& kv : overrides) {
      const auto dot = kv.key.find('.');
      if (kv.key.substr(0, dot) != name) continue;
      const std::string param = kv.key.substr(dot + 1);
      if (is_rai(spec.kind))
        apply_rai_key(spec.rai, param, kv.value, kv.line);
      else
        apply_gai_key(spec.gai, param, kv.value, kv.line);
    }
    cfg.procedures.push_back(std::move(spec));
  }

  // Surface bad parameter values now, naming the offending procedure.
  for (auto& spec : cfg.procedures) {
    try {
      (void)spec.instantiate();
    } catch (const std::invalid_argument& e) {
      throw ParseError("field " + spec.name + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_experiment_config(in);
}

std::string metrics_csv_header() {
  return "pi1,procedure,fdr_mean,fdr_se,power_mean,power_se,"
         "mem_fdr_mean,mem_fdr_se,mem_power_mean,mem_power_se";
}

std::string metrics_csv_row(const RunMetrics& m) {
  std::string out = format_double(m.pi1);
  out += "," + m.procedure;
  out += "," + format_double(m.fdr_mean);
  out += "," + format_double(m.fdr_se);
  out += "," + format_double(m.power_mean);
  out += "," + format_double(m.power_se);
  out += "," + format_double(m.mem_fdr_mean);
  out += "," + format_double(m.mem_fdr_se);
  out += "," + format_double(m.mem_power_mean);
  out += "," + format_double(m.mem_power_se);
  return out;
}

} // namespace egai
