#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qftqkd/attacks.hpp"
#include "qftqkd/detection.hpp"
#include "qftqkd/errors.hpp"
#include "qftqkd/json_io.hpp"
#include "qftqkd/montecarlo.hpp"
#include "qftqkd/protocol.hpp"

namespace {

using namespace qftqkd;
using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitDisagreement = 4;

struct Options {
  std::string builtin;
  std::string scheme_file;
  int key_qubits = 4;
  std::string eve = "keys";
  std::string eve_file;
  std::string stat = "mean";
  std::string protocol = "two_pass_qkd";
  std::uint64_t trials = 10000;
  std::optional<std::uint64_t> seed;
  int mismatch_limit = 0;
  int copies = 4;
  int target_wire = -1;
  int max_key_qubits = 8;
  std::string format = "csv";
  std::string out;
  bool dump_transcripts = false;
};

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::uint64_t resolve_seed(const Options& opts) {
  if (opts.seed) return *opts.seed;
  if (const char* env = std::getenv("QFTQKD_SEED")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::invalid_argument("QFTQKD_SEED is not an unsigned integer");
    return value;
  }
  return 0;
}

std::string scheme_label(const Options& opts) {
  return opts.scheme_file.empty() ? opts.builtin : std::string("custom");
}

VerificationScheme resolve_scheme(const Options& opts, std::uint64_t seed) {
  const bool has_builtin = !opts.builtin.empty();
  const bool has_file = !opts.scheme_file.empty();
  if (has_builtin == has_file)
    throw std::invalid_argument("provide exactly one scheme source: --builtin or --scheme-file");
  if (has_file) return load_scheme_file(opts.scheme_file);
  const auto kind = scheme_kind_from_string(opts.builtin);
  if (!kind) throw std::invalid_argument("unknown builtin scheme '" + opts.builtin + "'");
  if (opts.key_qubits < 1) throw std::invalid_argument("--key-qubits must be at least 1");
  auto rng = seeded_engine(seed);
  return build_scheme(*kind, opts.key_qubits, rng);
}

EveStrategy resolve_eve(const Options& opts) {
  if (!opts.eve_file.empty()) {
    std::ifstream in(opts.eve_file);
    if (!in) throw std::invalid_argument("cannot open strategy file: " + opts.eve_file);
    return strategy_from_json(nlohmann::json::parse(in));
  }
  if (const auto kind = eve_kind_from_string(opts.eve); kind && *kind != EveKind::subset) {
    EveStrategy strategy;
    strategy.kind = *kind;
    return strategy;
  }
  const std::string prefix = "subset=";
  if (opts.eve.rfind(prefix, 0) == 0) {
    std::vector<int> indices;
    std::string rest = opts.eve.substr(prefix.size());
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t used = 0;
      indices.push_back(std::stoi(rest.substr(pos), &used));
      pos += used;
      if (pos < rest.size() && rest[pos] == ',') ++pos;
    }
    if (indices.empty()) throw std::invalid_argument("subset= needs at least one wire index");
    return EveStrategy::subset(std::move(indices));
  }
  throw std::invalid_argument("bad --eve value '" + opts.eve +
                              "'; expected none|full|keys|subset=i,j,...");
}

Statistic resolve_stat(const Options& opts) {
  if (opts.stat == "mean") return Statistic::mean;
  if (opts.stat == "min") return Statistic::min;
  throw std::invalid_argument("bad --stat value '" + opts.stat + "'; expected mean|min");
}

ProtocolId resolve_protocol(const Options& opts) {
  const auto id = protocol_from_string(opts.protocol);
  if (!id)
    throw std::invalid_argument(
        "bad --protocol value '" + opts.protocol +
        "'; expected two_pass_qkd|three_pass_encryption|bb84");
  return *id;
}

void write_output(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write to " + out);
  file << text;
}

// Shared row shape for analyze, simulate, and figures.
struct DetectionRow {
  std::string scheme;
  int key_qubits = 0;
  std::string statistic;
  std::string method;
  double probability = 0.0;
  std::uint64_t trials = 0;  // 0 for exact analytic rows
  double stderr_value = 0.0;
  std::uint64_t seed = 0;
};

const char* kDetectionHeader = "scheme,key_qubits,statistic,method,probability,trials,stderr,seed\n";

std::string rows_to_csv(const std::vector<DetectionRow>& rows) {
  std::string text = kDetectionHeader;
  for (const auto& row : rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%s,%s,%llu,%s,%llu\n", row.scheme.c_str(),
                  row.key_qubits, row.statistic.c_str(), row.method.c_str(),
                  format_double(row.probability).c_str(),
                  static_cast<unsigned long long>(row.trials),
                  format_double(row.stderr_value).c_str(),
                  static_cast<unsigned long long>(row.seed));
    text += buf;
  }
  return text;
}

std::string rows_to_json(const std::vector<DetectionRow>& rows) {
  ordered_json doc = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json item;
    item["scheme"] = row.scheme;
    item["key_qubits"] = row.key_qubits;
    item["statistic"] = row.statistic;
    item["method"] = row.method;
    item["probability"] = row.probability;
    item["trials"] = row.trials;
    item["stderr"] = row.stderr_value;
    item["seed"] = row.seed;
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::string render_rows(const std::vector<DetectionRow>& rows, const std::string& format) {
  if (format == "csv") return rows_to_csv(rows);
  if (format == "json") return rows_to_json(rows);
  throw std::invalid_argument("bad --format value '" + format + "'; expected csv|json");
}

DetectionRow row_from_report(const Options& opts, const VerificationScheme& scheme,
                             const DetectionReport& report, std::uint64_t seed) {
  DetectionRow row;
  row.scheme = scheme_label(opts);
  row.key_qubits = scheme.num_key_qubits();
  row.statistic = to_string(report.statistic);
  row.method = "analytic";
  row.probability = report.probability;
  row.trials = report.sampled ? report.trials : 0;
  row.stderr_value = report.confidence_halfwidth / 3.0;
  row.seed = seed;
  return row;
}

DetectionRow row_from_estimate(const std::string& scheme, int key_qubits,
                               const std::string& statistic, const Estimate& estimate) {
  DetectionRow row;
  row.scheme = scheme;
  row.key_qubits = key_qubits;
  row.statistic = statistic;
  row.method = "montecarlo";
  row.probability = estimate.mean;
  row.trials = estimate.trials;
  row.stderr_value = estimate.standard_error;
  row.seed = estimate.seed;
  return row;
}

int cmd_analyze(const Options& opts) {
  const std::uint64_t seed = resolve_seed(opts);
  const auto scheme = resolve_scheme(opts, seed);
  const auto touch = touch_set_of(resolve_eve(opts), scheme);
  const auto statistic = resolve_stat(opts);
  const auto mode = scheme.num_key_qubits() > kMaxExhaustiveKeyBits
                        ? BSpaceMode::sample(opts.trials, seed)
                        : BSpaceMode::exhaustive();
  const auto report = aggregate_detection(scheme, touch, statistic, mode);
  write_output(render_rows({row_from_report(opts, scheme, report, seed)}, opts.format),
               opts.out);
  return 0;
}

int cmd_simulate(const Options& opts) {
  if (opts.dump_transcripts && opts.out.empty())
    throw std::invalid_argument("--dump-transcripts needs --out");
  if (opts.trials == 0) throw std::invalid_argument("--trials must be at least 1");
  const std::uint64_t seed = resolve_seed(opts);
  const auto scheme = resolve_scheme(opts, seed);
  const auto eve = resolve_eve(opts);
  const auto protocol = resolve_protocol(opts);
  const auto statistic = resolve_stat(opts);

  ProtocolParams params;
  params.scheme = scheme;
  params.mismatch_limit = opts.mismatch_limit;
  if (statistic == Statistic::min)
    params.fixed_key_bits = worst_case_key_bits(scheme, touch_set_of(eve, scheme));

  Estimate estimate;
  estimate.trials = opts.trials;
  estimate.seed = seed;
  if (opts.dump_transcripts) {
    ordered_json transcripts = ordered_json::array();
    std::uint64_t failures = 0;
    for (std::uint64_t i = 0; i < opts.trials; ++i) {
      auto rng = derive_stream(seed, i);
      const auto transcript = run_protocol(protocol, params, eve, rng);
      if (!transcript.pass) ++failures;
      transcripts.push_back(transcript_to_json(transcript));
    }
    estimate.mean = static_cast<double>(failures) / static_cast<double>(opts.trials);
    estimate.standard_error =
        std::sqrt(estimate.mean * (1.0 - estimate.mean) / static_cast<double>(opts.trials));
    std::ofstream file(opts.out + ".transcripts.json", std::ios::binary);
    if (!file) throw std::runtime_error("cannot write to " + opts.out + ".transcripts.json");
    file << transcripts.dump(2) << "\n";
  } else {
    estimate = estimate_detection(protocol, params, eve, BPolicy::random_keys(), opts.trials,
                                  seed);
  }
  write_output(render_rows({row_from_estimate(scheme_label(opts), scheme.num_key_qubits(),
                                              opts.stat, estimate)},
                           opts.format),
               opts.out);
  return 0;
}

int cmd_attack(const Options& opts) {
  if (opts.trials == 0) throw std::invalid_argument("--trials must be at least 1");
  const std::uint64_t seed = resolve_seed(opts);
  const auto scheme = resolve_scheme(opts, seed);
  const auto protocol = resolve_protocol(opts);

  struct MetricRow {
    std::string metric;
    double value;
  };
  std::vector<MetricRow> metrics;
  int target = opts.target_wire;

  if (protocol == ProtocolId::bb84) {
    if (target < 0) {
      const auto keys = scheme.key_positions();
      if (keys.empty()) throw std::invalid_argument("scheme has no key wire to target");
      target = keys.front();
    }
    std::uint64_t identified = 0;
    std::uint64_t correct = 0;
    std::uint64_t detected = 0;
    for (std::uint64_t i = 0; i < opts.trials; ++i) {
      auto rng = derive_stream(seed, i);
      const auto result = many_copies_attack_bb84(scheme, target, opts.copies, rng);
      if (result.detected) ++detected;
      if (result.basis_identified) {
        ++identified;
        if (result.inferred_bit == result.true_bit) ++correct;
      }
    }
    const auto n = static_cast<double>(opts.trials);
    metrics.push_back({"identified_rate", static_cast<double>(identified) / n});
    metrics.push_back({"correct_given_identified_rate",
                       identified ? static_cast<double>(correct) / static_cast<double>(identified)
                                  : 0.0});
    metrics.push_back({"detected_rate", static_cast<double>(detected) / n});
  } else if (protocol == ProtocolId::two_pass_qkd) {
    const auto eve = resolve_eve(opts);
    ProtocolParams params;
    params.scheme = scheme;
    std::uint64_t cumulative = 0;
    std::uint64_t copy_detections = 0;
    for (std::uint64_t i = 0; i < opts.trials; ++i) {
      auto rng = derive_stream(seed, i);
      const auto result = many_copies_attack_two_pass(params, eve, opts.copies, rng);
      if (result.detected) ++cumulative;
      for (auto d : result.per_copy_detected) copy_detections += d;
    }
    const auto n = static_cast<double>(opts.trials);
    metrics.push_back({"cumulative_detection_rate", static_cast<double>(cumulative) / n});
    metrics.push_back({"per_copy_detection_rate",
                       static_cast<double>(copy_detections) /
                           (n * static_cast<double>(opts.copies))});
  } else {
    throw std::invalid_argument("attack supports --protocol bb84 or two_pass_qkd");
  }

  std::string text;
  if (opts.format == "csv") {
    text = "protocol,copies,target_wire,trials,metric,value,seed\n";
    for (const auto& m : metrics) {
      char buf[192];
      std::snprintf(buf, sizeof buf, "%s,%d,%d,%llu,%s,%s,%llu\n", to_string(protocol),
                    opts.copies, protocol == ProtocolId::bb84 ? target : -1,
                    static_cast<unsigned long long>(opts.trials), m.metric.c_str(),
                    format_double(m.value).c_str(), static_cast<unsigned long long>(seed));
      text += buf;
    }
  } else if (opts.format == "json") {
    ordered_json doc = ordered_json::array();
    for (const auto& m : metrics) {
      ordered_json item;
      item["protocol"] = to_string(protocol);
      item["copies"] = opts.copies;
      item["target_wire"] = protocol == ProtocolId::bb84 ? target : -1;
      item["trials"] = opts.trials;
      item["metric"] = m.metric;
      item["value"] = m.value;
      item["seed"] = seed;
      doc.push_back(std::move(item));
    }
    text = doc.dump(2) + "\n";
  } else {
    throw std::invalid_argument("bad --format value '" + opts.format + "'; expected csv|json");
  }
  write_output(text, opts.out);
  return 0;
}

// Simulation budget per curve point: full register states get expensive past
// ~16 wires, so the requested trial count tapers with the qubit count. The
// effective count lands in the trials column, keeping every row honest.
std::uint64_t figure_trials(std::uint64_t requested, int total_qubits) {
  const std::uint64_t budget =
      total_qubits < 26 ? (std::uint64_t(1) << (26 - total_qubits)) : 1;
  return std::min(requested, std::max<std::uint64_t>(8, budget));
}

int cmd_figures(const Options& opts) {
  if (opts.max_key_qubits < 1)
    throw std::invalid_argument("--max-key-qubits must be at least 1");
  if (opts.trials == 0) throw std::invalid_argument("--trials must be at least 1");
  const std::uint64_t seed = resolve_seed(opts);

  const SchemeKind kinds[] = {SchemeKind::pair_compartment, SchemeKind::pair_flat,
                              SchemeKind::triple_compartment, SchemeKind::triple_flat};
  const Statistic stats[] = {Statistic::mean, Statistic::min};

  std::vector<DetectionRow> rows;
  for (const auto kind : kinds) {
    for (int k = 1; k <= opts.max_key_qubits; ++k) {
      auto rng = seeded_engine(seed);
      const auto scheme = build_scheme(kind, k, rng);
      const auto touch = EveTouchSet::of(scheme.key_positions());
      for (const auto statistic : stats) {
        const auto report = aggregate_detection(scheme, touch, statistic);
        DetectionRow analytic;
        analytic.scheme = to_string(kind);
        analytic.key_qubits = k;
        analytic.statistic = to_string(statistic);
        analytic.method = "analytic";
        analytic.probability = report.probability;
        analytic.seed = seed;
        rows.push_back(analytic);

        ProtocolParams params;
        params.scheme = scheme;
        const BPolicy policy = statistic == Statistic::min
                                   ? BPolicy::fixed_keys(worst_case_key_bits(scheme, touch))
                                   : BPolicy::random_keys();
        const auto estimate = estimate_detection(
            ProtocolId::two_pass_qkd, params, EveStrategy::keys(), policy,
            figure_trials(opts.trials, scheme.total_qubits), seed);
        rows.push_back(
            row_from_estimate(to_string(kind), k, to_string(statistic), estimate));
      }
    }
  }
  write_output(render_rows(rows, opts.format), opts.out);
  return 0;
}

int cmd_crossvalidate(const Options& opts) {
  if (opts.trials == 0) throw std::invalid_argument("--trials must be at least 1");
  const std::uint64_t seed = resolve_seed(opts);
  const auto scheme = resolve_scheme(opts, seed);
  const auto touch = touch_set_of(resolve_eve(opts), scheme);
  const auto statistic = resolve_stat(opts);
  const auto result = crossvalidate(scheme, touch, statistic, opts.trials, seed);

  std::string text;
  if (opts.format == "csv") {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%s,%s,%s,%llu,%s,%llu\n",
                  scheme_label(opts).c_str(), scheme.num_key_qubits(), opts.stat.c_str(),
                  format_double(result.analytic.probability).c_str(),
                  format_double(result.empirical.mean).c_str(),
                  format_double(result.empirical.standard_error).c_str(),
                  static_cast<unsigned long long>(result.empirical.trials),
                  result.agree ? "yes" : "no", static_cast<unsigned long long>(seed));
    text = std::string("scheme,key_qubits,statistic,analytic,empirical,stderr,trials,agree,seed\n") +
           buf;
  } else if (opts.format == "json") {
    ordered_json item;
    item["scheme"] = scheme_label(opts);
    item["key_qubits"] = scheme.num_key_qubits();
    item["statistic"] = opts.stat;
    item["analytic"] = result.analytic.probability;
    item["empirical"] = result.empirical.mean;
    item["stderr"] = result.empirical.standard_error;
    item["trials"] = result.empirical.trials;
    item["agree"] = result.agree;
    item["seed"] = seed;
    text = ordered_json::array({item}).dump(2) + "\n";
  } else {
    throw std::invalid_argument("bad --format value '" + opts.format + "'; expected csv|json");
  }
  write_output(text, opts.out);
  return result.agree ? 0 : kExitDisagreement;
}

void add_scheme_options(CLI::App* cmd, Options& opts) {
  cmd->add_option("--builtin", opts.builtin,
                  "builtin scheme kind: bb84_random, qft_random, pair_compartment, pair_flat, "
                  "triple_compartment, triple_flat");
  cmd->add_option("--scheme-file", opts.scheme_file, "scheme JSON file");
  cmd->add_option("--key-qubits", opts.key_qubits, "key qubits for --builtin (default 4)");
}

void add_output_options(CLI::App* cmd, Options& opts) {
  cmd->add_option("--format", opts.format, "output format: csv or json (default csv)");
  cmd->add_option("--out", opts.out, "output path (default stdout)");
  cmd->add_option("--seed", opts.seed, "RNG seed (falls back to QFTQKD_SEED, then 0)");
}

void add_eve_options(CLI::App* cmd, Options& opts) {
  cmd->add_option("--eve", opts.eve, "eavesdropper: none|full|keys|subset=i,j,... (default keys)");
  cmd->add_option("--eve-file", opts.eve_file, "strategy JSON file (overrides --eve)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eavesdropper-detection analysis for Fourier-basis QKD protocols"};
  app.require_subcommand(1);
  Options opts;

  auto* analyze = app.add_subcommand("analyze", "exact detection statistics for a scheme");
  add_scheme_options(analyze, opts);
  add_eve_options(analyze, opts);
  analyze->add_option("--stat", opts.stat, "statistic over key assignments: mean|min");
  analyze->add_option("--trials", opts.trials,
                      "key-space samples when it is too large to enumerate");
  add_output_options(analyze, opts);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo detection estimate");
  add_scheme_options(simulate, opts);
  add_eve_options(simulate, opts);
  simulate->add_option("--protocol", opts.protocol,
                       "two_pass_qkd|three_pass_encryption|bb84 (default two_pass_qkd)");
  simulate->add_option("--stat", opts.stat,
                       "mean: fresh keys per trial; min: analytic worst-case keys");
  simulate->add_option("--trials", opts.trials, "number of runs (default 10000)");
  simulate->add_option("--mismatch-limit", opts.mismatch_limit,
                       "verification mismatches tolerated before failing (default 0)");
  simulate->add_flag("--dump-transcripts", opts.dump_transcripts,
                     "write per-run transcripts next to --out");
  add_output_options(simulate, opts);

  auto* attack = app.add_subcommand("attack", "many-copies attack statistics");
  add_scheme_options(attack, opts);
  add_eve_options(attack, opts);
  attack->add_option("--protocol", opts.protocol, "bb84 (default) or two_pass_qkd");
  attack->add_option("--copies", opts.copies, "identical transmissions per run (default 4)");
  attack->add_option("--target-wire", opts.target_wire,
                     "wire the eavesdropper measures (bb84; default first key wire)");
  attack->add_option("--trials", opts.trials, "number of attack runs (default 10000)");
  add_output_options(attack, opts);

  auto* figures = app.add_subcommand(
      "figures", "detection-vs-key-qubits curves for the four interleaved schemes");
  figures->add_option("--max-key-qubits", opts.max_key_qubits,
                      "largest key size on the curves (default 8)");
  figures->add_option("--trials", opts.trials,
                      "requested Monte Carlo trials per point, tapered on big registers");
  add_output_options(figures, opts);

  auto* cross = app.add_subcommand("crossvalidate",
                                   "analytic vs Monte Carlo agreement check");
  add_scheme_options(cross, opts);
  add_eve_options(cross, opts);
  cross->add_option("--stat", opts.stat, "statistic to validate: mean|min");
  cross->add_option("--trials", opts.trials, "Monte Carlo trials (default 10000)");
  add_output_options(cross, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  // Subcommand-specific defaults for options shared across subcommands.
  if (attack->parsed() && attack->count("--protocol") == 0) opts.protocol = "bb84";
  if (figures->parsed() && figures->count("--trials") == 0) opts.trials = 4000;

  try {
    if (analyze->parsed()) return cmd_analyze(opts);
    if (simulate->parsed()) return cmd_simulate(opts);
    if (attack->parsed()) return cmd_attack(opts);
    if (figures->parsed()) return cmd_figures(opts);
    if (cross->parsed()) return cmd_crossvalidate(opts);
  } catch (const capacity_error& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
