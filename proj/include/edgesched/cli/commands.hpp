#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgesched/core/errors.hpp"
#include "edgesched/core/scenario.hpp"
#include "edgesched/metrics/aggregate.hpp"
#include "edgesched/metrics/export.hpp"
#include "edgesched/sim/simulator.hpp"
#include "edgesched/cli/selfcheck.hpp"

namespace edgesched::cli {

enum class Subcommand { Run, Sweep, Compare, Selfcheck };

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kIoError = 3 };

inline constexpr const char* kOutDirEnv = "EDGESCHED_OUT_DIR";

struct RunSpec {
  Subcommand subcommand = Subcommand::Run;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;   // KEY=VALUE, dotted keys
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<std::string> scenario;
  std::optional<std::size_t> nodes;
};

inline const std::vector<std::size_t>& grid_node_counts() {
  static const std::vector<std::size_t> counts = {4, 8, 12, 16};
  return counts;
}

// --out, then the environment, then ./results.
inline std::filesystem::path resolve_output_dir(const RunSpec& spec) {
  if (spec.output_dir) return *spec.output_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "results";
}

// Values are read as JSON when they parse (numbers, booleans, arrays),
// otherwise taken as plain strings: `policy=rr`, `weights.alpha=0.4`.
inline void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--override", "expected KEY=VALUE, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component in override");
    if (!node->is_object()) throw ConfigError(key, "override path goes through a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = nlohmann::json::object();
    start = dot + 1;
  }
}

// Config document with the flag shortcuts and overrides folded in, then
// parsed. Unknown override keys surface as ConfigError from the parser.
inline ScenarioConfig build_config(const RunSpec& spec) {
  nlohmann::json doc = nlohmann::json::object();
  if (spec.config_path) {
    std::string text;
    try {
      text = read_text_file(*spec.config_path);
    } catch (const IoError& e) {
      throw ConfigError(*spec.config_path, "cannot read config file");
    }
    doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw ConfigError(*spec.config_path, "not a JSON object");
    }
  }
  if (spec.seed) doc["rng_seed"] = *spec.seed;
  if (spec.policy) doc["policy"] = *spec.policy;
  if (spec.scenario) doc["scenario_regime"] = *spec.scenario;
  if (spec.nodes) doc["node_count"] = *spec.nodes;
  for (const auto& o : spec.overrides) apply_override(doc, o);

  // Command-line shape changes invalidate stored derived values.
  if (spec.nodes) doc.erase("nodes");
  if (spec.scenario) {
    doc.erase("extra_network_latency");
    doc.erase("arrival_rate");
  }
  return scenario_from_json(doc);
}

inline RunRecord run_one(const ScenarioConfig& cfg) {
  return RunRecord{cfg, aggregate(run_simulation(cfg))};
}

inline std::string summary_line(const SimulationResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "policy=%s scenario=%s nodes=%zu seed=%llu throughput=%.3f tps mean_latency=%.3f ms "
                "drops=%zu",
                std::string(to_string(r.policy)).c_str(), std::string(to_string(r.scenario)).c_str(),
                r.node_count, static_cast<unsigned long long>(r.seed), r.throughput,
                r.mean_latency, r.drop_count);
  return buf;
}

inline int cmd_run(const RunSpec& spec, std::ostream& out) {
  const auto cfg = build_config(spec);
  const auto rec = run_one(cfg);
  const auto paths = export_results({rec}, resolve_output_dir(spec), "run");
  out << summary_line(rec.result) << " -> " << paths.csv.string() << "\n";
  return kOk;
}

// The three edge policies across the standard node counts, one regime.
inline int cmd_sweep(const RunSpec& spec, std::ostream& out) {
  const auto base = build_config(spec);
  std::vector<RunRecord> records;
  for (PolicyKind p : {PolicyKind::Dynamic, PolicyKind::RoundRobin, PolicyKind::StaticResourceAware}) {
    for (std::size_t n : grid_node_counts()) {
      records.push_back(run_one(make_cell(base, p, base.scenario_regime, n, base.rng_seed)));
    }
  }
  const auto paths = export_results(records, resolve_output_dir(spec), "sweep");
  out << "sweep: " << records.size() << " runs, scenario=" << to_string(base.scenario_regime)
      << " -> " << paths.csv.string() << "\n";
  return kOk;
}

inline double pct_gain(double ours, double theirs) {
  return theirs == 0 ? 0.0 : 100.0 * (ours - theirs) / theirs;
}

inline double pct_reduction(double ours, double theirs) {
  return theirs == 0 ? 0.0 : 100.0 * (theirs - ours) / theirs;
}

inline constexpr const char* kSummaryHeader =
    "scenario,node_count,baseline,dynamic_throughput_tps,baseline_throughput_tps,"
    "throughput_ratio,throughput_gain_pct,dynamic_mean_latency_ms,baseline_mean_latency_ms,"
    "latency_reduction_pct\n";

// Dynamic vs each baseline, one row per (scenario, node count, baseline).
inline std::string compare_summary_csv(const std::vector<RunRecord>& records) {
  auto find = [&](PolicyKind p, ScenarioRegime s, std::size_t n) -> const SimulationResult* {
    for (const auto& r : records) {
      if (r.result.policy == p && r.result.scenario == s && r.result.node_count == n) return &r.result;
    }
    return nullptr;
  };
  std::string csv = kSummaryHeader;
  for (ScenarioRegime s : kAllRegimes) {
    for (std::size_t n : grid_node_counts()) {
      const auto* dyn = find(PolicyKind::Dynamic, s, n);
      if (!dyn) continue;
      for (PolicyKind b : {PolicyKind::RoundRobin, PolicyKind::StaticResourceAware, PolicyKind::CloudOnly}) {
        const auto* base = find(b, s, n);
        if (!base) continue;
        const double ratio = base->throughput == 0 ? 0.0 : dyn->throughput / base->throughput;
        csv += std::string(to_string(s)) + "," + std::to_string(n) + "," + std::string(to_string(b)) +
               "," + format_fixed(dyn->throughput) + "," + format_fixed(base->throughput) + "," +
               format_fixed(ratio) + "," + format_fixed(pct_gain(dyn->throughput, base->throughput)) +
               "," + format_fixed(dyn->mean_latency) + "," + format_fixed(base->mean_latency) + "," +
               format_fixed(pct_reduction(dyn->mean_latency, base->mean_latency)) + "\n";
      }
    }
  }
  return csv;
}

inline std::vector<RunRecord> compare_grid(const ScenarioConfig& base, std::uint64_t base_seed) {
  std::vector<RunRecord> records;
  records.reserve(kAllPolicies.size() * kAllRegimes.size() * grid_node_counts().size());
  for (PolicyKind p : kAllPolicies) {
    for (ScenarioRegime s : kAllRegimes) {
      for (std::size_t n : grid_node_counts()) {
        records.push_back(run_one(make_cell(base, p, s, n, base_seed)));
      }
    }
  }
  return records;
}

inline int cmd_compare(const RunSpec& spec, std::ostream& out) {
  const auto base = build_config(spec);
  const auto records = compare_grid(base, base.rng_seed);
  const auto dir = resolve_output_dir(spec);
  // Render everything first so a failure leaves no half-written set.
  const std::string csv = results_csv(records);
  const std::string json = results_json(records);
  const std::string summary = compare_summary_csv(records);
  write_file_atomic(dir / "compare.csv", csv);
  write_file_atomic(dir / "compare.json", json);
  write_file_atomic(dir / "summary.csv", summary);
  out << "compare: " << records.size() << " runs, base seed " << base.rng_seed << " -> "
      << (dir / "compare.csv").string() << "\n";
  return kOk;
}

inline int cmd_selfcheck(const RunSpec&, std::ostream& out) {
  return run_selfcheck(out) ? kOk : kFailure;
}

// Maps the error taxonomy onto exit codes.
inline int dispatch(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    switch (spec.subcommand) {
      case Subcommand::Run: return cmd_run(spec, out);
      case Subcommand::Sweep: return cmd_sweep(spec, out);
      case Subcommand::Compare: return cmd_compare(spec, out);
      case Subcommand::Selfcheck: return cmd_selfcheck(spec, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace edgesched::cli

