#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "edgesched/core/errors.hpp"
#include "edgesched/core/scenario.hpp"
#include "edgesched/metrics/aggregate.hpp"

namespace edgesched {

inline constexpr std::array<std::string_view, 13> kCsvColumns = {
    "policy",          "scenario",       "node_count",   "seed",
    "throughput_tps",  "mean_latency_ms", "p50_ms",      "p95_ms",
    "p99_ms",          "drop_count",     "peak_memory_mb", "mean_comm_latency_ms",
    "mean_busy_fraction"};

struct RunRecord {
  ScenarioConfig config;
  SimulationResult result;
};

inline std::string format_fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// Sort key: (policy name, scenario, node_count, seed).
inline void sort_records(std::vector<RunRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    const auto& x = a.result;
    const auto& y = b.result;
    return std::make_tuple(to_string(x.policy), regime_index(x.scenario), x.node_count, x.seed) <
           std::make_tuple(to_string(y.policy), regime_index(y.scenario), y.node_count, y.seed);
  });
}

inline std::string csv_row(const SimulationResult& r) {
  std::string row;
  auto add = [&row](const std::string& cell) {
    if (!row.empty()) row += ',';
    row += cell;
  };
  add(std::string(to_string(r.policy)));
  add(std::string(to_string(r.scenario)));
  add(std::to_string(r.node_count));
  add(std::to_string(r.seed));
  add(format_fixed(r.throughput));
  add(format_fixed(r.mean_latency));
  add(format_fixed(r.p50));
  add(format_fixed(r.p95));
  add(format_fixed(r.p99));
  add(std::to_string(r.drop_count));
  add(format_fixed(r.peak_memory));
  add(format_fixed(r.mean_communication_latency));
  add(format_fixed(r.mean_busy_fraction));
  return row;
}

inline std::string results_csv(std::vector<RunRecord> records) {
  sort_records(records);
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) out += ',';
    out += kCsvColumns[i];
  }
  out += '\n';
  for (const auto& rec : records) {
    out += csv_row(rec.result);
    out += '\n';
  }
  return out;
}

inline nlohmann::json result_to_json(const SimulationResult& r) {
  return nlohmann::json{{"policy", std::string(to_string(r.policy))},
                        {"scenario", std::string(to_string(r.scenario))},
                        {"node_count", r.node_count},
                        {"seed", r.seed},
                        {"throughput_tps", r.throughput},
                        {"throughput_degenerate", r.throughput_degenerate},
                        {"mean_latency_ms", r.mean_latency},
                        {"p50_ms", r.p50},
                        {"p95_ms", r.p95},
                        {"p99_ms", r.p99},
                        {"latency_empty", r.latency_empty},
                        {"per_node_task_counts", r.per_node_task_counts},
                        {"arrival_count", r.arrival_count},
                        {"completion_count", r.completion_count},
                        {"drop_count", r.drop_count},
                        {"in_flight_count", r.in_flight_count},
                        {"peak_memory_mb", r.peak_memory},
                        {"peak_memory_per_node_mb", r.peak_memory_per_node},
                        {"mean_comm_latency_ms", r.mean_communication_latency},
                        {"mean_busy_fraction", r.mean_busy_fraction}};
}

// Companion document: one entry per run with the full config echo.
inline std::string results_json(std::vector<RunRecord> records) {
  sort_records(records);
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& rec : records) {
    runs.push_back({{"config", scenario_to_json(rec.config)}, {"metrics", result_to_json(rec.result)}});
  }
  return nlohmann::json{{"runs", runs}}.dump(2) + "\n";
}

// Writes via a sibling temp file and rename, so a failed write never leaves
// a partial file at `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string(), "cannot create directory: " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError(path.string(), "write failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path.string(), "cannot move into place");
  }
}

struct ExportPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
};

// Writes <dir>/<stem>.csv and <dir>/<stem>.json. Both contents are rendered
// before anything touches the disk.
inline ExportPaths export_results(const std::vector<RunRecord>& records,
                                  const std::filesystem::path& dir, const std::string& stem) {
  if (records.empty()) throw std::invalid_argument("export_results: no results");
  const std::string csv = results_csv(records);
  const std::string json = results_json(records);
  ExportPaths paths{dir / (stem + ".csv"), dir / (stem + ".json")};
  write_file_atomic(paths.csv, csv);
  write_file_atomic(paths.json, json);
  return paths;
}

}  // namespace edgesched
