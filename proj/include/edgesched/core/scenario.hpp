#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgesched/core/errors.hpp"
#include "edgesched/core/normalize.hpp"
#include "edgesched/core/random.hpp"
#include "edgesched/core/types.hpp"

namespace edgesched {

struct OverloadThresholds {
  double q_thresh = 0.8;                 // queue_length / queue_capacity
  std::optional<double> lat_thresh;      // ms; unset = 2 x regime latency ceiling
  double mem_thresh = 0.9;               // memory_used / memory_capacity

  bool operator==(const OverloadThresholds&) const = default;
};

struct WorkloadParams {
  ArrivalMode arrival_mode = ArrivalMode::Poisson;
  double frame_size_mbit = 8.0;
  double crop_mean_count = 2.0;
  unsigned crop_max_count = 8;
  double crop_fraction_min = 0.02;   // of frame_size, per crop
  double crop_fraction_max = 0.06;
  double service_noise_sigma = 0.1;  // log-normal sigma on edge service time

  bool operator==(const WorkloadParams&) const = default;
};

struct CloudParams {
  // Reference-size crops per second. A payload of p Mbit costs
  // p / (reference_crop_fraction * frame_size) reference crops.
  double service_rate = 1200;
  double reference_crop_fraction = 0.04;
  double cloud_only_multiplier = 1.5;

  bool operator==(const CloudParams&) const = default;
};

struct MemoryModel {
  double detector_footprint_mb = 300;
  double per_task_buffer_mb = 1.5;

  bool operator==(const MemoryModel&) const = default;
};

// Recipe for generated node sets. Each attribute is drawn by stratified
// sampling over its range so that aggregate capacity barely moves with the
// seed while individual nodes differ widely.
struct NodeProfile {
  bool heterogeneous = true;
  double compute_rate_min = 5;
  double compute_rate_max = 40;
  double memory_min = 1024;
  double memory_max = 8192;
  double latency_min = 5;
  double latency_max = 60;
  double bandwidth_min = 20;
  double bandwidth_max = 200;
  double background_load_max = 0.6;
  std::size_t queue_capacity = 32;
  // 0: link quality independent of compute tier; 1: fastest node also has
  // the best link.
  double link_tier_correlation = 0.7;

  bool operator==(const NodeProfile&) const = default;
};

// Extra link latency forced onto one node during [start_ms, end_ms).
struct LatencyFault {
  int node_id = 0;
  double start_ms = 0;
  double end_ms = 0;
  double extra_latency_ms = 0;

  bool active_at(double t) const { return t >= start_ms && t < end_ms; }
  bool operator==(const LatencyFault&) const = default;
};

struct ScenarioConfig {
  std::size_t node_count = 4;
  std::vector<NodeDescriptor> nodes;
  ScenarioRegime scenario_regime = ScenarioRegime::S1;
  double extra_network_latency = 0;   // ms
  double arrival_rate = 0;            // tasks/s
  std::size_t task_count = 10000;
  PolicyKind policy = PolicyKind::Dynamic;
  SchedulingWeights weights;
  double smoothing_eta = 0.7;
  double penalty_gamma_base = 0.5;
  double score_floor = 1e-6;
  double monitor_interval = 50;       // ms
  std::uint64_t rng_seed = 1;

  NormalizationBounds bounds;
  OverloadThresholds overload;
  WorkloadParams workload;
  CloudParams cloud;
  MemoryModel memory_model;
  NodeProfile node_profile;
  std::vector<LatencyFault> faults;
  double horizon_ms = 0;              // 0 = run until every task resolves
  bool record_events = false;

  bool operator==(const ScenarioConfig&) const = default;
};

inline NormalizationBounds effective_bounds(const ScenarioConfig& c) {
  return c.bounds.shifted_latency(c.extra_network_latency);
}

inline double effective_latency_threshold(const ScenarioConfig& c) {
  if (c.overload.lat_thresh) return *c.overload.lat_thresh;
  return 2.0 * (c.bounds.latency_max + c.extra_network_latency);
}

inline double aggregate_capacity(const std::vector<NodeDescriptor>& nodes) {
  double sum = 0;
  for (const auto& n : nodes) sum += n.compute_rate;
  return sum;
}

inline std::vector<NodeDescriptor> generate_nodes(std::size_t count, const NodeProfile& p,
                                                  std::uint64_t seed) {
  std::vector<NodeDescriptor> nodes(count);
  if (!p.heterogeneous) {
    for (std::size_t i = 0; i < count; ++i) {
      auto& n = nodes[i];
      n.node_id = static_cast<int>(i);
      n.compute_rate = 0.5 * (p.compute_rate_min + p.compute_rate_max);
      n.memory_capacity = std::round(0.5 * (p.memory_min + p.memory_max));
      n.base_link_latency = 0.5 * (p.latency_min + p.latency_max);
      n.link_bandwidth = 0.5 * (p.bandwidth_min + p.bandwidth_max);
      n.queue_capacity = p.queue_capacity;
      n.background_load = 0;
    }
    return nodes;
  }

  Rng rng(seed, Stream::Hardware);
  auto stratified = [&](double lo, double hi) {
    std::vector<std::size_t> perm(count);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = count; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = lo + (hi - lo) * (static_cast<double>(perm[i]) + rng.uniform()) /
                        static_cast<double>(count);
    }
    return out;
  };

  const auto tier = stratified(0.0, 1.0);
  const auto mem = stratified(p.memory_min, p.memory_max);
  const auto lat_draw = stratified(0.0, 1.0);
  const auto bw_draw = stratified(0.0, 1.0);
  const auto bg = stratified(0.0, p.background_load_max);
  const double rho = p.link_tier_correlation;
  auto lerp = [](double lo, double hi, double t) { return lo + (hi - lo) * t; };
  for (std::size_t i = 0; i < count; ++i) {
    auto& n = nodes[i];
    n.node_id = static_cast<int>(i);
    n.compute_rate = lerp(p.compute_rate_min, p.compute_rate_max, tier[i]);
    n.memory_capacity = std::round(mem[i]);
    n.base_link_latency =
        lerp(p.latency_max, p.latency_min, rho * tier[i] + (1 - rho) * lat_draw[i]);
    n.link_bandwidth =
        lerp(p.bandwidth_min, p.bandwidth_max, rho * tier[i] + (1 - rho) * bw_draw[i]);
    n.queue_capacity = p.queue_capacity;
    n.background_load = bg[i];
  }
  return nodes;
}

// Throws ConfigError naming the first offending field.
inline void validate(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& field, const std::string& msg) {
    if (!ok) throw ConfigError(field, msg);
  };
  auto finite_pos = [](double x) { return std::isfinite(x) && x > 0; };
  auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0; };

  require(c.node_count >= 1, "node_count", "must be at least 1");
  require(c.nodes.size() == c.node_count, "nodes",
          "expected " + std::to_string(c.node_count) + " entries (node_count), got " +
              std::to_string(c.nodes.size()));
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const auto& n = c.nodes[i];
    const std::string base = "nodes[" + std::to_string(i) + "]";
    require(n.node_id == static_cast<int>(i), base + ".node_id", "must equal its index");
    require(finite_pos(n.compute_rate), base + ".compute_rate", "must be > 0");
    require(finite_pos(n.memory_capacity), base + ".memory_capacity", "must be > 0");
    require(finite_nonneg(n.base_link_latency), base + ".base_link_latency", "must be >= 0");
    require(finite_pos(n.link_bandwidth), base + ".link_bandwidth", "must be > 0");
    require(n.queue_capacity >= 1, base + ".queue_capacity", "must be >= 1");
    require(std::isfinite(n.background_load) && n.background_load >= 0 &&
                n.background_load < 1,
            base + ".background_load", "must be in [0,1)");
  }
  require(finite_nonneg(c.extra_network_latency), "extra_network_latency", "must be >= 0");
  require(c.task_count == 0 || finite_pos(c.arrival_rate), "arrival_rate", "must be > 0");
  c.weights.validate();
  require(std::isfinite(c.smoothing_eta) && c.smoothing_eta >= 0 && c.smoothing_eta <= 1,
          "smoothing_eta", "must be in [0,1]");
  require(std::isfinite(c.penalty_gamma_base) && c.penalty_gamma_base > 0 &&
              c.penalty_gamma_base < 1,
          "penalty_gamma_base", "must be in (0,1)");
  require(finite_pos(c.score_floor), "score_floor", "must be > 0");
  require(finite_pos(c.monitor_interval), "monitor_interval", "must be > 0");
  c.bounds.validate();

  require(finite_pos(c.overload.q_thresh), "overload.q_thresh", "must be > 0");
  require(finite_pos(c.overload.mem_thresh), "overload.mem_thresh", "must be > 0");
  require(!c.overload.lat_thresh || finite_pos(*c.overload.lat_thresh), "overload.lat_thresh",
          "must be > 0");

  const auto& w = c.workload;
  require(finite_pos(w.frame_size_mbit), "workload.frame_size_mbit", "must be > 0");
  require(finite_nonneg(w.crop_mean_count), "workload.crop_mean_count", "must be >= 0");
  require(finite_nonneg(w.crop_fraction_min) && w.crop_fraction_min <= w.crop_fraction_max,
          "workload.crop_fraction_min", "must be >= 0 and <= crop_fraction_max");
  require(w.crop_fraction_max * w.crop_max_count <= 1.0, "workload.crop_fraction_max",
          "crop_max_count * crop_fraction_max must not exceed the frame");
  require(finite_nonneg(w.service_noise_sigma), "workload.service_noise_sigma",
          "must be >= 0");

  require(finite_pos(c.cloud.service_rate), "cloud.service_rate", "must be > 0");
  require(finite_pos(c.cloud.reference_crop_fraction), "cloud.reference_crop_fraction",
          "must be > 0");
  require(finite_pos(c.cloud.cloud_only_multiplier), "cloud.cloud_only_multiplier",
          "must be > 0");
  require(finite_nonneg(c.memory_model.detector_footprint_mb),
          "memory_model.detector_footprint_mb", "must be >= 0");
  require(finite_nonneg(c.memory_model.per_task_buffer_mb), "memory_model.per_task_buffer_mb",
          "must be >= 0");

  const auto& p = c.node_profile;
  require(finite_pos(p.compute_rate_min) && p.compute_rate_min <= p.compute_rate_max,
          "node_profile.compute_rate_min", "must be > 0 and <= compute_rate_max");
  require(p.queue_capacity >= 1, "node_profile.queue_capacity", "must be >= 1");
  require(p.background_load_max >= 0 && p.background_load_max < 1,
          "node_profile.background_load_max", "must be in [0,1)");
  require(p.link_tier_correlation >= 0 && p.link_tier_correlation <= 1,
          "node_profile.link_tier_correlation", "must be in [0,1]");

  for (std::size_t i = 0; i < c.faults.size(); ++i) {
    const auto& f = c.faults[i];
    const std::string base = "faults[" + std::to_string(i) + "]";
    require(f.node_id >= 0 && static_cast<std::size_t>(f.node_id) < c.node_count,
            base + ".node_id", "out of range");
    require(f.start_ms <= f.end_ms, base + ".end_ms", "must be >= start_ms");
    require(finite_nonneg(f.extra_latency_ms), base + ".extra_latency_ms", "must be >= 0");
  }
  require(finite_nonneg(c.horizon_ms), "horizon_ms", "must be >= 0");
}

// ---------------------------------------------------------------------------
// Document (JSON) form.

namespace detail {

using json = nlohmann::json;

// Typed field access over one JSON object; remembers which keys were read so
// that leftovers can be reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(field_path(key), "expected a number");
    out = v.get<double>();
  }

  void number(const std::string& key, std::optional<double>& out) {
    if (!has(key)) return;
    double x = 0;
    number(key, x);
    out = x;
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field_path(key), "expected an integer");
    if (std::is_unsigned_v<Int> && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
      throw ConfigError(field_path(key), "expected a non-negative integer");
    }
    out = v.get<Int>();
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(field_path(key), "expected true/false");
    out = v.get<bool>();
  }

  std::optional<std::string> string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(field_path(key), "expected a string");
    return v.get<std::string>();
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(field_path(it.key()), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

inline NodeDescriptor read_node(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  NodeDescriptor n;
  r.integer("node_id", n.node_id);
  r.number("compute_rate", n.compute_rate);
  r.number("memory_capacity", n.memory_capacity);
  r.number("base_link_latency", n.base_link_latency);
  r.number("link_bandwidth", n.link_bandwidth);
  r.integer("queue_capacity", n.queue_capacity);
  r.number("background_load", n.background_load);
  r.reject_unknown();
  return n;
}

inline json write_node(const NodeDescriptor& n) {
  return json{{"node_id", n.node_id},
              {"compute_rate", n.compute_rate},
              {"memory_capacity", n.memory_capacity},
              {"base_link_latency", n.base_link_latency},
              {"link_bandwidth", n.link_bandwidth},
              {"queue_capacity", n.queue_capacity},
              {"background_load", n.background_load}};
}

}  // namespace detail

// Builds a validated config from a JSON document. Omitted fields take their
// defaults; omitted `nodes`, `extra_network_latency`, `arrival_rate` are
// derived from node_profile, the regime and the seed.
inline ScenarioConfig scenario_from_json(const nlohmann::json& doc) {
  using detail::ObjectReader;
  ScenarioConfig c;
  ObjectReader r(doc, "");

  r.integer("node_count", c.node_count);
  if (auto s = r.string("scenario_regime")) c.scenario_regime = parse_regime(*s);
  if (auto s = r.string("policy")) c.policy = parse_policy(*s);
  r.integer("task_count", c.task_count);
  r.number("smoothing_eta", c.smoothing_eta);
  r.number("penalty_gamma_base", c.penalty_gamma_base);
  r.number("score_floor", c.score_floor);
  r.number("monitor_interval", c.monitor_interval);
  r.integer("rng_seed", c.rng_seed);
  r.number("horizon_ms", c.horizon_ms);
  r.boolean("record_events", c.record_events);

  if (r.has("weights")) {
    ObjectReader w(r.raw("weights"), "weights");
    w.number("alpha", c.weights.alpha);
    w.number("beta", c.weights.beta);
    w.number("delta", c.weights.delta);
    w.number("epsilon_w", c.weights.epsilon_w);
    w.reject_unknown();
  }
  if (r.has("bounds")) {
    ObjectReader b(r.raw("bounds"), "bounds");
    b.number("bandwidth_min", c.bounds.bandwidth_min);
    b.number("bandwidth_max", c.bounds.bandwidth_max);
    b.number("latency_min", c.bounds.latency_min);
    b.number("latency_max", c.bounds.latency_max);
    b.reject_unknown();
  }
  if (r.has("overload")) {
    ObjectReader o(r.raw("overload"), "overload");
    o.number("q_thresh", c.overload.q_thresh);
    o.number("lat_thresh", c.overload.lat_thresh);
    o.number("mem_thresh", c.overload.mem_thresh);
    o.reject_unknown();
  }
  if (r.has("workload")) {
    ObjectReader w(r.raw("workload"), "workload");
    if (auto s = w.string("arrival_mode")) {
      c.workload.arrival_mode = parse_arrival_mode(*s, "workload.arrival_mode");
    }
    w.number("frame_size_mbit", c.workload.frame_size_mbit);
    w.number("crop_mean_count", c.workload.crop_mean_count);
    w.integer("crop_max_count", c.workload.crop_max_count);
    w.number("crop_fraction_min", c.workload.crop_fraction_min);
    w.number("crop_fraction_max", c.workload.crop_fraction_max);
    w.number("service_noise_sigma", c.workload.service_noise_sigma);
    w.reject_unknown();
  }
  if (r.has("cloud")) {
    ObjectReader o(r.raw("cloud"), "cloud");
    o.number("service_rate", c.cloud.service_rate);
    o.number("reference_crop_fraction", c.cloud.reference_crop_fraction);
    o.number("cloud_only_multiplier", c.cloud.cloud_only_multiplier);
    o.reject_unknown();
  }
  if (r.has("memory_model")) {
    ObjectReader o(r.raw("memory_model"), "memory_model");
    o.number("detector_footprint_mb", c.memory_model.detector_footprint_mb);
    o.number("per_task_buffer_mb", c.memory_model.per_task_buffer_mb);
    o.reject_unknown();
  }
  if (r.has("node_profile")) {
    ObjectReader o(r.raw("node_profile"), "node_profile");
    o.boolean("heterogeneous", c.node_profile.heterogeneous);
    o.number("compute_rate_min", c.node_profile.compute_rate_min);
    o.number("compute_rate_max", c.node_profile.compute_rate_max);
    o.number("memory_min", c.node_profile.memory_min);
    o.number("memory_max", c.node_profile.memory_max);
    o.number("latency_min", c.node_profile.latency_min);
    o.number("latency_max", c.node_profile.latency_max);
    o.number("bandwidth_min", c.node_profile.bandwidth_min);
    o.number("bandwidth_max", c.node_profile.bandwidth_max);
    o.number("background_load_max", c.node_profile.background_load_max);
    o.integer("queue_capacity", c.node_profile.queue_capacity);
    o.number("link_tier_correlation", c.node_profile.link_tier_correlation);
    o.reject_unknown();
  }
  if (r.has("faults")) {
    const auto& arr = r.raw("faults");
    if (!arr.is_array()) throw ConfigError("faults", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader f(arr[i], "faults[" + std::to_string(i) + "]");
      LatencyFault fault;
      f.integer("node_id", fault.node_id);
      f.number("start_ms", fault.start_ms);
      f.number("end_ms", fault.end_ms);
      f.number("extra_latency_ms", fault.extra_latency_ms);
      f.reject_unknown();
      c.faults.push_back(fault);
    }
  }

  if (r.has("nodes")) {
    const auto& arr = r.raw("nodes");
    if (!arr.is_array()) throw ConfigError("nodes", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      c.nodes.push_back(detail::read_node(arr[i], "nodes[" + std::to_string(i) + "]"));
    }
  } else {
    c.nodes = generate_nodes(c.node_count, c.node_profile, c.rng_seed);
  }

  c.extra_network_latency = regime_extra_latency(c.scenario_regime);
  r.number("extra_network_latency", c.extra_network_latency);
  r.number("arrival_rate", c.arrival_rate);
  if (!doc.contains("arrival_rate")) {
    c.arrival_rate = regime_load_factor(c.scenario_regime) * aggregate_capacity(c.nodes);
  }

  r.reject_unknown();
  validate(c);
  return c;
}

// Fully explicit document; scenario_from_json(scenario_to_json(c)) == c.
inline nlohmann::json scenario_to_json(const ScenarioConfig& c) {
  using json = nlohmann::json;
  json nodes = json::array();
  for (const auto& n : c.nodes) nodes.push_back(detail::write_node(n));

  json overload{{"q_thresh", c.overload.q_thresh}, {"mem_thresh", c.overload.mem_thresh}};
  if (c.overload.lat_thresh) overload["lat_thresh"] = *c.overload.lat_thresh;

  json faults = json::array();
  for (const auto& f : c.faults) {
    faults.push_back({{"node_id", f.node_id},
                      {"start_ms", f.start_ms},
                      {"end_ms", f.end_ms},
                      {"extra_latency_ms", f.extra_latency_ms}});
  }

  const auto& p = c.node_profile;
  return json{
      {"node_count", c.node_count},
      {"nodes", nodes},
      {"scenario_regime", std::string(to_string(c.scenario_regime))},
      {"extra_network_latency", c.extra_network_latency},
      {"arrival_rate", c.arrival_rate},
      {"task_count", c.task_count},
      {"policy", std::string(to_string(c.policy))},
      {"weights",
       {{"alpha", c.weights.alpha},
        {"beta", c.weights.beta},
        {"delta", c.weights.delta},
        {"epsilon_w", c.weights.epsilon_w}}},
      {"smoothing_eta", c.smoothing_eta},
      {"penalty_gamma_base", c.penalty_gamma_base},
      {"score_floor", c.score_floor},
      {"monitor_interval", c.monitor_interval},
      {"rng_seed", c.rng_seed},
      {"bounds",
       {{"bandwidth_min", c.bounds.bandwidth_min},
        {"bandwidth_max", c.bounds.bandwidth_max},
        {"latency_min", c.bounds.latency_min},
        {"latency_max", c.bounds.latency_max}}},
      {"overload", overload},
      {"workload",
       {{"arrival_mode", std::string(to_string(c.workload.arrival_mode))},
        {"frame_size_mbit", c.workload.frame_size_mbit},
        {"crop_mean_count", c.workload.crop_mean_count},
        {"crop_max_count", c.workload.crop_max_count},
        {"crop_fraction_min", c.workload.crop_fraction_min},
        {"crop_fraction_max", c.workload.crop_fraction_max},
        {"service_noise_sigma", c.workload.service_noise_sigma}}},
      {"cloud",
       {{"service_rate", c.cloud.service_rate},
        {"reference_crop_fraction", c.cloud.reference_crop_fraction},
        {"cloud_only_multiplier", c.cloud.cloud_only_multiplier}}},
      {"memory_model",
       {{"detector_footprint_mb", c.memory_model.detector_footprint_mb},
        {"per_task_buffer_mb", c.memory_model.per_task_buffer_mb}}},
      {"node_profile",
       {{"heterogeneous", p.heterogeneous},
        {"compute_rate_min", p.compute_rate_min},
        {"compute_rate_max", p.compute_rate_max},
        {"memory_min", p.memory_min},
        {"memory_max", p.memory_max},
        {"latency_min", p.latency_min},
        {"latency_max", p.latency_max},
        {"bandwidth_min", p.bandwidth_min},
        {"bandwidth_max", p.bandwidth_max},
        {"background_load_max", p.background_load_max},
        {"queue_capacity", p.queue_capacity},
        {"link_tier_correlation", p.link_tier_correlation}}},
      {"faults", faults},
      {"horizon_ms", c.horizon_ms},
      {"record_events", c.record_events},
  };
}

inline std::string serialize_scenario(const ScenarioConfig& c) {
  return scenario_to_json(c).dump(2) + "\n";
}

inline ScenarioConfig load_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("parse error: ") + e.what());
  }
  return scenario_from_json(doc);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Mixes the base seed with the grid coordinates of a sweep cell. The policy is
// deliberately left out so all policies of a cell share hardware and workload.
inline std::uint64_t cell_seed(std::uint64_t base_seed, ScenarioRegime regime,
                               std::size_t node_count) {
  std::uint64_t s = mix64(base_seed);
  s = mix64(s ^ (0x5ce7a110ULL + regime_index(regime)));
  s = mix64(s ^ (0xc0de0000ULL + node_count));
  return s;
}

// One cell of a sweep: base settings with regime, node count and policy
// replaced. Nodes, added latency and arrival rate are re-derived.
inline ScenarioConfig make_cell(const ScenarioConfig& base, PolicyKind policy,
                                ScenarioRegime regime, std::size_t node_count,
                                std::uint64_t base_seed) {
  ScenarioConfig c = base;
  c.policy = policy;
  c.scenario_regime = regime;
  c.node_count = node_count;
  c.rng_seed = cell_seed(base_seed, regime, node_count);
  c.nodes = generate_nodes(node_count, c.node_profile, c.rng_seed);
  c.extra_network_latency = regime_extra_latency(regime);
  c.arrival_rate = regime_load_factor(regime) * aggregate_capacity(c.nodes);
  c.faults.clear();
  validate(c);
  return c;
}

}  // namespace edgesched
