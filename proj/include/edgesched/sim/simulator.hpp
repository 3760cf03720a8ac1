#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgesched/core/random.hpp"
#include "edgesched/core/scenario.hpp"
#include "edgesched/scheduler/policy.hpp"
#include "edgesched/sim/event_queue.hpp"
#include "edgesched/sim/processes.hpp"

namespace edgesched {

// Per-task trace record. Stage stamps stay empty for stages never reached.
struct TaskRecord {
  std::uint64_t task_id = 0;
  double arrival_time = 0;
  double frame_size = 0;        // Mbit
  unsigned crop_count = 0;
  double crop_total_size = 0;   // Mbit
  double service_noise = 1;     // multiplier on the node's base service time

  bool arrived = false;
  bool dropped = false;
  bool completed = false;
  int node_id = -1;
  double decision_time = 0;
  double snapshot_time = 0;     // timestamp of the monitor data the decision used
  std::vector<double> decision_scores;

  std::optional<double> edge_start, edge_end;
  std::optional<double> transfer_start, transfer_end;
  std::optional<double> cloud_start, cloud_end;
  std::optional<double> completion_time;

  double communication_latency() const {
    return transfer_start && transfer_end ? *transfer_end - *transfer_start : 0.0;
  }
  std::optional<double> end_to_end_latency() const {
    if (!completion_time) return std::nullopt;
    return *completion_time - arrival_time;
  }
};

struct NodeStats {
  std::size_t assigned = 0;
  std::size_t dropped = 0;
  double busy_time = 0;     // ms of detector service
  double peak_memory = 0;   // MB
};

struct SimulationOutput {
  ScenarioConfig config;
  std::vector<TaskRecord> tasks;
  std::vector<NodeStats> nodes;
  std::size_t arrivals = 0;
  std::size_t completions = 0;
  std::size_t drops = 0;
  std::size_t in_flight = 0;
  double end_time = 0;
  // Filled only with record_events.
  std::vector<std::string> event_log;
  std::vector<std::vector<RawNodeSample>> monitor_history;
};

inline nlohmann::json task_record_to_json(const TaskRecord& t) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return nlohmann::json{{"task_id", t.task_id},
                        {"arrival_time", t.arrival_time},
                        {"frame_size", t.frame_size},
                        {"crop_count", t.crop_count},
                        {"crop_total_size", t.crop_total_size},
                        {"service_noise", t.service_noise},
                        {"arrived", t.arrived},
                        {"dropped", t.dropped},
                        {"completed", t.completed},
                        {"node_id", t.node_id},
                        {"decision_time", t.decision_time},
                        {"snapshot_time", t.snapshot_time},
                        {"decision_scores", t.decision_scores},
                        {"edge_start", opt(t.edge_start)},
                        {"edge_end", opt(t.edge_end)},
                        {"transfer_start", opt(t.transfer_start)},
                        {"transfer_end", opt(t.transfer_end)},
                        {"cloud_start", opt(t.cloud_start)},
                        {"cloud_end", opt(t.cloud_end)},
                        {"completion_time", opt(t.completion_time)}};
}

// Newline-delimited JSON, one record per task in task_id order.
inline std::string trace_ndjson(const SimulationOutput& out) {
  std::string s;
  for (const auto& t : out.tasks) {
    s += task_record_to_json(t).dump();
    s += '\n';
  }
  return s;
}

// Single-threaded discrete-event run of edge detection -> crop upload ->
// cloud inference. Every random draw comes from streams of config.rng_seed,
// and per-task draws are made up front, so policies differ only in routing.
class Simulator {
 public:
  explicit Simulator(ScenarioConfig config)
      : config_(validated(std::move(config))), policy_(make_policy_state(config_)) {}

  SimulationOutput run() {
    init();
    if (config_.task_count > 0) {
      queue_.push(0.0, EventKind::MonitorTick);
      queue_.push(arrival_times_.front(), EventKind::Arrival, 0);
    }
    const bool bounded = config_.horizon_ms > 0;
    while (!queue_.empty()) {
      if (bounded && queue_.top().time > config_.horizon_ms) break;
      const Event e = queue_.pop();
      now_ = e.time;
      log_event(e);
      switch (e.kind) {
        case EventKind::MonitorTick: on_monitor_tick(); break;
        case EventKind::Arrival: on_arrival(static_cast<std::size_t>(e.task)); break;
        case EventKind::EdgeServiceDone: on_edge_done(e.node); break;
        case EventKind::TransferDone: on_transfer_done(static_cast<std::size_t>(e.task)); break;
        case EventKind::CloudServiceDone: on_cloud_done(); break;
      }
      // Nothing left but a pending monitor tick.
      if (resolved() == config_.task_count) break;
    }
    return finish();
  }

 private:
  struct EdgeState {
    std::deque<std::size_t> waiting;
    std::optional<std::size_t> in_service;
    double service_started = 0;
    double busy_accum = 0;
    double busy_at_last_tick = 0;
    double memory_in_use = 0;

    std::size_t held() const { return waiting.size() + (in_service ? 1 : 0); }
    double busy_until(double t) const {
      return busy_accum + (in_service ? t - service_started : 0.0);
    }
  };

  struct CloudState {
    std::deque<std::size_t> waiting;
    std::optional<std::size_t> in_service;
  };

  static ScenarioConfig validated(ScenarioConfig c) {
    validate(c);
    return c;
  }

  bool cloud_only() const { return config_.policy == PolicyKind::CloudOnly; }

  void init() {
    const std::size_t n = config_.node_count;
    edges_.assign(n, EdgeState{});
    stats_.assign(n, NodeStats{});
    samples_.assign(n, RawNodeSample{});
    tasks_.assign(config_.task_count, TaskRecord{});

    Rng arrivals(config_.rng_seed, Stream::Arrivals);
    arrival_times_ = schedule_arrival_process(config_.arrival_rate, config_.task_count, arrivals,
                                              config_.workload.arrival_mode);
    Rng workload(config_.rng_seed, Stream::Workload);
    Rng noise(config_.rng_seed, Stream::ServiceNoise);
    for (std::size_t i = 0; i < config_.task_count; ++i) {
      auto& t = tasks_[i];
      t.task_id = i;
      t.arrival_time = arrival_times_[i];
      t.frame_size = config_.workload.frame_size_mbit;
      const auto crops = draw_crops(workload, config_.workload);
      t.crop_count = crops.count;
      t.crop_total_size = crops.total_mbit;
      t.service_noise = service_noise(noise, config_.workload.service_noise_sigma);
    }
    for (std::size_t i = 0; i < n; ++i) set_memory(i);
  }

  double current_link_latency(std::size_t node) const {
    double lat = config_.nodes[node].base_link_latency;
    for (const auto& f : config_.faults) {
      if (static_cast<std::size_t>(f.node_id) == node && f.active_at(now_)) {
        lat += f.extra_latency_ms;
      }
    }
    return lat;
  }

  void set_memory(std::size_t node) {
    auto& e = edges_[node];
    e.memory_in_use = cloud_only() ? 0.0
                                   : config_.memory_model.detector_footprint_mb +
                                         config_.memory_model.per_task_buffer_mb *
                                             static_cast<double>(e.held());
    stats_[node].peak_memory = std::max(stats_[node].peak_memory, e.memory_in_use);
  }

  std::size_t resolved() const { return completions_ + drops_; }

  void on_monitor_tick() {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      auto& e = edges_[i];
      const auto& node = config_.nodes[i];
      const double window = now_ - last_tick_;
      const double busy = e.busy_until(now_) - e.busy_at_last_tick;
      const double busy_fraction = window > 0 ? std::clamp(busy / window, 0.0, 1.0) : 0.0;
      e.busy_at_last_tick = e.busy_until(now_);

      auto& s = samples_[i];
      s.cpu_idle_fraction = (1.0 - node.background_load) * (1.0 - busy_fraction);
      s.queue_length = e.held();
      s.available_bandwidth = node.link_bandwidth;
      s.link_latency = current_link_latency(i) + config_.extra_network_latency;
      s.memory_used = e.memory_in_use;
      s.timestamp = now_;
    }
    last_tick_ = now_;
    if (config_.policy == PolicyKind::StaticResourceAware) capture_sra_snapshot(policy_, samples_);
    if (config_.record_events) monitor_history_.push_back(samples_);
    if (resolved() < config_.task_count) {
      queue_.push(now_ + config_.monitor_interval, EventKind::MonitorTick);
    }
  }

  void on_arrival(std::size_t idx) {
    auto& t = tasks_[idx];
    t.arrived = true;
    ++arrivals_;
    if (idx + 1 < tasks_.size()) {
      queue_.push(arrival_times_[idx + 1], EventKind::Arrival, static_cast<std::int64_t>(idx + 1));
    }

    const auto d = decide(config_.policy, policy_, samples_, t.task_id, now_);
    const auto node = static_cast<std::size_t>(d.node_id);
    t.node_id = d.node_id;
    t.decision_time = d.decision_time;
    t.snapshot_time = samples_.front().timestamp;
    t.decision_scores = d.decision_scores;
    ++stats_[node].assigned;

    if (cloud_only()) {
      start_transfer(idx, node, t.frame_size);
      return;
    }

    auto& e = edges_[node];
    if (e.held() >= config_.nodes[node].queue_capacity) {
      t.dropped = true;
      ++drops_;
      ++stats_[node].dropped;
      return;
    }
    e.waiting.push_back(idx);
    set_memory(node);
    if (!e.in_service) start_edge_service(node);
  }

  void start_edge_service(std::size_t node) {
    auto& e = edges_[node];
    const std::size_t idx = e.waiting.front();
    e.waiting.pop_front();
    e.in_service = idx;
    e.service_started = now_;
    auto& t = tasks_[idx];
    t.edge_start = now_;
    const double dur = edge_service_time(config_.nodes[node], t.service_noise);
    queue_.push(now_ + dur, EventKind::EdgeServiceDone, static_cast<std::int64_t>(idx),
                static_cast<int>(node));
  }

  void on_edge_done(int node_id) {
    const auto node = static_cast<std::size_t>(node_id);
    auto& e = edges_[node];
    const std::size_t idx = *e.in_service;
    const double dur = now_ - e.service_started;
    e.busy_accum += dur;
    stats_[node].busy_time += dur;
    e.in_service.reset();
    set_memory(node);

    auto& t = tasks_[idx];
    t.edge_end = now_;
    if (t.crop_count == 0) {
      complete(idx);
    } else {
      start_transfer(idx, node, t.crop_total_size);
    }
    if (!e.waiting.empty()) start_edge_service(node);
  }

  void start_transfer(std::size_t idx, std::size_t node, double payload) {
    auto& t = tasks_[idx];
    t.transfer_start = now_;
    const double dur = transfer_time(payload, config_.nodes[node].link_bandwidth,
                                     current_link_latency(node), config_.extra_network_latency);
    queue_.push(now_ + dur, EventKind::TransferDone, static_cast<std::int64_t>(idx),
                static_cast<int>(node));
  }

  void on_transfer_done(std::size_t idx) {
    tasks_[idx].transfer_end = now_;
    cloud_.waiting.push_back(idx);
    if (!cloud_.in_service) start_cloud_service();
  }

  void start_cloud_service() {
    const std::size_t idx = cloud_.waiting.front();
    cloud_.waiting.pop_front();
    cloud_.in_service = idx;
    auto& t = tasks_[idx];
    t.cloud_start = now_;
    const double payload = cloud_only() ? t.frame_size : t.crop_total_size;
    const double dur =
        cloud_service_time(payload, config_.cloud, config_.workload.frame_size_mbit, cloud_only());
    queue_.push(now_ + dur, EventKind::CloudServiceDone, static_cast<std::int64_t>(idx));
  }

  void on_cloud_done() {
    const std::size_t idx = *cloud_.in_service;
    cloud_.in_service.reset();
    tasks_[idx].cloud_end = now_;
    complete(idx);
    if (!cloud_.waiting.empty()) start_cloud_service();
  }

  void complete(std::size_t idx) {
    auto& t = tasks_[idx];
    t.completed = true;
    t.completion_time = now_;
    ++completions_;
  }

  void log_event(const Event& e) {
    if (!config_.record_events) return;
    nlohmann::json j{{"t", e.time},
                     {"seq", e.seq},
                     {"kind", std::string(to_string(e.kind))},
                     {"task", e.task},
                     {"node", e.node}};
    event_log_.push_back(j.dump());
  }

  SimulationOutput finish() {
    SimulationOutput out;
    out.arrivals = arrivals_;
    out.completions = completions_;
    out.drops = drops_;
    out.in_flight = arrivals_ - completions_ - drops_;
    out.end_time = now_;
    out.tasks = std::move(tasks_);
    out.nodes = std::move(stats_);
    out.event_log = std::move(event_log_);
    out.monitor_history = std::move(monitor_history_);
    out.config = config_;
    return out;
  }

  ScenarioConfig config_;
  PolicyState policy_;
  EventQueue queue_;
  double now_ = 0;
  double last_tick_ = 0;

  std::vector<EdgeState> edges_;
  CloudState cloud_;
  std::vector<NodeStats> stats_;
  std::vector<RawNodeSample> samples_;
  std::vector<TaskRecord> tasks_;
  std::vector<double> arrival_times_;

  std::size_t arrivals_ = 0;
  std::size_t completions_ = 0;
  std::size_t drops_ = 0;
  std::vector<std::string> event_log_;
  std::vector<std::vector<RawNodeSample>> monitor_history_;
};

inline SimulationOutput run_simulation(const ScenarioConfig& config) {
  return Simulator(config).run();
}

}  // namespace edgesched
