#pragma once

#include <cstdint>
#include <queue>
#include <string_view>
#include <vector>

namespace edgesched {

enum class EventKind { Arrival, MonitorTick, EdgeServiceDone, TransferDone, CloudServiceDone };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Arrival: return "Arrival";
    case EventKind::MonitorTick: return "MonitorTick";
    case EventKind::EdgeServiceDone: return "EdgeServiceDone";
    case EventKind::TransferDone: return "TransferDone";
    case EventKind::CloudServiceDone: return "CloudServiceDone";
  }
  return "?";
}

struct Event {
  double time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Arrival;
  std::int64_t task = -1;
  int node = -1;
};

// Min-queue on (time, seq). Equal-time events pop in insertion order.
class EventQueue {
 public:
  void push(double time, EventKind kind, std::int64_t task = -1, int node = -1) {
    heap_.push(Event{time, next_seq_++, kind, task, node});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace edgesched
