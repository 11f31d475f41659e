#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "qkdsim/types.hpp"

namespace qkdsim {

template <typename Kind>
struct Event {
  Seconds fire_time;
  std::uint64_t sequence;
  Kind kind;
};

/// Stable discrete-event queue: events fire in (time, insertion sequence)
/// order, so ties are FIFO. The clock only moves forward.
template <typename Kind>
class EventQueue {
 public:
  Seconds now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint64_t scheduled_count() const { return next_sequence_; }

  void schedule(Seconds fire_time, Kind kind) {
    if (fire_time < now_) {
      throw SimulationIntegrityError("event scheduled in the past: " + std::to_string(fire_time) +
                                     " < " + std::to_string(now_));
    }
    heap_.push(Event<Kind>{fire_time, next_sequence_++, std::move(kind)});
  }

  std::optional<Seconds> next_time() const {
    if (heap_.empty()) return std::nullopt;
    return heap_.top().fire_time;
  }

  /// Removes the earliest event and advances the clock to its fire time.
  Event<Kind> pop() {
    Event<Kind> ev = std::move(const_cast<Event<Kind>&>(heap_.top()));
    heap_.pop();
    now_ = ev.fire_time;
    return ev;
  }

 private:
  struct Later {
    bool operator()(const Event<Kind>& x, const Event<Kind>& y) const {
      if (x.fire_time != y.fire_time) return x.fire_time > y.fire_time;
      return x.sequence > y.sequence;
    }
  };

  std::priority_queue<Event<Kind>, std::vector<Event<Kind>>, Later> heap_;
  Seconds now_ = 0.0;
  std::uint64_t next_sequence_ = 0;
};

}  // namespace qkdsim
