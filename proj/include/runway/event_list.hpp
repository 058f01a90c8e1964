#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "runway/core_types.hpp"

namespace runway {

/// Future-event list. Pops in time order; events scheduled for the same time
/// come out in the order they were pushed.
template <typename Payload>
class EventList {
 public:
  struct Entry {
    Millis time;
    std::uint64_t seq;
    Payload payload;
  };

  void push(Millis time, Payload payload) {
    if (time < now_) throw std::logic_error("event scheduled in the past");
    heap_.push(Entry{time, next_seq_++, std::move(payload)});
  }

  /// Advances the clock to the popped event's time.
  Entry pop() {
    Entry e = heap_.top();
    heap_.pop();
    now_ = e.time;
    return e;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  Millis now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  Millis now_ = std::numeric_limits<Millis>::min();
};

}  // namespace runway
