#include "runway/timeline.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace runway {

Timeline::Timeline(const Scenario& scenario, std::vector<PlacedOp> fixed)
    : scenario_(&scenario), by_runway_(static_cast<std::size_t>(scenario.runway_count)) {
  std::stable_sort(fixed.begin(), fixed.end(), [](const PlacedOp& a, const PlacedOp& b) { return a.start < b.start; });
  for (auto& op : fixed) place(op.aircraft, op.runway, op.start);
}

void Timeline::place(const Aircraft& j, int runway, Millis start) {
  by_runway_[static_cast<std::size_t>(runway)].push_back(ops_.size());
  ops_.push_back({j, runway, start});
}

std::optional<Millis> Timeline::last_start(int runway) const {
  const auto& idx = by_runway_[static_cast<std::size_t>(runway)];
  if (idx.empty()) return std::nullopt;
  return ops_[idx.back()].start;
}

Millis Timeline::earliest(const Aircraft& j, int runway, Millis lower_bound) const {
  const auto& sep = scenario_->separation;
  Millis t = lower_bound;
  for (auto k : by_runway_[static_cast<std::size_t>(runway)]) {
    const auto& op = ops_[k];
    t = std::max(t, op.start + sep.required(op.aircraft, j, std::nullopt));
  }

  struct Interval {
    Millis lo, hi;
  };
  std::vector<Interval> blocked;
  for (const auto& op : ops_) {
    if (op.runway == runway) continue;
    const auto band = scenario_->band(op.runway, runway);
    const Millis after = sep.required(op.aircraft, j, band);
    const Millis before = sep.required(j, op.aircraft, band);
    if (after == 0 && before == 0) continue;
    blocked.push_back({op.start - before, op.start + after});
  }
  if (blocked.empty()) return t;
  std::sort(blocked.begin(), blocked.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (bool moved = true; moved;) {
    moved = false;
    for (const auto& iv : blocked) {
      if (iv.lo < t && t < iv.hi) {
        t = iv.hi;
        moved = true;
      }
    }
  }
  return t;
}

TimedSequences time_sequences(const Scenario& scenario, const RunwaySequences& sequences,
                              const std::vector<PlacedOp>& fixed) {
  Timeline timeline(scenario, fixed);
  TimedSequences out;
  out.schedule.slots.resize(scenario.aircraft.size());
  std::vector<std::size_t> head(sequences.size(), 0);
  std::size_t remaining = 0;
  for (const auto& s : sequences) remaining += s.size();

  while (remaining > 0) {
    int best_runway = -1;
    Millis best_time = std::numeric_limits<Millis>::max();
    for (std::size_t r = 0; r < sequences.size(); ++r) {
      if (head[r] >= sequences[r].size()) continue;
      const auto& ac = scenario.aircraft[static_cast<std::size_t>(sequences[r][head[r]])];
      const Millis t = timeline.earliest(ac, static_cast<int>(r), ac.ready);
      if (t < best_time) {
        best_time = t;
        best_runway = static_cast<int>(r);
      }
    }
    const auto r = static_cast<std::size_t>(best_runway);
    const auto idx = static_cast<std::size_t>(sequences[r][head[r]]);
    const auto& ac = scenario.aircraft[idx];
    timeline.place(ac, best_runway, best_time);
    out.schedule.slots[idx] = Slot{ac.id, best_runway, static_cast<int>(head[r]) + 1, best_time};
    if (best_time > ac.due) out.window_feasible = false;
    ++head[r];
    --remaining;
  }
  return out;
}

RunwaySequences sequences_of(const Schedule& schedule, const Scenario& scenario) {
  std::unordered_map<int, int> index;
  for (std::size_t i = 0; i < scenario.aircraft.size(); ++i) index[scenario.aircraft[i].id] = static_cast<int>(i);
  std::vector<std::vector<std::pair<int, int>>> tmp(static_cast<std::size_t>(scenario.runway_count));
  for (const auto& s : schedule.slots) {
    auto it = index.find(s.aircraft_id);
    if (it == index.end()) throw StructuralError("unknown aircraft id " + std::to_string(s.aircraft_id));
    if (s.runway < 0 || s.runway >= scenario.runway_count) throw StructuralError("runway out of range");
    tmp[static_cast<std::size_t>(s.runway)].push_back({s.position, it->second});
  }
  RunwaySequences out(tmp.size());
  for (std::size_t r = 0; r < tmp.size(); ++r) {
    std::sort(tmp[r].begin(), tmp[r].end());
    for (const auto& [pos, idx] : tmp[r]) out[r].push_back(idx);
  }
  return out;
}

std::vector<PlacedOp> placed_ops(const Schedule& schedule, const Scenario& scenario) {
  std::vector<PlacedOp> out;
  out.reserve(schedule.slots.size());
  for (const auto& s : schedule.slots) {
    const auto idx = scenario.index_of_id(s.aircraft_id);
    if (!idx) throw StructuralError("unknown aircraft id " + std::to_string(s.aircraft_id));
    out.push_back({scenario.aircraft[*idx], s.runway, s.start});
  }
  return out;
}

}  // namespace runway
