#include "runway/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace runway {

WindowInfeasible::WindowInfeasible(int id, Millis s, Millis d)
    : std::runtime_error("aircraft " + std::to_string(id) + " cannot start before its due time (start " +
                         std::to_string(to_seconds(s)) + " s, due " + std::to_string(to_seconds(d)) + " s)"),
      aircraft_id(id),
      start(s),
      due(d) {}

namespace {

std::vector<std::size_t> fcfs_order(const std::vector<Aircraft>& aircraft) {
  std::vector<std::size_t> order(aircraft.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = aircraft[a];
    const auto& y = aircraft[b];
    if (x.system_arrival != y.system_arrival) return x.system_arrival < y.system_arrival;
    return x.id < y.id;
  });
  return order;
}

// Position numbers follow start order on each runway; the slots were filled
// in placement order, which may differ across runways but not within one.
void number_positions(Schedule& s, int runway_count) {
  std::vector<int> next(static_cast<std::size_t>(runway_count), 1);
  std::vector<std::size_t> order(s.slots.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.slots[a].start < s.slots[b].start; });
  for (auto k : order) s.slots[k].position = next[static_cast<std::size_t>(s.slots[k].runway)]++;
}

}  // namespace

Schedule fcfs_schedule(const Scenario& scenario, const std::vector<PlacedOp>& fixed, bool strict) {
  Timeline timeline(scenario, fixed);
  std::array<Millis, 2> floor{std::numeric_limits<Millis>::min(), std::numeric_limits<Millis>::min()};
  for (const auto& op : fixed) {
    auto& f = floor[static_cast<std::size_t>(index_of(op.aircraft.op))];
    f = std::max(f, op.start);
  }

  Schedule out;
  out.slots.resize(scenario.aircraft.size());
  std::vector<std::size_t> order_in_runway;
  for (auto idx : fcfs_order(scenario.aircraft)) {
    const auto& ac = scenario.aircraft[idx];
    auto& f = floor[static_cast<std::size_t>(index_of(ac.op))];
    const Millis lb = std::max(ac.ready, f);
    int best_runway = 0;
    Millis best = std::numeric_limits<Millis>::max();
    for (int r = 0; r < scenario.runway_count; ++r) {
      const Millis t = timeline.earliest(ac, r, lb);
      if (t < best) {
        best = t;
        best_runway = r;
      }
    }
    if (strict && best > ac.due) throw WindowInfeasible(ac.id, best, ac.due);
    timeline.place(ac, best_runway, best);
    f = best;
    out.slots[idx] = Slot{ac.id, best_runway, 1, best};
  }
  number_positions(out, scenario.runway_count);
  return out;
}

double log_priority_index(const Aircraft& j, const Aircraft* prev, double t, const GreedyParams& params,
                          const SeparationMatrix& sep) {
  const double s_bar = params.s_bar > 0.0 ? params.s_bar : sep.mean_seconds();
  const double s_ij = prev ? to_seconds(sep.required(*prev, j, std::nullopt)) : 0.0;
  const double slack_due = std::max(to_seconds(j.due) - t, 0.0);
  const double wait_ready = std::max(to_seconds(j.ready) - t, 0.0);
  const double log_w = j.weight > 0.0 ? std::log(j.weight) : -std::numeric_limits<double>::infinity();
  double value = log_w - slack_due / params.k1 - wait_ready / params.k3;
  if (s_ij > 0.0) value -= s_ij / (params.k2 * s_bar);
  return value;
}

double priority_index(const Aircraft& j, const Aircraft* prev, double t, const GreedyParams& params,
                      const SeparationMatrix& sep) {
  return std::exp(log_priority_index(j, prev, t, params, sep));
}

GreedyResult greedy_schedule(const Scenario& scenario, const GreedyParams& params,
                             const std::vector<PlacedOp>& fixed, bool strict) {
  Timeline timeline(scenario, fixed);
  const auto m = static_cast<std::size_t>(scenario.runway_count);
  std::vector<const Aircraft*> last(m, nullptr);
  {
    std::vector<Millis> last_t(m, std::numeric_limits<Millis>::min());
    for (const auto& op : timeline.ops()) {
      const auto r = static_cast<std::size_t>(op.runway);
      if (op.start >= last_t[r]) {
        last_t[r] = op.start;
        last[r] = &op.aircraft;
      }
    }
  }

  const auto& all = scenario.aircraft;
  std::vector<std::size_t> pending(all.size());
  std::iota(pending.begin(), pending.end(), 0);
  Millis clock = std::numeric_limits<Millis>::max();
  for (const auto& a : all) clock = std::min(clock, a.ready);

  GreedyResult out;
  out.schedule.slots.resize(all.size());
  // Copies keep `last` valid while the timeline's op vector grows.
  std::vector<Aircraft> placed;
  placed.reserve(all.size());

  while (!pending.empty()) {
    const double t = to_seconds(clock);
    std::size_t pick = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const auto& ac = all[pending[k]];
      double eta = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r)
        eta = std::max(eta, log_priority_index(ac, last[r], t, params, scenario.separation));
      const auto& cur = all[pending[pick]];
      const bool better = k == 0 || eta > best ||
                          (eta == best && (ac.target < cur.target || (ac.target == cur.target && ac.id < cur.id)));
      if (better) {
        best = eta;
        pick = k;
      }
    }

    const auto idx = pending[pick];
    const auto& ac = all[idx];
    int best_runway = 0;
    Millis start = std::numeric_limits<Millis>::max();
    for (int r = 0; r < scenario.runway_count; ++r) {
      const Millis e = timeline.earliest(ac, r, ac.ready);
      if (e < start) {
        start = e;
        best_runway = r;
      }
    }
    if (strict && start > ac.due) throw WindowInfeasible(ac.id, start, ac.due);
    timeline.place(ac, best_runway, start);
    placed.push_back(ac);
    last[static_cast<std::size_t>(best_runway)] = &placed.back();
    out.schedule.slots[idx] = Slot{ac.id, best_runway, 1, start};
    clock = std::max(clock, start);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  number_positions(out.schedule, scenario.runway_count);
  out.makespan = out.schedule.makespan();
  return out;
}

double objective_value(const Schedule& schedule, const Scenario& scenario, Objective objective) {
  if (objective == Objective::Makespan) return to_seconds(schedule.makespan());
  double total = 0.0;
  for (const auto& s : schedule.slots) {
    const auto idx = scenario.index_of_id(s.aircraft_id);
    if (!idx) throw StructuralError("unknown aircraft id " + std::to_string(s.aircraft_id));
    const auto& ac = scenario.aircraft[*idx];
    const double dev = to_seconds(s.start - ac.target);
    total += ac.weight * (objective == Objective::WeightedTardiness ? std::max(dev, 0.0) : std::abs(dev));
  }
  return total;
}

BruteForceResult brute_force_optimal(const Scenario& scenario, Objective objective) {
  const std::size_t n = scenario.aircraft.size();
  const int m = scenario.runway_count;
  if (n > kBruteForceMaxAircraft || m > kBruteForceMaxRunways)
    throw std::invalid_argument("brute force limited to " + std::to_string(kBruteForceMaxAircraft) +
                                " aircraft and " + std::to_string(kBruteForceMaxRunways) + " runways, got " +
                                std::to_string(n) + " aircraft and " + std::to_string(m) + " runways");
  BruteForceResult best;
  bool have = false;
  std::vector<int> assign(n, 0);
  for (;;) {
    RunwaySequences seq(static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < n; ++j) seq[static_cast<std::size_t>(assign[j])].push_back(static_cast<int>(j));
    // Odometer over the per-runway permutations, each starting sorted.
    for (;;) {
      auto timed = time_sequences(scenario, seq);
      const double v = objective_value(timed.schedule, scenario, objective);
      ++best.sequences_tried;
      const bool better = !have || (timed.window_feasible && !best.window_feasible) ||
                          (timed.window_feasible == best.window_feasible && v < best.value);
      if (better) {
        best.schedule = std::move(timed.schedule);
        best.value = v;
        best.window_feasible = timed.window_feasible;
        have = true;
      }
      std::size_t r = 0;
      while (r < seq.size() && !std::next_permutation(seq[r].begin(), seq[r].end())) ++r;
      if (r == seq.size()) break;
    }
    std::size_t k = 0;
    while (k < n && ++assign[k] == m) assign[k++] = 0;
    if (k == n) break;
  }
  if (!have) best.schedule = {};
  return best;
}

}  // namespace runway
