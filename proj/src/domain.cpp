#include "runway/domain.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

namespace runway {

std::string_view to_string(WeightClass c) {
  switch (c) {
    case WeightClass::Heavy: return "heavy";
    case WeightClass::B757: return "b757";
    case WeightClass::Large: return "large";
    case WeightClass::Small: return "small";
  }
  return "?";
}

std::string_view to_string(OperationType o) {
  return o == OperationType::Arrival ? "arrival" : "departure";
}

std::optional<WeightClass> parse_weight_class(std::string_view s) {
  for (auto c : kWeightClasses)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<OperationType> parse_operation_type(std::string_view s) {
  for (auto o : kOperationTypes)
    if (to_string(o) == s) return o;
  return std::nullopt;
}

std::string_view to_string(SpacingBand b) {
  switch (b) {
    case SpacingBand::Close: return "close";
    case SpacingBand::Medium: return "medium";
    case SpacingBand::Wide: return "wide";
  }
  return "?";
}

std::optional<SpacingBand> parse_spacing_band(std::string_view s) {
  for (auto b : {SpacingBand::Close, SpacingBand::Medium, SpacingBand::Wide})
    if (to_string(b) == s) return b;
  return std::nullopt;
}

std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::Window: return "window";
    case Violation::Kind::Separation: return "separation";
    case Violation::Kind::Ordering: return "ordering";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// SeparationMatrix

SeparationMatrix SeparationMatrix::zeros() { return SeparationMatrix{}; }

SeparationMatrix SeparationMatrix::faa_default() {
  using enum OperationType;
  // Rows: leader class, columns: follower class (Heavy, B757, Large, Small).
  constexpr int dep_dep[4][4] = {{60, 90, 120, 120}, {60, 60, 90, 90}, {60, 60, 60, 90}, {60, 60, 60, 60}};
  constexpr int dep_arr[4][4] = {{50, 53, 55, 65}, {50, 53, 55, 65}, {50, 53, 55, 65}, {50, 53, 55, 65}};
  constexpr int arr_dep[4][4] = {{75, 75, 75, 75}, {65, 65, 65, 65}, {55, 55, 55, 55}, {40, 40, 40, 40}};
  constexpr int arr_arr[4][4] = {{96, 133, 157, 196}, {74, 107, 133, 157}, {60, 65, 69, 131}, {60, 65, 69, 82}};

  SeparationMatrix m;
  for (auto l : kWeightClasses) {
    for (auto f : kWeightClasses) {
      const auto li = index_of(l);
      const auto fi = index_of(f);
      m.set_same_runway(l, f, Departure, Departure, dep_dep[li][fi] * 1000);
      m.set_same_runway(l, f, Departure, Arrival, dep_arr[li][fi] * 1000);
      m.set_same_runway(l, f, Arrival, Departure, arr_dep[li][fi] * 1000);
      m.set_same_runway(l, f, Arrival, Arrival, arr_arr[li][fi] * 1000);
    }
  }

  using K = ParallelRule::Kind;
  const ParallelRule same{K::SameAsSingle, 0};
  const ParallelRule indep{K::Independent, 0};
  m.set_parallel(SpacingBand::Close, Departure, Departure, same);
  m.set_parallel(SpacingBand::Close, Departure, Arrival, same);
  m.set_parallel(SpacingBand::Close, Arrival, Departure, indep);
  m.set_parallel(SpacingBand::Close, Arrival, Arrival, same);
  m.set_parallel(SpacingBand::Medium, Departure, Departure, indep);
  m.set_parallel(SpacingBand::Medium, Departure, Arrival, indep);
  m.set_parallel(SpacingBand::Medium, Arrival, Departure, indep);
  m.set_parallel(SpacingBand::Medium, Arrival, Arrival, ParallelRule{K::Fixed, 40'000});
  for (auto lo : kOperationTypes)
    for (auto fo : kOperationTypes) m.set_parallel(SpacingBand::Wide, lo, fo, indep);
  return m;
}

void SeparationMatrix::set_same_runway(WeightClass leader, WeightClass follower, OperationType leader_op,
                                       OperationType follower_op, Millis value) {
  if (value < 0) throw std::invalid_argument("separation must be non-negative");
  same_[same_index(leader, follower, leader_op, follower_op)] = value;
}

void SeparationMatrix::set_parallel(SpacingBand band, OperationType leader_op, OperationType follower_op,
                                    ParallelRule rule) {
  if (rule.fixed < 0) throw std::invalid_argument("separation must be non-negative");
  parallel_[parallel_index(band, leader_op, follower_op)] = rule;
}

Millis SeparationMatrix::required(const Aircraft& leader, const Aircraft& follower,
                                  std::optional<SpacingBand> band) const {
  const Millis single = same_runway(leader.weight_class, follower.weight_class, leader.op, follower.op);
  if (!band) return single;
  const auto& rule = parallel(*band, leader.op, follower.op);
  switch (rule.kind) {
    case ParallelRule::Kind::SameAsSingle: return single;
    case ParallelRule::Kind::Independent: return 0;
    case ParallelRule::Kind::Fixed: return rule.fixed;
  }
  return single;
}

double SeparationMatrix::mean_seconds() const {
  const auto total = std::accumulate(same_.begin(), same_.end(), Millis{0});
  return to_seconds(total) / static_cast<double>(same_.size());
}

std::vector<TriangleViolation> check_triangle(const SeparationMatrix& sep) {
  std::vector<OpClass> nodes;
  for (auto op : kOperationTypes)
    for (auto c : kWeightClasses) nodes.push_back({c, op});

  auto s = [&](const OpClass& a, const OpClass& b) {
    return sep.same_runway(a.weight_class, b.weight_class, a.op, b.op);
  };
  std::vector<TriangleViolation> out;
  for (const auto& i : nodes)
    for (const auto& j : nodes)
      for (const auto& k : nodes) {
        const Millis direct = s(i, k);
        const Millis via = s(i, j) + s(j, k);
        if (direct > via) out.push_back({i, j, k, direct, via});
      }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario

SpacingBand Scenario::band(int a, int b) const {
  if (spacing.empty()) return SpacingBand::Wide;
  return spacing[static_cast<std::size_t>(a * runway_count + b)];
}

void Scenario::set_band(int a, int b, SpacingBand value) {
  if (spacing.size() != static_cast<std::size_t>(runway_count * runway_count))
    spacing.assign(static_cast<std::size_t>(runway_count * runway_count), SpacingBand::Wide);
  spacing[static_cast<std::size_t>(a * runway_count + b)] = value;
  spacing[static_cast<std::size_t>(b * runway_count + a)] = value;
}

std::optional<std::size_t> Scenario::index_of_id(int id) const {
  for (std::size_t i = 0; i < aircraft.size(); ++i)
    if (aircraft[i].id == id) return i;
  return std::nullopt;
}

void Scenario::validate() const {
  if (runway_count < 1) throw StructuralError("runway count must be >= 1");
  if (!spacing.empty() && spacing.size() != static_cast<std::size_t>(runway_count * runway_count))
    throw StructuralError("spacing matrix size does not match runway count");
  const double mix = std::accumulate(fleet_mix.begin(), fleet_mix.end(), 0.0);
  if (std::abs(mix - 1.0) > 1e-9) throw StructuralError("fleet mix must sum to 1");
  if (max_delay < 0) throw StructuralError("max delay must be non-negative");
  std::unordered_map<int, int> seen;
  for (const auto& a : aircraft) {
    if (++seen[a.id] > 1) throw StructuralError("duplicate aircraft id " + std::to_string(a.id));
    if (!(a.ready <= a.target && a.target <= a.due))
      throw StructuralError("aircraft " + std::to_string(a.id) + ": need ready <= target <= due");
    if (a.due - a.target > max_delay)
      throw StructuralError("aircraft " + std::to_string(a.id) + ": due exceeds target + max delay");
    if (a.system_arrival > a.ready)
      throw StructuralError("aircraft " + std::to_string(a.id) + ": system arrival after ready time");
    if (a.weight < 0) throw StructuralError("aircraft " + std::to_string(a.id) + ": negative weight");
  }
  if (!network.valid()) throw StructuralError("network distances and speeds must be positive");
  if (!noise.valid()) throw StructuralError("invalid stochastic configuration");
}

Scenario make_scenario(std::vector<Aircraft> aircraft, int runway_count, SpacingBand band) {
  Scenario s;
  s.aircraft = std::move(aircraft);
  s.runway_count = runway_count;
  s.spacing.assign(static_cast<std::size_t>(runway_count * runway_count), band);
  return s;
}

// ---------------------------------------------------------------------------
// Schedule

Millis Schedule::makespan() const {
  Millis m = 0;
  bool any = false;
  for (const auto& s : slots) {
    m = any ? std::max(m, s.start) : s.start;
    any = true;
  }
  return m;
}

const Slot* Schedule::find(int aircraft_id) const {
  for (const auto& s : slots)
    if (s.aircraft_id == aircraft_id) return &s;
  return nullptr;
}

namespace {

struct Indexed {
  const Slot* slot;
  const Aircraft* aircraft;
};

std::vector<Indexed> index_schedule(const Schedule& schedule, const Scenario& scenario) {
  std::unordered_map<int, const Aircraft*> by_id;
  for (const auto& a : scenario.aircraft) by_id[a.id] = &a;
  std::unordered_map<int, int> seen;
  std::vector<Indexed> out;
  out.reserve(schedule.slots.size());
  for (const auto& s : schedule.slots) {
    auto it = by_id.find(s.aircraft_id);
    if (it == by_id.end()) throw StructuralError("unknown aircraft id " + std::to_string(s.aircraft_id));
    if (++seen[s.aircraft_id] > 1)
      throw StructuralError("aircraft " + std::to_string(s.aircraft_id) + " assigned twice");
    if (s.runway < 0 || s.runway >= scenario.runway_count)
      throw StructuralError("aircraft " + std::to_string(s.aircraft_id) + ": runway out of range");
    out.push_back({&s, it->second});
  }
  if (out.size() != scenario.aircraft.size()) throw StructuralError("schedule does not cover every aircraft");
  return out;
}

void append_separation(const std::vector<Indexed>& items, const Scenario& scenario, std::vector<Violation>& out) {
  const auto& sep = scenario.separation;
  for (std::size_t x = 0; x < items.size(); ++x) {
    for (std::size_t y = x + 1; y < items.size(); ++y) {
      const auto& a = items[x];
      const auto& b = items[y];
      if (a.slot->runway == b.slot->runway) {
        const auto& [lead, follow] = a.slot->position < b.slot->position ? std::pair{a, b} : std::pair{b, a};
        const Millis need = sep.required(*lead.aircraft, *follow.aircraft, std::nullopt);
        const Millis gap = follow.slot->start - lead.slot->start;
        if (gap < need)
          out.push_back({Violation::Kind::Separation, lead.aircraft->id, follow.aircraft->id, to_seconds(gap - need)});
        continue;
      }
      const auto band = scenario.band(a.slot->runway, b.slot->runway);
      const Millis ab = sep.required(*a.aircraft, *b.aircraft, band);
      const Millis ba = sep.required(*b.aircraft, *a.aircraft, band);
      if (a.slot->start == b.slot->start) {
        if (ab > 0 && ba > 0) {
          const bool a_leads = ab <= ba;
          const auto& lead = a_leads ? a : b;
          const auto& follow = a_leads ? b : a;
          out.push_back({Violation::Kind::Separation, lead.aircraft->id, follow.aircraft->id,
                         -to_seconds(std::min(ab, ba))});
        }
        continue;
      }
      const bool a_leads = a.slot->start < b.slot->start;
      const auto& lead = a_leads ? a : b;
      const auto& follow = a_leads ? b : a;
      const Millis need = a_leads ? ab : ba;
      const Millis gap = follow.slot->start - lead.slot->start;
      if (gap < need)
        out.push_back({Violation::Kind::Separation, lead.aircraft->id, follow.aircraft->id, to_seconds(gap - need)});
    }
  }
}

}  // namespace

std::vector<Violation> separation_violations(const Schedule& schedule, const Scenario& scenario) {
  const auto items = index_schedule(schedule, scenario);
  std::vector<Violation> out;
  append_separation(items, scenario, out);
  return out;
}

std::vector<Violation> check_feasibility(const Schedule& schedule, const Scenario& scenario) {
  const auto items = index_schedule(schedule, scenario);
  std::vector<Violation> out;

  for (const auto& it : items) {
    const auto& a = *it.aircraft;
    const Millis t = it.slot->start;
    if (t < a.ready) out.push_back({Violation::Kind::Window, a.id, -1, to_seconds(t - a.ready)});
    if (t > a.due) out.push_back({Violation::Kind::Window, a.id, -1, to_seconds(a.due - t)});
  }

  // Positions must be 1..count within each runway, and agree with start order.
  std::vector<std::vector<const Indexed*>> runways(static_cast<std::size_t>(scenario.runway_count));
  for (const auto& it : items) runways[static_cast<std::size_t>(it.slot->runway)].push_back(&it);
  for (auto& rw : runways) {
    std::sort(rw.begin(), rw.end(), [](const Indexed* x, const Indexed* y) { return x->slot->position < y->slot->position; });
    for (std::size_t k = 0; k < rw.size(); ++k) {
      if (rw[k]->slot->position != static_cast<int>(k) + 1)
        out.push_back({Violation::Kind::Ordering, rw[k]->aircraft->id, -1, 0.0});
      if (k > 0 && rw[k]->slot->start < rw[k - 1]->slot->start)
        out.push_back({Violation::Kind::Ordering, rw[k - 1]->aircraft->id, rw[k]->aircraft->id,
                       to_seconds(rw[k]->slot->start - rw[k - 1]->slot->start)});
    }
  }

  append_separation(items, scenario, out);
  return out;
}

}  // namespace runway
