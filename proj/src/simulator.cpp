#include "runway/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "runway/event_list.hpp"

namespace runway {

std::array<double, SimMetrics::kCount> SimMetrics::values() const {
  return {makespan_s,          unfairness,          avg_landing_delay_s,
          max_landing_delay_s, avg_takeoff_delay_s, max_takeoff_delay_s,
          avg_sequence_change, static_cast<double>(violations), static_cast<double>(max_holding),
          infeasible ? 1.0 : 0.0};
}

const MetricStats& ReplicationSummary::stat(std::string_view name) const {
  for (std::size_t k = 0; k < SimMetrics::kCount; ++k)
    if (SimMetrics::kNames[k] == name) return stats[k];
  throw std::out_of_range("no metric named " + std::string(name));
}

TraceSink csv_trace(std::ostream& out) {
  out << "time_ms,aircraft_id,node,event_kind\n";
  return [&out](const TraceRecord& r) { out << r.time << ',' << r.aircraft_id << ',' << r.node << ',' << r.kind << '\n'; };
}

double sample_rot(WeightClass c, OperationType op, const StochasticConfig& config, KeyedStream& stream) {
  if (!config.enabled) return config.rot_mean(c, op);
  const auto [lo, hi] = config.rot_bounds(c, op);
  return lo + (hi - lo) * stream.beta(config.rot_shape[static_cast<std::size_t>(index_of(c))]);
}

std::vector<int> position_shifts(const std::vector<Aircraft>& aircraft, const std::vector<Millis>& times) {
  const std::size_t n = aircraft.size();
  std::vector<std::size_t> fcfs(n);
  std::iota(fcfs.begin(), fcfs.end(), 0);
  std::stable_sort(fcfs.begin(), fcfs.end(), [&](std::size_t a, std::size_t b) {
    if (aircraft[a].system_arrival != aircraft[b].system_arrival)
      return aircraft[a].system_arrival < aircraft[b].system_arrival;
    return aircraft[a].id < aircraft[b].id;
  });
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[fcfs[k]] = k;

  std::vector<int> shift(n, 0);
  for (auto op : kOperationTypes) {
    std::vector<std::size_t> members;
    for (auto k : fcfs)
      if (aircraft[k].op == op) members.push_back(k);
    std::vector<int> fcfs_pos(n, 0);
    for (std::size_t p = 0; p < members.size(); ++p) fcfs_pos[members[p]] = static_cast<int>(p);
    std::vector<std::size_t> realized = members;
    std::stable_sort(realized.begin(), realized.end(), [&](std::size_t a, std::size_t b) {
      return times[a] != times[b] ? times[a] < times[b] : rank[a] < rank[b];
    });
    for (std::size_t p = 0; p < realized.size(); ++p)
      shift[realized[p]] = static_cast<int>(p) - fcfs_pos[realized[p]];
  }
  return shift;
}

double fairness(const std::vector<Aircraft>& aircraft, const std::vector<Millis>& times) {
  const auto shift = position_shifts(aircraft, times);
  double total = 0.0;
  for (std::size_t k = 0; k < aircraft.size(); ++k) {
    if (shift[k] == 0) continue;
    const double dev = to_seconds(times[k] - aircraft[k].target);
    total += std::abs(shift[k]) * dev * dev;
  }
  return total;
}

namespace {

Millis transit_draw(const StochasticConfig& cfg, const KeyedStream& s, int draw) {
  const double u = s.uniform_at(static_cast<std::uint64_t>(draw));
  return from_seconds(KeyedStream::truncated_normal_quantile(cfg.transit, u));
}

// No required gap exceeds this.
Millis max_separation(const SeparationMatrix& sep) {
  Millis m = 0;
  for (auto l : kWeightClasses)
    for (auto f : kWeightClasses)
      for (auto lo : kOperationTypes)
        for (auto fo : kOperationTypes) m = std::max(m, sep.same_runway(l, f, lo, fo));
  for (auto b : {SpacingBand::Close, SpacingBand::Medium, SpacingBand::Wide})
    for (auto lo : kOperationTypes)
      for (auto fo : kOperationTypes) m = std::max(m, sep.parallel(b, lo, fo).fixed);
  return m;
}

enum class Kind : std::uint8_t { ArrivalNode, HoldRelease, DepartureNode, Request, LeaveRunway };

struct Event {
  Kind kind;
  std::size_t ac;
  int node;
};

struct Committed {
  const Aircraft* aircraft;
  int runway;
  Millis time;
};

// Purpose streams per aircraft: draw k of the transit stream perturbs
// segment k (arrival segments first, then departure climb segments).
class Run {
 public:
  Run(const Schedule& schedule, const Scenario& scenario, const RandomSource& src, const SimOptions& opts)
      : sc_(scenario), src_(src), opts_(opts), n_(scenario.aircraft.size()) {
    const auto m = static_cast<std::size_t>(scenario.runway_count);
    slot_.assign(n_, nullptr);
    for (const auto& s : schedule.slots) {
      const auto idx = scenario.index_of_id(s.aircraft_id);
      if (!idx) throw StructuralError("unknown aircraft id " + std::to_string(s.aircraft_id));
      if (s.runway < 0 || s.runway >= scenario.runway_count) throw StructuralError("runway out of range");
      if (slot_[*idx]) throw StructuralError("aircraft " + std::to_string(s.aircraft_id) + " scheduled twice");
      slot_[*idx] = &s;
    }
    for (std::size_t k = 0; k < n_; ++k)
      if (!slot_[k]) throw StructuralError("aircraft " + std::to_string(scenario.aircraft[k].id) + " not scheduled");

    plan_.assign(m, {});
    for (std::size_t k = 0; k < n_; ++k) plan_[static_cast<std::size_t>(slot_[k]->runway)].push_back(k);
    for (auto& p : plan_)
      std::stable_sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) {
        if (slot_[a]->position != slot_[b]->position) return slot_[a]->position < slot_[b]->position;
        return slot_[a]->start < slot_[b]->start;
      });
    next_.assign(m, 0);
    busy_until_.assign(m, std::numeric_limits<Millis>::min());
    for (const auto& op : opts.context) {
      committed_.push_back({&op.aircraft, op.runway, op.start});
      const auto r = static_cast<std::size_t>(op.runway);
      const Millis rot = from_seconds(scenario.noise.rot_mean(op.aircraft.weight_class, op.aircraft.op));
      busy_until_[r] = std::max(busy_until_[r], op.start + rot);
    }
    std::stable_sort(committed_.begin(), committed_.end(),
                     [](const Committed& a, const Committed& b) { return a.time < b.time; });
    max_sep_ = max_separation(scenario.separation);
    if (opts.draws) {
      const auto& d = *opts.draws;
      if (d.size() != n_ || d.source().seed != src.seed || d.source().replication != src.replication ||
          d.source().flipped != src.flipped)
        throw std::invalid_argument("draw table does not match the run's random source");
      for (std::size_t k = 0; k < n_; ++k)
        if (d.id(k) != scenario.aircraft[k].id) throw std::invalid_argument("draw table built for other aircraft");
    }
    out_.aircraft.resize(n_);
    waiting_.assign(n_, false);
    request_at_.assign(n_, 0);
    iaf_at_.assign(n_, 0);
    ready_at_.assign(n_, 0);
  }

  SimOutputs execute() {
    const auto& cfg = sc_.noise;
    for (std::size_t k = 0; k < n_; ++k) {
      const auto& ac = sc_.aircraft[k];
      auto& o = out_.aircraft[k];
      o.id = ac.id;
      o.op = ac.op;
      o.runway = slot_[k]->runway;
      o.planned = slot_[k]->start;
      const auto& noise = ac.op == OperationType::Arrival ? cfg.arrival_sysarr : cfg.departure_sysarr;
      Millis inject = ac.system_arrival;
      if (opts_.draws) {
        inject += opts_.draws->inject_offset(k);
      } else if (cfg.enabled) {
        KeyedStream s(src_.seed, src_.replication, static_cast<std::uint64_t>(ac.id), Purpose::SystemArrival,
                      src_.flipped);
        inject += from_seconds(s.truncated_normal(noise));
      }
      if (ac.op == OperationType::Arrival)
        events_.push(inject, {Kind::ArrivalNode, k, static_cast<int>(ArrivalNode::EntryPoint)});
      else
        events_.push(inject, {Kind::DepartureNode, k, static_cast<int>(DepartureNode::HoldingArea)});
    }
    while (!events_.empty()) {
      const auto e = events_.pop();
      handle(e.payload);
    }
    finish();
    return std::move(out_);
  }

 private:
  Millis now() const { return events_.now(); }

  void trace(std::size_t k, std::string_view node, std::string_view kind) {
    if (opts_.trace) opts_.trace({now(), sc_.aircraft[k].id, node, kind});
  }

  Millis segment(std::size_t k, Millis nominal, int draw) {
    if (!sc_.noise.enabled) return nominal;
    Millis noisy = nominal;
    if (opts_.draws) {
      noisy += opts_.draws->transit_noise(k, draw);
    } else {
      KeyedStream s(src_.seed, src_.replication, static_cast<std::uint64_t>(sc_.aircraft[k].id), Purpose::Transit,
                    src_.flipped);
      noisy += transit_draw(sc_.noise, s, draw);
    }
    const auto floor = static_cast<Millis>(std::llround(sc_.noise.min_segment_fraction * static_cast<double>(nominal)));
    return std::max(noisy, floor);
  }

  void handle(const Event& e) {
    const auto& ac = sc_.aircraft[e.ac];
    const auto& net = sc_.network;
    switch (e.kind) {
      case Kind::ArrivalNode: {
        const auto node = static_cast<ArrivalNode>(e.node);
        trace(e.ac, to_string(node), "arrive");
        if (node == ArrivalNode::Threshold) {
          request_at_[e.ac] = now();
          try_operate(e.ac);
        } else if (node == ArrivalNode::IAF) {
          iaf_at_[e.ac] = now();
          const Millis release = std::max(now(), slot_[e.ac]->start - net.nominal_after_iaf(ac.weight_class));
          if (release > now()) {
            ++holding_;
            out_.metrics.max_holding = std::max(out_.metrics.max_holding, holding_);
            trace(e.ac, to_string(node), "hold_start");
            events_.push(release, {Kind::HoldRelease, e.ac, e.node});
          } else {
            leave_arrival_node(e.ac, e.node);
          }
        } else {
          leave_arrival_node(e.ac, e.node);
        }
        break;
      }
      case Kind::HoldRelease:
        --holding_;
        out_.aircraft[e.ac].wait += now() - iaf_at_[e.ac];
        trace(e.ac, to_string(ArrivalNode::IAF), "hold_end");
        leave_arrival_node(e.ac, e.node);
        break;
      case Kind::DepartureNode: {
        const auto node = static_cast<DepartureNode>(e.node);
        trace(e.ac, to_string(node), "arrive");
        if (node == DepartureNode::HoldingArea) {
          ready_at_[e.ac] = now() + net.taxi_to_roll;
          request_at_[e.ac] = ready_at_[e.ac];
          events_.push(std::max(ready_at_[e.ac], slot_[e.ac]->start), {Kind::Request, e.ac, 0});
        } else if (node != DepartureNode::DepartureFix) {
          const int seg = e.node - static_cast<int>(DepartureNode::TakeOff);
          const Millis dt = segment(e.ac, net.departure_segment(seg, ac.weight_class),
                                    NodeNetwork::kArrivalSegments + seg);
          events_.push(now() + dt, {Kind::DepartureNode, e.ac, e.node + 1});
        }
        break;
      }
      case Kind::Request:
        try_operate(e.ac);
        break;
      case Kind::LeaveRunway:
        if (ac.op == OperationType::Arrival) {
          trace(e.ac, to_string(ArrivalNode::RunwayExit), "arrive");
        } else {
          events_.push(now(), {Kind::DepartureNode, e.ac, static_cast<int>(DepartureNode::TakeOff)});
        }
        break;
    }
  }

  void leave_arrival_node(std::size_t k, int node) {
    const Millis dt = segment(k, sc_.network.arrival_segment(node, sc_.aircraft[k].weight_class), node);
    events_.push(now() + dt, {Kind::ArrivalNode, k, node + 1});
  }

  void try_operate(std::size_t k) {
    const auto& ac = sc_.aircraft[k];
    const int runway = slot_[k]->runway;
    const auto r = static_cast<std::size_t>(runway);
    if (plan_[r][next_[r]] != k) {
      waiting_[k] = true;
      return;
    }
    Millis t = std::max(now(), busy_until_[r]);
    for (auto it = committed_.rbegin(); it != committed_.rend(); ++it) {
      if (it->time + max_sep_ <= now()) break;
      const auto band = sc_.band_between(it->runway, runway);
      t = std::max(t, it->time + sc_.separation.required(*it->aircraft, ac, band));
    }
    if (t > now()) {
      events_.push(t, {Kind::Request, k, 0});
      return;
    }
    commit(k, runway);
  }

  void commit(std::size_t k, int runway) {
    const auto& ac = sc_.aircraft[k];
    const auto r = static_cast<std::size_t>(runway);
    auto& o = out_.aircraft[k];
    o.realized = now();
    o.wait += now() - request_at_[k];
    if (opts_.draws) {
      o.rot = from_seconds(opts_.draws->rot_s(k));
    } else {
      KeyedStream rot_stream(src_.seed, src_.replication, static_cast<std::uint64_t>(ac.id), Purpose::Rot,
                             src_.flipped);
      o.rot = from_seconds(sample_rot(ac.weight_class, ac.op, sc_.noise, rot_stream));
    }
    busy_until_[r] = now() + o.rot;
    const Committed c{&ac, runway, now()};
    committed_.insert(std::upper_bound(committed_.begin(), committed_.end(), c,
                                       [](const Committed& a, const Committed& b) { return a.time < b.time; }),
                      c);
    trace(k, ac.op == OperationType::Arrival ? to_string(ArrivalNode::Touchdown) : to_string(DepartureNode::StartOfRoll),
          "operate");
    events_.push(now() + o.rot, {Kind::LeaveRunway, k, 0});
    ++next_[r];
    if (next_[r] < plan_[r].size()) {
      const auto succ = plan_[r][next_[r]];
      if (waiting_[succ]) {
        waiting_[succ] = false;
        events_.push(now(), {Kind::Request, succ, 0});
      }
    }
  }

  void finish() {
    auto& m = out_.metrics;
    const auto& net = sc_.network;
    std::vector<Millis> times(n_);
    int landings = 0, takeoffs = 0;
    double landing_sum = 0.0, takeoff_sum = 0.0;
    m.makespan_s = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      const auto& ac = sc_.aircraft[k];
      auto& o = out_.aircraft[k];
      times[k] = o.realized;
      o.delay_s = to_seconds(o.realized - ac.system_arrival - net.nominal_to_runway(ac.op, ac.weight_class));
      m.makespan_s = std::max(m.makespan_s, to_seconds(o.realized));
      if (ac.op == OperationType::Arrival) {
        ++landings;
        landing_sum += o.delay_s;
        m.max_landing_delay_s = std::max(m.max_landing_delay_s, o.delay_s);
      } else {
        ++takeoffs;
        takeoff_sum += o.delay_s;
        m.max_takeoff_delay_s = std::max(m.max_takeoff_delay_s, o.delay_s);
      }
      if (o.wait > sc_.noise.max_wait) m.infeasible = true;
    }
    if (landings) m.avg_landing_delay_s = landing_sum / landings;
    if (takeoffs) m.avg_takeoff_delay_s = takeoff_sum / takeoffs;
    const auto shifts = position_shifts(sc_.aircraft, times);
    double change = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      out_.aircraft[k].shift = shifts[k];
      change += std::abs(shifts[k]);
      if (shifts[k] != 0) {
        const double dev = to_seconds(times[k] - sc_.aircraft[k].target);
        m.unfairness += std::abs(shifts[k]) * dev * dev;
      }
    }
    if (n_) m.avg_sequence_change = change / static_cast<double>(n_);
    m.violations = count_violations();
    if (m.max_holding > sc_.noise.holding_cap) m.infeasible = true;
  }

  // Realized gaps against every earlier op on the same runway and on
  // dependent runways, plus runway occupancy overlap.
  int count_violations() const {
    std::vector<Committed> ops = committed_;
    std::stable_sort(ops.begin(), ops.end(), [](const Committed& a, const Committed& b) { return a.time < b.time; });
    int v = 0;
    for (std::size_t b = 0; b < ops.size(); ++b)
      for (std::size_t a = b; a-- > 0;) {
        if (ops[b].time - ops[a].time >= max_sep_) break;
        const auto band = sc_.band_between(ops[a].runway, ops[b].runway);
        if (ops[b].time - ops[a].time < sc_.separation.required(*ops[a].aircraft, *ops[b].aircraft, band)) ++v;
      }
    std::vector<std::vector<std::pair<Millis, Millis>>> occ(static_cast<std::size_t>(sc_.runway_count));
    for (std::size_t k = 0; k < n_; ++k) {
      const auto& o = out_.aircraft[k];
      occ[static_cast<std::size_t>(o.runway)].push_back({o.realized, o.realized + o.rot});
    }
    for (auto& list : occ) {
      std::sort(list.begin(), list.end());
      for (std::size_t i = 1; i < list.size(); ++i)
        if (list[i].first < list[i - 1].second) ++v;
    }
    return v;
  }

  const Scenario& sc_;
  RandomSource src_;
  const SimOptions& opts_;
  std::size_t n_;
  std::vector<const Slot*> slot_;
  std::vector<std::vector<std::size_t>> plan_;
  std::vector<std::size_t> next_;
  std::vector<Millis> busy_until_;
  std::vector<Committed> committed_;
  std::vector<bool> waiting_;
  std::vector<Millis> request_at_, iaf_at_, ready_at_;
  int holding_ = 0;
  Millis max_sep_ = 0;
  EventList<Event> events_;
  SimOutputs out_;
};

}  // namespace

DrawTable::DrawTable(const Scenario& scenario, const RandomSource& source) : source_(source) {
  const auto n = scenario.aircraft.size();
  const auto& cfg = scenario.noise;
  ids_.reserve(n);
  inject_.assign(n, 0);
  transit_.assign(n * kDraws, 0);
  rot_.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& ac = scenario.aircraft[k];
    ids_.push_back(ac.id);
    if (!cfg.enabled) {
      rot_[k] = cfg.rot_mean(ac.weight_class, ac.op);
      continue;
    }
    const auto id = static_cast<std::uint64_t>(ac.id);
    KeyedStream sys(source.seed, source.replication, id, Purpose::SystemArrival, source.flipped);
    inject_[k] = from_seconds(sys.truncated_normal(ac.op == OperationType::Arrival ? cfg.arrival_sysarr
                                                                                   : cfg.departure_sysarr));
    const KeyedStream transit(source.seed, source.replication, id, Purpose::Transit, source.flipped);
    const int first = ac.op == OperationType::Arrival ? 0 : NodeNetwork::kArrivalSegments;
    const int last = ac.op == OperationType::Arrival ? NodeNetwork::kArrivalSegments : static_cast<int>(kDraws);
    for (int d = first; d < last; ++d) transit_[k * kDraws + static_cast<std::size_t>(d)] = transit_draw(cfg, transit, d);
    KeyedStream rot(source.seed, source.replication, id, Purpose::Rot, source.flipped);
    rot_[k] = sample_rot(ac.weight_class, ac.op, cfg, rot);
  }
}

SimOutputs simulate(const Schedule& schedule, const Scenario& scenario, std::uint64_t seed) {
  return simulate(schedule, scenario, RandomSource{seed, 0, false});
}

SimOutputs simulate(const Schedule& schedule, const Scenario& scenario, const RandomSource& source,
                    const SimOptions& options) {
  return Run(schedule, scenario, source, options).execute();
}

ReplicationSummary run_replications(const Schedule& schedule, const Scenario& scenario, std::uint64_t base_seed,
                                    int n, bool antithetic, const SimOptions& options, bool keep_runs) {
  if (n < 1) throw std::invalid_argument("replication count must be at least 1");
  if (antithetic && n % 2 != 0) throw std::invalid_argument("antithetic replications need an even count");
  ReplicationSummary out;
  std::array<double, SimMetrics::kCount> sum{};
  std::vector<std::array<double, SimMetrics::kCount>> values;
  values.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    RandomSource src{base_seed, static_cast<std::uint64_t>(antithetic ? k - k % 2 : k), antithetic && k % 2 == 1};
    auto run = simulate(schedule, scenario, src, options);
    values.push_back(run.metrics.values());
    if (keep_runs) out.runs.push_back(std::move(run));
  }
  for (const auto& v : values)
    for (std::size_t i = 0; i < SimMetrics::kCount; ++i) sum[i] += v[i];
  for (std::size_t i = 0; i < SimMetrics::kCount; ++i) {
    const double mean = sum[i] / n;
    // Deviations from the first run, so identical runs give exactly zero.
    const double origin = values.front()[i];
    double shift = 0.0;
    for (const auto& v : values) shift += v[i] - origin;
    shift /= n;
    double ss = 0.0;
    for (const auto& v : values) ss += (v[i] - origin - shift) * (v[i] - origin - shift);
    out.stats[i] = {mean, n > 1 ? std::sqrt(ss / (n - 1)) : 0.0};
  }
  out.mean = {out.stats[0].mean, out.stats[1].mean};
  return out;
}

}  // namespace runway
