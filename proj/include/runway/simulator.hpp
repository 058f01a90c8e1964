#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "runway/domain.hpp"
#include "runway/rng.hpp"
#include "runway/timeline.hpp"

namespace runway {

/// Which random numbers a run uses. Replication k of a batch uses
/// replication index k; an antithetic partner reuses its pair's index with
/// `flipped` set.
struct RandomSource {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  bool flipped = false;
};

struct TraceRecord {
  Millis time;
  int aircraft_id;
  std::string_view node;
  std::string_view kind;
};
using TraceSink = std::function<void(const TraceRecord&)>;

/// Sink writing "time_ms,aircraft_id,node,event_kind" rows (header first).
TraceSink csv_trace(std::ostream& out);

/// Every random perturbation one run of `source` applies to the scenario's
/// aircraft, drawn up front. Runs handed the table skip the quantile work and
/// produce exactly what drawing on the fly would.
class DrawTable {
 public:
  DrawTable(const Scenario& scenario, const RandomSource& source);

  const RandomSource& source() const { return source_; }
  std::size_t size() const { return ids_.size(); }
  int id(std::size_t k) const { return ids_[k]; }
  Millis inject_offset(std::size_t k) const { return inject_[k]; }
  /// Additive noise of transit draw `draw` (arrival segments, then climb).
  Millis transit_noise(std::size_t k, int draw) const { return transit_[k * kDraws + static_cast<std::size_t>(draw)]; }
  double rot_s(std::size_t k) const { return rot_[k]; }

  static constexpr std::size_t kDraws = NodeNetwork::kArrivalSegments + NodeNetwork::kDepartureSegments;

 private:
  RandomSource source_;
  std::vector<int> ids_;
  std::vector<Millis> inject_;
  std::vector<Millis> transit_;
  std::vector<double> rot_;
};

struct SimOptions {
  /// Operations committed before this schedule starts (earlier planning
  /// windows). They hold the runway for their mean ROT and bind separation.
  std::vector<PlacedOp> context;
  TraceSink trace;
  /// Optional pre-drawn perturbations; must match the run's random source
  /// and the scenario's aircraft.
  const DrawTable* draws = nullptr;
};

struct AircraftOutcome {
  int id = 0;
  OperationType op = OperationType::Arrival;
  int runway = 0;
  Millis planned = 0;
  Millis realized = 0;  // touchdown or start of roll
  Millis rot = 0;
  Millis wait = 0;      // holding plus time held at the runway
  double delay_s = 0.0; // realized minus unimpeded estimate
  int shift = 0;        // realized position minus FCFS position, per op type
};

struct SimMetrics {
  static constexpr std::size_t kCount = 10;
  static constexpr std::array<std::string_view, kCount> kNames{
      "makespan_s",          "unfairness",          "avg_landing_delay_s", "max_landing_delay_s",
      "avg_takeoff_delay_s", "max_takeoff_delay_s", "avg_sequence_change", "violations",
      "max_holding",         "infeasible"};

  double makespan_s = 0.0;
  double unfairness = 0.0;
  double avg_landing_delay_s = 0.0;
  double max_landing_delay_s = 0.0;
  double avg_takeoff_delay_s = 0.0;
  double max_takeoff_delay_s = 0.0;
  double avg_sequence_change = 0.0;
  int violations = 0;
  int max_holding = 0;
  bool infeasible = false;

  std::array<double, kCount> values() const;
};

struct SimOutputs {
  std::vector<AircraftOutcome> aircraft;  // schedule aircraft, scenario order
  SimMetrics metrics;
  ObjectiveVector objectives() const { return {metrics.makespan_s, metrics.unfairness}; }
};

SimOutputs simulate(const Schedule& schedule, const Scenario& scenario, std::uint64_t seed);
SimOutputs simulate(const Schedule& schedule, const Scenario& scenario, const RandomSource& source,
                    const SimOptions& options = {});

struct MetricStats {
  double mean = 0.0;
  double sd = 0.0;
};

struct ReplicationSummary {
  ObjectiveVector mean;
  std::array<MetricStats, SimMetrics::kCount> stats{};
  std::vector<SimOutputs> runs;

  const MetricStats& stat(std::string_view name) const;
};

/// n runs with replication indices 0..n-1. With `antithetic`, n must be even
/// and run 2k+1 is the flipped twin of run 2k.
ReplicationSummary run_replications(const Schedule& schedule, const Scenario& scenario, std::uint64_t base_seed,
                                    int n, bool antithetic, const SimOptions& options = {},
                                    bool keep_runs = true);

/// Signed position shift of each aircraft (indexed like `aircraft`): position
/// by (time, FCFS rank) minus FCFS position by (system_arrival, id), both
/// within the aircraft's operation type.
std::vector<int> position_shifts(const std::vector<Aircraft>& aircraft, const std::vector<Millis>& times);

/// Sum of |shift| * (t - target)^2 in seconds squared.
double fairness(const std::vector<Aircraft>& aircraft, const std::vector<Millis>& times);

/// One runway occupancy time in seconds: Beta draw scaled onto the class's
/// support. With noise disabled, the tabulated mean.
double sample_rot(WeightClass c, OperationType op, const StochasticConfig& config, KeyedStream& stream);

}  // namespace runway
