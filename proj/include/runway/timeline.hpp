#pragma once

#include <vector>

#include "runway/domain.hpp"

namespace runway {

/// Runway sequences as aircraft indices into Scenario::aircraft, one vector per
/// runway in position order. This is the encoding the search works on; start
/// times follow from it.
using RunwaySequences = std::vector<std::vector<int>>;

struct PlacedOp {
  Aircraft aircraft;
  int runway = 0;
  Millis start = 0;
};

/// Operations already committed to runways. Answers "earliest time aircraft j
/// can operate on runway r" against every committed operation.
class Timeline {
 public:
  Timeline(const Scenario& scenario, std::vector<PlacedOp> fixed = {});

  /// Smallest t >= lower_bound such that j can be appended to runway r:
  /// separated from every earlier op on r, not before the last op on r, and
  /// clear of dependent ops on other runways in both directions.
  Millis earliest(const Aircraft& j, int runway, Millis lower_bound) const;

  void place(const Aircraft& j, int runway, Millis start);

  const std::vector<PlacedOp>& ops() const { return ops_; }
  /// Start of the last op on a runway, if any.
  std::optional<Millis> last_start(int runway) const;
  const Scenario& scenario() const { return *scenario_; }

 private:
  const Scenario* scenario_;
  std::vector<PlacedOp> ops_;
  std::vector<std::vector<std::size_t>> by_runway_;
};

struct TimedSequences {
  Schedule schedule;
  /// All starts within [ready, due].
  bool window_feasible = true;
};

/// Start times for fixed runway sequences: heads of all runways compete and
/// the one with the earliest feasible start is placed next, each at
/// max(ready, earliest separated time).
TimedSequences time_sequences(const Scenario& scenario, const RunwaySequences& sequences,
                              const std::vector<PlacedOp>& fixed = {});

/// Runway sequences implied by a schedule (indices into scenario.aircraft).
RunwaySequences sequences_of(const Schedule& schedule, const Scenario& scenario);

/// Committed ops of a schedule, for carrying runway state across windows.
std::vector<PlacedOp> placed_ops(const Schedule& schedule, const Scenario& scenario);

}  // namespace runway
