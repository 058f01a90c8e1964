#pragma once

#include <stdexcept>
#include <vector>

#include "runway/domain.hpp"
#include "runway/timeline.hpp"

namespace runway {

/// A forced start beyond an aircraft's due time.
class WindowInfeasible : public std::runtime_error {
 public:
  WindowInfeasible(int aircraft_id, Millis start, Millis due);
  int aircraft_id;
  Millis start;
  Millis due;
};

struct GreedyParams {
  double k1 = 2.0;
  double k2 = 0.75;
  double k3 = 1.7;
  /// Average separation in seconds; <= 0 means the mean of the scenario's
  /// same-runway matrix.
  double s_bar = 0.0;
};

/// Aircraft ordered by (system_arrival, id), each on the runway where it can
/// go first. Starts never decrease within an operation type, so the
/// per-type order is exactly the FCFS order. Throws WindowInfeasible when
/// `strict` and a start exceeds its due time.
Schedule fcfs_schedule(const Scenario& scenario, const std::vector<PlacedOp>& fixed = {},
                       bool strict = true);

/// Look-ahead composite dispatching index of aircraft j at time t (seconds),
/// following `prev` (nullptr: no predecessor).
double priority_index(const Aircraft& j, const Aircraft* prev, double t, const GreedyParams& params,
                      const SeparationMatrix& sep);
/// Natural log of priority_index; finite where the index itself underflows.
double log_priority_index(const Aircraft& j, const Aircraft* prev, double t, const GreedyParams& params,
                          const SeparationMatrix& sep);

struct GreedyResult {
  Schedule schedule;
  Millis makespan = 0;
};

/// Repeatedly takes the unscheduled aircraft with the highest index at the
/// current decision time and puts it on the runway where it can start first.
GreedyResult greedy_schedule(const Scenario& scenario, const GreedyParams& params = {},
                             const std::vector<PlacedOp>& fixed = {}, bool strict = true);

enum class Objective : std::uint8_t { Makespan, WeightedTardiness, EarlinessTardiness };

/// Value of a timed schedule under one of the scalar objectives, in seconds.
double objective_value(const Schedule& schedule, const Scenario& scenario, Objective objective);

struct BruteForceResult {
  Schedule schedule;
  double value = 0.0;
  /// False when no sequence meets every due time (best overall is returned).
  bool window_feasible = true;
  std::size_t sequences_tried = 0;
};

inline constexpr std::size_t kBruteForceMaxAircraft = 9;
inline constexpr int kBruteForceMaxRunways = 3;

/// Exhaustive search over runway assignments and per-runway orders. Throws
/// std::invalid_argument past 9 aircraft or 3 runways.
BruteForceResult brute_force_optimal(const Scenario& scenario, Objective objective);

}  // namespace runway
