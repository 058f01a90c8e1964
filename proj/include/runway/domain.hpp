#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "runway/core_types.hpp"
#include "runway/sim_config.hpp"

namespace runway {

/// Raised when a schedule or scenario is structurally malformed (unknown ids,
/// duplicate assignments, runway out of range). Constraint violations are not
/// errors; they are reported as data by check_feasibility.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One landing or take-off request.
struct Aircraft {
  int id = 0;
  OperationType op = OperationType::Arrival;
  WeightClass weight_class = WeightClass::Large;
  Millis ready = 0;
  Millis target = 0;
  Millis due = 0;
  double weight = 1.0;
  /// Entry-point time for arrivals, holding-area time for departures.
  Millis system_arrival = 0;

  bool operator==(const Aircraft&) const = default;
};

/// Lateral spacing between a pair of parallel runways.
enum class SpacingBand : std::uint8_t {
  Close = 0,   // < 760 m
  Medium = 1,  // 760 m - 1310 m
  Wide = 2,    // > 1310 m
};

std::string_view to_string(SpacingBand b);
std::optional<SpacingBand> parse_spacing_band(std::string_view s);

struct ParallelRule {
  enum class Kind : std::uint8_t { SameAsSingle, Independent, Fixed };
  Kind kind = Kind::Independent;
  Millis fixed = 0;

  bool operator==(const ParallelRule&) const = default;
};

/// Minimum separation between a leader and a follower, for operations on the
/// same runway and on parallel runways.
class SeparationMatrix {
 public:
  /// FAA-derived time separations for the four wake classes.
  static SeparationMatrix faa_default();
  static SeparationMatrix zeros();

  Millis same_runway(WeightClass leader, WeightClass follower, OperationType leader_op,
                     OperationType follower_op) const {
    return same_[same_index(leader, follower, leader_op, follower_op)];
  }
  void set_same_runway(WeightClass leader, WeightClass follower, OperationType leader_op,
                       OperationType follower_op, Millis value);

  const ParallelRule& parallel(SpacingBand band, OperationType leader_op,
                               OperationType follower_op) const {
    return parallel_[parallel_index(band, leader_op, follower_op)];
  }
  void set_parallel(SpacingBand band, OperationType leader_op, OperationType follower_op,
                    ParallelRule rule);

  /// Required gap when `follower` operates after `leader`. `band` is empty for
  /// the same runway. Independent parallel pairs require 0.
  Millis required(const Aircraft& leader, const Aircraft& follower,
                  std::optional<SpacingBand> band) const;

  /// Arithmetic mean of the 64 same-runway entries, in seconds.
  double mean_seconds() const;

  bool operator==(const SeparationMatrix&) const = default;

 private:
  static constexpr std::size_t same_index(WeightClass l, WeightClass f, OperationType lo,
                                          OperationType fo) {
    return static_cast<std::size_t>(((index_of(l) * 4 + index_of(f)) * 2 + index_of(lo)) * 2 +
                                    index_of(fo));
  }
  static constexpr std::size_t parallel_index(SpacingBand b, OperationType lo, OperationType fo) {
    return static_cast<std::size_t>((static_cast<int>(b) * 2 + index_of(lo)) * 2 + index_of(fo));
  }

  std::array<Millis, 64> same_{};
  std::array<ParallelRule, 12> parallel_{};
};

/// A (class, operation) node of the separation graph.
struct OpClass {
  WeightClass weight_class;
  OperationType op;
  bool operator==(const OpClass&) const = default;
};

struct TriangleViolation {
  OpClass i, j, k;
  Millis direct;  // sep(i, k)
  Millis via;     // sep(i, j) + sep(j, k)
};

/// Every triple with sep(i,k) > sep(i,j) + sep(j,k) over the same-runway table.
std::vector<TriangleViolation> check_triangle(const SeparationMatrix& sep);

struct Scenario {
  std::vector<Aircraft> aircraft;
  int runway_count = 1;
  /// runway_count x runway_count, row-major, symmetric. Diagonal unused.
  std::vector<SpacingBand> spacing;
  SeparationMatrix separation = SeparationMatrix::faa_default();
  NodeNetwork network;
  /// Heavy, B757, Large, Small.
  std::array<double, 4> fleet_mix{0.101, 0.038, 0.743, 0.118};
  Millis max_delay = 600'000;
  StochasticConfig noise;

  SpacingBand band(int a, int b) const;
  void set_band(int a, int b, SpacingBand band);
  /// Empty optional for a == b (same runway).
  std::optional<SpacingBand> band_between(int a, int b) const {
    if (a == b) return std::nullopt;
    return band(a, b);
  }
  std::optional<std::size_t> index_of_id(int id) const;
  /// Throws StructuralError on broken invariants.
  void validate() const;
};

/// Builds an otherwise-default scenario with all runway pairs set to `band`.
Scenario make_scenario(std::vector<Aircraft> aircraft, int runway_count,
                       SpacingBand band = SpacingBand::Wide);

struct Slot {
  int aircraft_id = 0;
  int runway = 0;
  int position = 1;  // 1-based within the runway
  Millis start = 0;

  bool operator==(const Slot&) const = default;
};

/// The solution: per aircraft, its runway, sequence position and planned start.
struct Schedule {
  std::vector<Slot> slots;

  Millis makespan() const;
  const Slot* find(int aircraft_id) const;
  bool operator==(const Schedule&) const = default;
};

struct ObjectiveVector {
  double f1 = 0.0;
  double f2 = 0.0;

  double operator[](std::size_t k) const { return k == 0 ? f1 : f2; }
  bool operator==(const ObjectiveVector&) const = default;
};

struct Violation {
  enum class Kind : std::uint8_t { Window, Separation, Ordering };
  Kind kind;
  int leader_id;    // the aircraft itself for window violations
  int follower_id;  // -1 for window violations
  double slack_s;   // negative: how far the constraint is missed
};

std::string_view to_string(Violation::Kind k);

/// Time windows, pairwise separation (all ordered pairs on a runway and
/// dependent parallel pairs), and runway position/time order. Throws
/// StructuralError for unknown, duplicate, or missing aircraft.
std::vector<Violation> check_feasibility(const Schedule& schedule, const Scenario& scenario);

/// Only the separation part of check_feasibility.
std::vector<Violation> separation_violations(const Schedule& schedule, const Scenario& scenario);

}  // namespace runway
