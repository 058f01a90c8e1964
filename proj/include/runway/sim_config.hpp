#pragma once

#include <array>

#include "runway/core_types.hpp"

namespace runway {

enum class ArrivalNode : std::uint8_t {
  EntryPoint,
  MeterFix,
  IAF,
  FAF,
  SAF,
  Threshold,
  Touchdown,
  RunwayExit,
};

enum class DepartureNode : std::uint8_t {
  HoldingArea,
  StartOfRoll,
  TakeOff,
  InitialClimb,
  EnRouteClimb,
  DepartureFix,
};

std::string_view to_string(ArrivalNode n);
std::string_view to_string(DepartureNode n);

/// Arrival and departure path geometry with per-class ground speeds.
///
/// Arrival segments: entry->meter fix, meter fix->IAF, IAF->FAF, FAF->SAF,
/// SAF->threshold. Departure segments: take-off->initial climb, initial
/// climb->en-route climb, en-route climb->departure fix.
struct NodeNetwork {
  static constexpr int kArrivalSegments = 5;
  static constexpr int kDepartureSegments = 3;
  /// Index of the segment that starts at the IAF (holding pattern exit).
  static constexpr int kFirstSegmentAfterIaf = 2;

  std::array<double, kArrivalSegments> arrival_nm{10.0, 8.0, 7.0, 3.0, 2.0};
  std::array<double, kDepartureSegments> departure_nm{2.0, 3.0, 10.0};

  /// Knots, [segment][class] with classes Heavy, B757, Large, Small.
  std::array<std::array<double, 4>, kArrivalSegments> arrival_kts{{
      {185.0, 185.0, 190.0, 191.0},
      {185.0, 185.0, 190.0, 191.0},
      {170.0, 170.0, 174.0, 170.0},
      {165.0, 163.0, 165.0, 160.0},
      {135.0, 133.0, 134.0, 120.0},
  }};
  std::array<std::array<double, 4>, kDepartureSegments> departure_kts{{
      {173.0, 166.0, 154.0, 126.0},
      {184.0, 177.0, 175.0, 141.0},
      {251.0, 243.0, 231.0, 182.0},
  }};

  /// Holding area to start of roll.
  Millis taxi_to_roll = 0;

  Millis arrival_segment(int segment, WeightClass c) const;
  Millis departure_segment(int segment, WeightClass c) const;
  /// Entry point to threshold, nominal speeds.
  Millis nominal_arrival_path(WeightClass c) const;
  /// IAF to threshold, nominal speeds.
  Millis nominal_after_iaf(WeightClass c) const;
  /// System arrival to the runway operation, nominal speeds.
  Millis nominal_to_runway(OperationType op, WeightClass c) const;
  bool valid() const;
};

/// Normal distribution truncated at mean + lo_sd*sd and mean + hi_sd*sd.
struct TruncatedNormal {
  double mean_s = 0.0;
  double sd_s = 0.0;
  double lo_sd = -3.0;
  double hi_sd = 3.0;
};

struct BetaShape {
  double alpha = 1.0;
  double beta = 1.0;
  double unit_mean() const { return alpha / (alpha + beta); }
};

/// Random inputs of one simulation run.
struct StochasticConfig {
  bool enabled = true;
  TruncatedNormal arrival_sysarr{0.0, 30.0};
  TruncatedNormal departure_sysarr{-30.0, 90.0};
  TruncatedNormal transit{0.0, 108.0};
  /// Perturbed segment time never drops below this fraction of nominal.
  double min_segment_fraction = 0.5;

  /// ROT shapes per class (Heavy, B757, Large, Small).
  std::array<BetaShape, 4> rot_shape{{{27.48, 12.03}, {27.48, 12.03}, {26.86, 12.42}, {26.86, 12.42}}};
  /// Mean ROT in seconds, [op][class].
  std::array<std::array<double, 4>, 2> rot_mean_s{{{40.0, 40.0, 35.0, 30.0}, {50.0, 45.0, 40.0, 30.0}}};
  /// Lower end of the ROT support as a fraction of the mean. The upper end is
  /// placed so the scaled Beta mean equals the tabulated mean, unless
  /// rot_hi_factor is set (> 0).
  double rot_lo_factor = 0.6;
  double rot_hi_factor = 0.0;

  /// Holding-pattern infeasibility indicators.
  int holding_cap = 8;
  Millis max_wait = 600'000;

  /// [lo, hi] of the ROT support in seconds.
  std::array<double, 2> rot_bounds(WeightClass c, OperationType op) const;
  double rot_mean(WeightClass c, OperationType op) const {
    return rot_mean_s[static_cast<std::size_t>(index_of(op))][static_cast<std::size_t>(index_of(c))];
  }
  bool valid() const;
};

}  // namespace runway
