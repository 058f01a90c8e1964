#include "runway/sim_config.hpp"

#include <algorithm>

namespace runway {

std::string_view to_string(ArrivalNode n) {
  switch (n) {
    case ArrivalNode::EntryPoint: return "entry_point";
    case ArrivalNode::MeterFix: return "meter_fix";
    case ArrivalNode::IAF: return "iaf";
    case ArrivalNode::FAF: return "faf";
    case ArrivalNode::SAF: return "saf";
    case ArrivalNode::Threshold: return "threshold";
    case ArrivalNode::Touchdown: return "touchdown";
    case ArrivalNode::RunwayExit: return "runway_exit";
  }
  return "?";
}

std::string_view to_string(DepartureNode n) {
  switch (n) {
    case DepartureNode::HoldingArea: return "holding_area";
    case DepartureNode::StartOfRoll: return "start_of_roll";
    case DepartureNode::TakeOff: return "take_off";
    case DepartureNode::InitialClimb: return "initial_climb";
    case DepartureNode::EnRouteClimb: return "en_route_climb";
    case DepartureNode::DepartureFix: return "departure_fix";
  }
  return "?";
}

namespace {
Millis transit_ms(double nm, double kts) { return from_seconds(nm / kts * 3600.0); }
}  // namespace

Millis NodeNetwork::arrival_segment(int segment, WeightClass c) const {
  const auto s = static_cast<std::size_t>(segment);
  return transit_ms(arrival_nm[s], arrival_kts[s][static_cast<std::size_t>(index_of(c))]);
}

Millis NodeNetwork::departure_segment(int segment, WeightClass c) const {
  const auto s = static_cast<std::size_t>(segment);
  return transit_ms(departure_nm[s], departure_kts[s][static_cast<std::size_t>(index_of(c))]);
}

Millis NodeNetwork::nominal_arrival_path(WeightClass c) const {
  Millis total = 0;
  for (int s = 0; s < kArrivalSegments; ++s) total += arrival_segment(s, c);
  return total;
}

Millis NodeNetwork::nominal_after_iaf(WeightClass c) const {
  Millis total = 0;
  for (int s = kFirstSegmentAfterIaf; s < kArrivalSegments; ++s) total += arrival_segment(s, c);
  return total;
}

Millis NodeNetwork::nominal_to_runway(OperationType op, WeightClass c) const {
  return op == OperationType::Arrival ? nominal_arrival_path(c) : taxi_to_roll;
}

bool NodeNetwork::valid() const {
  auto positive = [](double v) { return v > 0.0; };
  if (!std::all_of(arrival_nm.begin(), arrival_nm.end(), positive)) return false;
  if (!std::all_of(departure_nm.begin(), departure_nm.end(), positive)) return false;
  for (const auto& row : arrival_kts)
    if (!std::all_of(row.begin(), row.end(), positive)) return false;
  for (const auto& row : departure_kts)
    if (!std::all_of(row.begin(), row.end(), positive)) return false;
  return taxi_to_roll >= 0;
}

std::array<double, 2> StochasticConfig::rot_bounds(WeightClass c, OperationType op) const {
  const double mean = rot_mean(c, op);
  const double lo = rot_lo_factor * mean;
  if (rot_hi_factor > 0.0) return {lo, rot_hi_factor * mean};
  const double p = rot_shape[static_cast<std::size_t>(index_of(c))].unit_mean();
  return {lo, lo + (mean - lo) / p};
}

bool StochasticConfig::valid() const {
  for (const auto* tn : {&arrival_sysarr, &departure_sysarr, &transit})
    if (tn->sd_s < 0.0 || tn->lo_sd > tn->hi_sd) return false;
  for (const auto& b : rot_shape)
    if (b.alpha <= 0.0 || b.beta <= 0.0) return false;
  for (auto c : kWeightClasses)
    for (auto op : kOperationTypes) {
      const auto [lo, hi] = rot_bounds(c, op);
      if (!(lo < hi) || lo < 0.0) return false;
    }
  return min_segment_fraction >= 0.0 && holding_cap >= 0 && max_wait >= 0;
}

}  // namespace runway
