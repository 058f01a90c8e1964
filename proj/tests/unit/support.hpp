#pragma once

#include <random>
#include <vector>

#include "runway/domain.hpp"

namespace testing_support {

using namespace runway;

inline Aircraft make_aircraft(int id, OperationType op, WeightClass c, double ready_s, double target_s = -1,
                              double due_s = -1, double sysarr_s = -1) {
  Aircraft a;
  a.id = id;
  a.op = op;
  a.weight_class = c;
  a.ready = from_seconds(ready_s);
  a.target = from_seconds(target_s < 0 ? ready_s : target_s);
  a.due = due_s < 0 ? a.target + 600'000 : from_seconds(due_s);
  a.system_arrival = sysarr_s < 0 ? a.ready : from_seconds(sysarr_s);
  return a;
}

inline Aircraft arr(int id, WeightClass c, double ready_s) { return make_aircraft(id, OperationType::Arrival, c, ready_s); }
inline Aircraft dep(int id, WeightClass c, double ready_s) { return make_aircraft(id, OperationType::Departure, c, ready_s); }

/// Random small instance: ready times in [0, spread], targets = ready,
/// generous due windows.
inline Scenario random_instance(std::mt19937_64& rng, int n, int runways, SpacingBand band, double spread_s = 300.0,
                                double slack_s = 3000.0) {
  std::uniform_real_distribution<double> t(0.0, spread_s);
  std::uniform_int_distribution<int> cls(0, 3), op(0, 1);
  std::vector<Aircraft> list;
  for (int k = 0; k < n; ++k) {
    const double r = std::round(t(rng));
    list.push_back(make_aircraft(k + 1, op(rng) ? OperationType::Departure : OperationType::Arrival,
                                 static_cast<WeightClass>(cls(rng)), r, r, r + slack_s));
  }
  Scenario s = make_scenario(list, runways, band);
  s.max_delay = from_seconds(slack_s);
  return s;
}

}  // namespace testing_support
