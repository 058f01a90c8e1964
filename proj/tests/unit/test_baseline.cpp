#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "runway/baseline.hpp"
#include "runway/simulator.hpp"

using namespace runway;
using namespace testing_support;

namespace {

// Straight sequential timing of one runway order, all pairs separated.
Millis single_runway_makespan(const std::vector<Aircraft>& order, const SeparationMatrix& sep) {
  std::vector<Millis> t;
  Millis last = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    Millis s = order[k].ready;
    for (std::size_t i = 0; i < k; ++i) s = std::max(s, t[i] + sep.required(order[i], order[k], std::nullopt));
    t.push_back(s);
    last = std::max(last, s);
  }
  return last;
}

Millis best_single_runway(std::vector<Aircraft> list, const SeparationMatrix& sep) {
  if (list.empty()) return 0;
  std::sort(list.begin(), list.end(), [](const Aircraft& a, const Aircraft& b) { return a.id < b.id; });
  Millis best = std::numeric_limits<Millis>::max();
  do best = std::min(best, single_runway_makespan(list, sep));
  while (std::next_permutation(list.begin(), list.end(), [](const Aircraft& a, const Aircraft& b) { return a.id < b.id; }));
  return best;
}

std::vector<Millis> starts(const Schedule& s, const Scenario& sc) {
  std::vector<Millis> t;
  for (const auto& a : sc.aircraft) t.push_back(s.find(a.id)->start);
  return t;
}

}  // namespace

TEST_CASE("fcfs on hand-stepped instances") {
  SUBCASE("one aircraft") {
    auto s = make_scenario({arr(1, WeightClass::Large, 100)}, 1);
    const auto sch = fcfs_schedule(s);
    CHECK(sch.slots[0].start == 100'000);
    CHECK(sch.makespan() == 100'000);
  }
  SUBCASE("three large arrivals on one runway") {
    auto s = make_scenario({arr(1, WeightClass::Large, 0), arr(2, WeightClass::Large, 10), arr(3, WeightClass::Large, 200)}, 1);
    const auto sch = fcfs_schedule(s);
    CHECK(starts(sch, s) == std::vector<Millis>{0, 69'000, 200'000});
    CHECK(sch.makespan() == 200'000);
  }
  SUBCASE("two independent runways") {
    auto s = make_scenario({arr(1, WeightClass::Large, 0), arr(2, WeightClass::Large, 0)}, 2, SpacingBand::Wide);
    const auto sch = fcfs_schedule(s);
    CHECK(starts(sch, s) == std::vector<Millis>{0, 0});
    CHECK(sch.slots[0].runway != sch.slots[1].runway);
  }
  SUBCASE("window overflow is reported with the aircraft") {
    auto a = make_aircraft(1, OperationType::Arrival, WeightClass::Heavy, 0, 0, 0);
    auto b = make_aircraft(2, OperationType::Arrival, WeightClass::Small, 0, 0, 100);
    auto s = make_scenario({a, b}, 1);
    try {
      fcfs_schedule(s);
      FAIL("expected WindowInfeasible");
    } catch (const WindowInfeasible& e) {
      CHECK(e.aircraft_id == 2);
      CHECK(e.start == 196'000);
      CHECK(e.due == 100'000);
    }
    CHECK_NOTHROW(fcfs_schedule(s, {}, false));
  }
}

TEST_CASE("fcfs is fair against itself and feasible") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_instance(rng, 12, 1 + trial % 3, static_cast<SpacingBand>(trial % 3));
    for (auto& a : s.aircraft) a.system_arrival = a.ready - from_seconds(std::uniform_real_distribution<double>(0, 30)(rng));
    const auto sch = fcfs_schedule(s, {}, false);
    CHECK(separation_violations(sch, s).empty());
    CHECK(fairness(s.aircraft, starts(sch, s)) == 0.0);
    for (int v : position_shifts(s.aircraft, starts(sch, s))) CHECK(v == 0);
  }
}

TEST_CASE("priority index") {
  const auto sep = SeparationMatrix::faa_default();
  const GreedyParams p;
  auto j = arr(1, WeightClass::Large, 0);
  SUBCASE("all exponents zero") {
    j.due = 0;
    CHECK(priority_index(j, nullptr, 10.0, p, sep) == doctest::Approx(1.0));
  }
  SUBCASE("direct substitution") {
    j.weight = 2.0;
    j.due = from_seconds(12.0);
    j.ready = 0;
    // s_ij = 0.75 * s_bar with k2 = 0.75 gives a factor e^-1.
    GreedyParams q = p;
    const Aircraft prev = arr(2, WeightClass::Large, 0);
    q.s_bar = 69.0 / 0.75;
    const double v = priority_index(j, &prev, 10.0, q, sep);
    CHECK(v == doctest::Approx(2.0 * std::exp(-1.0) * std::exp(-1.0)));
    CHECK(priority_index(j, nullptr, 10.0, q, sep) == doctest::Approx(2.0 * std::exp(-1.0)));
  }
  SUBCASE("larger separation lowers the index") {
    const Aircraft small_lead = arr(2, WeightClass::Small, 0), heavy_lead = arr(3, WeightClass::Heavy, 0);
    auto f = arr(4, WeightClass::Small, 0);
    CHECK(priority_index(f, &heavy_lead, 0.0, p, sep) < priority_index(f, &small_lead, 0.0, p, sep));
  }
  SUBCASE("weights scale the index") {
    std::mt19937_64 rng(5);
    auto s = random_instance(rng, 8, 1, SpacingBand::Wide);
    for (auto& a : s.aircraft) a.weight = 1.0 + (a.id % 3);
    auto scaled = s;
    for (auto& a : scaled.aircraft) a.weight *= 3.5;
    for (const auto& a : s.aircraft) {
      const auto& b = scaled.aircraft[static_cast<std::size_t>(a.id - 1)];
      CHECK(priority_index(b, nullptr, 40.0, p, sep) == doctest::Approx(3.5 * priority_index(a, nullptr, 40.0, p, sep)));
    }
    CHECK(greedy_schedule(s).schedule == greedy_schedule(scaled).schedule);
  }
  SUBCASE("log form stays finite far from the due time") {
    j.due = from_seconds(1e6);
    CHECK(priority_index(j, nullptr, 0.0, p, sep) == 0.0);
    CHECK(std::isfinite(log_priority_index(j, nullptr, 0.0, p, sep)));
  }
}

TEST_CASE("greedy schedule") {
  SUBCASE("single aircraft matches fcfs") {
    auto s = make_scenario({arr(1, WeightClass::B757, 42)}, 2);
    CHECK(greedy_schedule(s).schedule == fcfs_schedule(s));
  }
  SUBCASE("heavy leader with two smalls") {
    auto s = make_scenario({arr(1, WeightClass::Heavy, 0), arr(2, WeightClass::Small, 1), arr(3, WeightClass::Small, 2)}, 1);
    const auto g = greedy_schedule(s);
    CHECK(g.makespan <= fcfs_schedule(s).makespan());
    CHECK(g.makespan == g.schedule.makespan());
  }
  SUBCASE("always feasible on loose windows") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 60; ++trial) {
      auto s = random_instance(rng, 10, 1 + trial % 3, static_cast<SpacingBand>(trial % 3));
      const auto g = greedy_schedule(s);
      CHECK(check_feasibility(g.schedule, s).empty());
    }
  }
}

TEST_CASE("brute force against independent enumeration") {
  const auto sep = SeparationMatrix::faa_default();
  SUBCASE("one aircraft") {
    auto a = make_aircraft(1, OperationType::Arrival, WeightClass::Large, 50, 30, 600);
    a.weight = 2.0;
    auto s = make_scenario({a}, 1);
    const auto r = brute_force_optimal(s, Objective::WeightedTardiness);
    CHECK(r.schedule.slots[0].start == 50'000);
    CHECK(r.value == doctest::Approx(2.0 * 20.0));
    CHECK(brute_force_optimal(s, Objective::Makespan).value == doctest::Approx(50.0));
  }
  SUBCASE("three aircraft, one runway: best of six orders") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      auto s = random_instance(rng, 3, 1, SpacingBand::Wide, 200.0);
      const auto r = brute_force_optimal(s, Objective::Makespan);
      CHECK(r.value == doctest::Approx(to_seconds(best_single_runway(s.aircraft, sep))));
      CHECK(check_feasibility(r.schedule, s).empty());
    }
  }
  SUBCASE("four aircraft, two independent runways") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
      auto s = random_instance(rng, 4, 2, SpacingBand::Wide, 200.0);
      Millis best = std::numeric_limits<Millis>::max();
      for (int mask = 0; mask < 16; ++mask) {
        std::vector<Aircraft> r0, r1;
        for (int k = 0; k < 4; ++k) (mask >> k & 1 ? r1 : r0).push_back(s.aircraft[static_cast<std::size_t>(k)]);
        best = std::min(best, std::max(best_single_runway(r0, sep), best_single_runway(r1, sep)));
      }
      CHECK(brute_force_optimal(s, Objective::Makespan).value == doctest::Approx(to_seconds(best)));
    }
  }
  SUBCASE("greedy never beats the optimum") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      auto s = random_instance(rng, 2 + trial % 5, 1 + trial % 2, static_cast<SpacingBand>(trial % 3), 250.0);
      const auto opt = brute_force_optimal(s, Objective::Makespan);
      CHECK(to_seconds(greedy_schedule(s).makespan) >= opt.value - 1e-9);
    }
  }
  SUBCASE("size limits") {
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(brute_force_optimal(random_instance(rng, 10, 1, SpacingBand::Wide), Objective::Makespan),
                    std::invalid_argument);
    CHECK_THROWS_AS(brute_force_optimal(random_instance(rng, 3, 4, SpacingBand::Wide), Objective::Makespan),
                    std::invalid_argument);
  }
  SUBCASE("objective values") {
    auto a = make_aircraft(1, OperationType::Arrival, WeightClass::Large, 0, 100, 600);
    auto b = make_aircraft(2, OperationType::Arrival, WeightClass::Large, 0, 100, 600);
    b.weight = 3.0;
    auto s = make_scenario({a, b}, 1);
    Schedule sch{{{1, 0, 1, 90'000}, {2, 0, 2, 160'000}}};
    CHECK(objective_value(sch, s, Objective::Makespan) == doctest::Approx(160.0));
    CHECK(objective_value(sch, s, Objective::WeightedTardiness) == doctest::Approx(3.0 * 60.0));
    CHECK(objective_value(sch, s, Objective::EarlinessTardiness) == doctest::Approx(10.0 + 3.0 * 60.0));
  }
}
