#include "doctest.h"
#include "support.hpp"

#include <random>

#include "runway/baseline.hpp"
#include "runway/scenario_io.hpp"

using namespace runway;
using namespace testing_support;

namespace {

std::size_t count_kind(const std::vector<Violation>& v, Violation::Kind k) {
  std::size_t n = 0;
  for (const auto& x : v) n += x.kind == k;
  return n;
}

}  // namespace

TEST_CASE("weight classes and operation types parse back from their names") {
  for (auto c : kWeightClasses) CHECK(parse_weight_class(to_string(c)) == c);
  for (auto o : kOperationTypes) CHECK(parse_operation_type(to_string(o)) == o);
  CHECK_FALSE(parse_weight_class("super").has_value());
  CHECK(kWeightClasses.size() == 4);
}

TEST_CASE("default separation table entries") {
  const auto m = SeparationMatrix::faa_default();
  using enum WeightClass;
  using enum OperationType;
  CHECK(m.same_runway(Large, Large, Arrival, Arrival) == 69'000);
  CHECK(m.same_runway(Heavy, Small, Arrival, Arrival) == 196'000);
  CHECK(m.same_runway(Heavy, Large, Departure, Departure) == 120'000);
  CHECK(m.parallel(SpacingBand::Medium, Arrival, Arrival).kind == ParallelRule::Kind::Fixed);
  CHECK(m.parallel(SpacingBand::Medium, Arrival, Arrival).fixed == 40'000);
  const auto a = arr(1, Large, 0), b = arr(2, Large, 0);
  CHECK(m.required(a, b, std::nullopt) == 69'000);
  CHECK(m.required(a, b, SpacingBand::Wide) == 0);
  CHECK(m.required(a, b, SpacingBand::Close) == 69'000);
  CHECK(m.required(a, dep(3, Large, 0), SpacingBand::Close) == 0);
}

TEST_CASE("check_feasibility on small schedules") {
  SUBCASE("single aircraft at its ready time") {
    auto s = make_scenario({arr(1, WeightClass::Large, 100)}, 1);
    Schedule sch{{{1, 0, 1, from_seconds(100)}}};
    CHECK(check_feasibility(sch, s).empty());
  }
  SUBCASE("two large arrivals 68 s apart on one runway") {
    auto s = make_scenario({arr(1, WeightClass::Large, 0), arr(2, WeightClass::Large, 0)}, 1);
    Schedule sch{{{1, 0, 1, 0}, {2, 0, 2, 68'000}}};
    const auto v = check_feasibility(sch, s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::Separation);
    CHECK(v[0].leader_id == 1);
    CHECK(v[0].follower_id == 2);
    CHECK(v[0].slack_s == doctest::Approx(-1.0));
  }
  SUBCASE("start one second after the due time") {
    auto a = make_aircraft(1, OperationType::Arrival, WeightClass::Large, 0, 0, 600);
    auto s = make_scenario({a}, 1);
    Schedule sch{{{1, 0, 1, from_seconds(601)}}};
    const auto v = check_feasibility(sch, s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::Window);
  }
  SUBCASE("unknown and missing aircraft are structural errors") {
    auto s = make_scenario({arr(1, WeightClass::Large, 0)}, 1);
    CHECK_THROWS_AS(check_feasibility(Schedule{{{7, 0, 1, 0}}}, s), StructuralError);
    CHECK_THROWS_AS(check_feasibility(Schedule{}, s), StructuralError);
    CHECK_THROWS_AS(check_feasibility(Schedule{{{1, 3, 1, 0}}}, s), StructuralError);
  }
}

TEST_CASE("uniform shifts keep separation feasibility") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_instance(rng, 7, 2, static_cast<SpacingBand>(trial % 3));
    const auto sch = fcfs_schedule(s, {}, false);
    REQUIRE(separation_violations(sch, s).empty());
    for (Millis shift : {1LL, 999LL, 123'456LL}) {
      Schedule moved = sch;
      for (auto& sl : moved.slots) sl.start += shift;
      CHECK(separation_violations(moved, s).empty());
    }
  }
}

TEST_CASE("triangle inequality scan") {
  CHECK(check_triangle(SeparationMatrix::zeros()).empty());

  auto m = SeparationMatrix::zeros();
  using enum WeightClass;
  using enum OperationType;
  m.set_same_runway(Heavy, Small, Arrival, Arrival, 10'000);
  m.set_same_runway(Heavy, Large, Arrival, Arrival, 3'000);
  m.set_same_runway(Large, Small, Arrival, Arrival, 3'000);
  const auto v = check_triangle(m);
  bool found = false;
  for (const auto& t : v)
    found |= t.i == OpClass{Heavy, Arrival} && t.j == OpClass{Large, Arrival} && t.k == OpClass{Small, Arrival};
  CHECK(found);

  // Brute force over all 8x8x8 triples of the default table.
  const auto d = SeparationMatrix::faa_default();
  std::vector<OpClass> nodes;
  for (auto c : kWeightClasses)
    for (auto o : kOperationTypes) nodes.push_back({c, o});
  std::size_t expected = 0;
  for (auto i : nodes)
    for (auto j : nodes)
      for (auto k : nodes) {
        auto s = [&](OpClass a, OpClass b) { return d.same_runway(a.weight_class, b.weight_class, a.op, b.op); };
        expected += s(i, k) > s(i, j) + s(j, k);
      }
  CHECK(expected > 0);
  CHECK(check_triangle(d).size() == expected);
}

TEST_CASE("scenario invariants are validated") {
  auto good = make_scenario({arr(1, WeightClass::Large, 0)}, 2);
  CHECK_NOTHROW(good.validate());
  auto bad = good;
  bad.aircraft[0].due = bad.aircraft[0].target - 1;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = good;
  bad.aircraft[0].due = bad.aircraft[0].target + 600'001;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = good;
  bad.aircraft[0].system_arrival = bad.aircraft[0].ready + 1;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = good;
  bad.fleet_mix = {0.5, 0.5, 0.5, 0.0};
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = good;
  bad.runway_count = 0;
  CHECK_THROWS(bad.validate());
  bad = good;
  bad.aircraft.push_back(bad.aircraft[0]);
  CHECK_THROWS_AS(bad.validate(), StructuralError);
}

TEST_CASE("scenario json round trip is exact") {
  std::mt19937_64 rng(3);
  auto s = random_instance(rng, 9, 3, SpacingBand::Close);
  s.set_band(0, 2, SpacingBand::Wide);
  s.aircraft[2].ready += 1;  // odd millisecond
  s.aircraft[2].target += 7;
  s.aircraft[4].weight = 2.5;
  s.separation.set_same_runway(WeightClass::Small, WeightClass::Heavy, OperationType::Departure,
                               OperationType::Arrival, 12'345);
  s.separation.set_parallel(SpacingBand::Wide, OperationType::Arrival, OperationType::Arrival,
                            {ParallelRule::Kind::Fixed, 33'001});
  s.noise.transit.sd_s = 54.5;
  s.noise.max_wait = 420'000;
  const auto back = scenario_from_json(nlohmann::json::parse(to_json(s).dump()));
  CHECK(back.aircraft == s.aircraft);
  CHECK(back.separation == s.separation);
  CHECK(back.runway_count == s.runway_count);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(back.band(a, b) == s.band(a, b));
  CHECK(back.noise.transit.sd_s == s.noise.transit.sd_s);
  CHECK(back.noise.max_wait == s.noise.max_wait);
  CHECK(back.max_delay == s.max_delay);
  CHECK(separation_from_json(to_json(s.separation)) == s.separation);
}

TEST_CASE("scenario json errors") {
  nlohmann::json j = {{"version", "v1"},
                      {"runways", {{"count", 1}}},
                      {"aircraft", {{{"id", 1}, {"op", "arrival"}, {"class", "large"}, {"target_s", 10.0}}}}};
  const auto s = scenario_from_json(j);
  CHECK(s.aircraft[0].ready == 10'000);
  CHECK(s.aircraft[0].due == 610'000);
  CHECK(s.separation == SeparationMatrix::faa_default());

  auto bad = j;
  bad["version"] = "v2";
  CHECK_THROWS_AS(scenario_from_json(bad), std::invalid_argument);
  bad = j;
  bad["aircraft"][0]["class"] = "super";
  CHECK_THROWS_AS(scenario_from_json(bad), std::invalid_argument);
  bad = j;
  bad.erase("runways");
  CHECK_THROWS_AS(scenario_from_json(bad), std::invalid_argument);
  bad = j;
  bad["separation"] = {{"parallel", {{"wide", {{"arrival>arrival", "sometimes"}}}}}};
  CHECK_THROWS_AS(scenario_from_json(bad), std::invalid_argument);
}
