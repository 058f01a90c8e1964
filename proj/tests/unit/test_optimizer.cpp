#include "doctest.h"
#include "support.hpp"

#include <map>
#include <random>
#include <set>

#include "runway/baseline.hpp"
#include "runway/optimizer.hpp"
#include "runway/problems.hpp"

using namespace runway;
using namespace testing_support;

namespace {

// Continuous problem that records every evaluated encoding.
struct Counting : ContinuousProblem {
  using ContinuousProblem::ContinuousProblem;
  std::map<SolutionKey, int> calls;
  ObjectiveVector evaluate(const Solution& s) {
    ++calls[encode(s)];
    return ContinuousProblem::evaluate(s);
  }
};

OptParams small_budget(std::uint64_t seed, std::uint64_t evals = 1500) {
  OptParams p = OptParams::moo();
  p.max_evaluations = evals;
  p.seed = seed;
  return p;
}

bool pairwise_nondominated(const std::vector<ObjectiveVector>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (i != j && strictly_dominates(v[i], v[j])) return false;
  return true;
}

}  // namespace

TEST_CASE("parameter presets and checks") {
  const auto m = OptParams::moo();
  CHECK(m.psize == 100);
  CHECK(m.b == 20);
  CHECK(m.improve_threshold == 7);
  CHECK(m.dist_threshold == 17.0);
  CHECK(m.archive_cap == 55);
  const auto s = OptParams::sbo();
  CHECK(s.psize == 120);
  CHECK(s.b == 22);
  CHECK(s.improve_threshold == 6);
  CHECK(s.dist_threshold == 14.0);
  CHECK(s.archive_cap == 45);
  CHECK(s.b1 + s.b2() == s.b);
  OptParams bad = m;
  bad.b = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = m;
  bad.psize = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = m;
  bad.max_evaluations = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("tabu memory is exact") {
  TabuMemory mem;
  CHECK(mem.mark_visited({1, 2, 3}));
  CHECK(!mem.mark_visited({1, 2, 3}));
  CHECK(!mem.visited({3, 2, 1}));
  CHECK(!mem.cached({1, 2, 3}));
  mem.store({1, 2, 3}, {4, 5});
  CHECK(mem.cached({1, 2, 3}) == ObjectiveVector{4, 5});
  CHECK(mem.mark_combined(7, 3));
  CHECK(!mem.mark_combined(3, 7));
  CHECK(mem.combined(3, 7));
}

TEST_CASE("archive stays non-dominated and bounded") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  Archive<int> ar(20);
  for (int k = 0; k < 3000; ++k) {
    ObjectiveVector o{u(rng), u(rng)};
    if (k % 2) o.f2 = 1.0 - o.f1 + 0.05 * u(rng);
    ar.insert(Member<int>{k, o, {static_cast<std::int64_t>(k)}, static_cast<std::uint64_t>(k)});
    REQUIRE(ar.size() <= 20);
    REQUIRE(pairwise_nondominated(ar.objectives()));
  }
  CHECK(!ar.insert(ar.items()[0]));
}

TEST_CASE("fitness order ranks fronts, then crowding") {
  std::vector<Member<int>> set;
  const std::vector<ObjectiveVector> objs{{2, 2}, {0, 3}, {1, 1}, {3, 0}, {3, 3}};
  for (int k = 0; k < 5; ++k) set.push_back({k, objs[static_cast<std::size_t>(k)], {k}, static_cast<std::uint64_t>(k)});
  const auto order = fitness_order(set);
  CHECK(order.back() == 4);
  CHECK(order[3] == 0);
  CHECK(order[2] == 2);  // interior member of the first front
}

TEST_CASE("engine invariants on a noisy benchmark") {
  Counting prob(Benchmark::Zdt3, 0.05, 3);
  ScatterSearch<Counting> ss(prob, small_budget(5));
  const auto res = ss.run();
  for (const auto& [key, n] : prob.calls) REQUIRE(n == 1);
  CHECK(res.stats.evaluations == prob.calls.size());
  CHECK(res.stats.evaluations <= 1500);
  CHECK(ss.refset().size() <= 20);
  std::set<SolutionKey> keys;
  for (const auto& m : ss.refset()) keys.insert(m.key);
  CHECK(keys.size() == ss.refset().size());
  std::vector<ObjectiveVector> front;
  for (const auto& m : res.front) front.push_back(m.obj);
  CHECK(pairwise_nondominated(front));
  CHECK(pairwise_nondominated(ss.archive().objectives()));
  CHECK(!res.progress.empty());
}

TEST_CASE("same seed gives the same front") {
  auto run = [](std::uint64_t seed) {
    ContinuousProblem prob(Benchmark::FonsecaFleming, 0.1, 9);
    ScatterSearch<ContinuousProblem> ss(prob, small_budget(seed, 800));
    std::vector<ObjectiveVector> out;
    for (const auto& m : ss.run().front) out.push_back(m.obj);
    return out;
  };
  CHECK(run(4) == run(4));
  CHECK(run(4) != run(5));
}

TEST_CASE("archive quality never drops under a noise-free evaluator") {
  for (auto b : {Benchmark::FonsecaFleming, Benchmark::Zdt3}) {
    ContinuousProblem prob(b, 0.0, 1);
    OptParams p = small_budget(2, 3000);
    p.archive_cap = 100000;  // no crowding truncation
    ScatterSearch<ContinuousProblem> ss(prob, p);
    const auto res = ss.run();
    for (std::size_t k = 1; k < res.progress.size(); ++k)
      CHECK(res.progress[k].hvm >= res.progress[k - 1].hvm - 1e-12);
  }
}

TEST_CASE("refset construction and updates") {
  ContinuousProblem prob(Benchmark::Zdt3, 0.0, 1);
  OptParams p = small_budget(8);
  ScatterSearch<ContinuousProblem> ss(prob, p);
  const auto seed = prob.initial();
  auto [fresh, short_flag] = ss.diversification_generate(seed, 60);
  CHECK(fresh.size() == 60);
  CHECK(!short_flag);
  for (const auto& s : fresh) CHECK(ss.memory().visited(prob.encode(s)));
  std::vector<Member<ContinuousProblem::Solution>> pop;
  for (const auto& s : fresh) pop.push_back(*ss.evaluate(s));
  ss.refset_init(pop);
  CHECK(ss.refset().size() == 20);
  const auto pairs = ss.subset_generate();
  CHECK(!pairs.empty());
  CHECK(ss.subset_generate().empty());  // every pair already emitted
  // A candidate dominating everything enters.
  auto best = pop.front();
  best.obj = {-1, -1};
  best.key = {424242};
  best.serial = 999999;
  CHECK(ss.refset_update_dynamic(best));
  bool found = false;
  for (const auto& m : ss.refset()) found = found || m.serial == best.serial;
  CHECK(found);
  CHECK(ss.refset().size() == 20);
}

TEST_CASE("schedule problem neighborhoods stay feasible") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_instance(rng, 9, 1 + trial % 2, SpacingBand::Medium, 400.0, 900.0);
    const auto init = sequences_of(fcfs_schedule(s, {}, false), s);
    ScheduleProblem prob(s, makespan_fairness_evaluator(s), init);
    std::mt19937_64 r2(static_cast<std::uint64_t>(trial));
    CHECK(prob.distance(init, init) == 0.0);
    std::vector<ScheduleProblem::Solution> sols{init};
    for (int k = 0; k < 6; ++k)
      if (auto d = prob.diversify(init, r2)) sols.push_back(*d);
    for (const auto& sol : sols) {
      const auto t = prob.timed(sol);
      REQUIRE(t);
      CHECK(check_feasibility(*t, s).empty());
      for (const auto& mv : prob.moves(sol, r2))
        if (auto nb = prob.apply(sol, mv)) {
          const auto tn = prob.timed(*nb);
          REQUIRE(tn);
          CHECK(check_feasibility(*tn, s).empty());
          CHECK(prob.distance(sol, *nb) > 0.0);
        }
    }
    for (std::size_t a = 0; a + 1 < sols.size(); ++a)
      for (const auto& child : prob.combine(sols[a], sols[a + 1], r2)) {
        const auto tc = prob.timed(child);
        REQUIRE(tc);
        CHECK(check_feasibility(*tc, s).empty());
      }
  }
}

TEST_CASE("search on tiny instances reaches the makespan optimum") {
  std::mt19937_64 rng(29);
  int hits = 0;
  const int trials = 12;
  for (int trial = 0; trial < trials; ++trial) {
    auto s = random_instance(rng, 6, 1 + trial % 2, SpacingBand::Close, 240.0, 3000.0);
    const auto opt = brute_force_optimal(s, Objective::Makespan);
    const auto init = sequences_of(fcfs_schedule(s, {}, false), s);
    ScheduleProblem prob(s, makespan_fairness_evaluator(s), init);
    ScatterSearch<ScheduleProblem> ss(prob, small_budget(static_cast<std::uint64_t>(trial), 2000));
    double best = 1e300;
    for (const auto& m : ss.run().front) best = std::min(best, m.obj.f1);
    CHECK(best >= opt.value - 1e-9);
    if (best <= opt.value + 1e-9) ++hits;
  }
  CHECK(hits >= trials * 9 / 10);
}
