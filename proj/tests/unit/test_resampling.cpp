#include "doctest.h"

#include <cmath>
#include <random>

#include "runway/resampling.hpp"
#include "runway/rng.hpp"

using namespace runway;

TEST_CASE("sample summaries match a direct recomputation") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(100.0, 7.0);
  std::vector<ObjectiveVector> s;
  for (int k = 0; k < 23; ++k) s.push_back({d(rng), d(rng) * 50});
  const auto r = summarize(s);
  double m1 = 0, m2 = 0;
  for (const auto& v : s) m1 += v.f1, m2 += v.f2;
  m1 /= 23;
  m2 /= 23;
  double q1 = 0, q2 = 0;
  for (const auto& v : s) q1 += (v.f1 - m1) * (v.f1 - m1), q2 += (v.f2 - m2) * (v.f2 - m2);
  const double sd1 = std::sqrt(q1 / 22), sd2 = std::sqrt(q2 / 22);
  CHECK(std::abs(r.mean.f1 - m1) <= 1e-12 * std::abs(m1));
  CHECK(std::abs(r.mean.f2 - m2) <= 1e-12 * std::abs(m2));
  CHECK(std::abs(r.sd.f1 - sd1) <= 1e-12 * sd1);
  CHECK(std::abs(r.sd.f2 - sd2) <= 1e-12 * sd2);
  CHECK(r.se.f1 == doctest::Approx(sd1 / std::sqrt(23.0)));
  CHECK(r.n == 23);
  CHECK(r.ase({1.0, 50.0}) == doctest::Approx((r.se.f1 + r.se.f2 / 50.0) / 2));
}

TEST_CASE("zero variance stops at t_min with the single-run mean") {
  SedrParams p;
  int calls = 0;
  const auto r = sedr_evaluate([&](int) { ++calls; return ObjectiveVector{4321.0, 17.0}; }, p);
  CHECK(r.n == p.t_min);
  CHECK(calls == p.t_min);
  CHECK(r.mean == ObjectiveVector{4321.0, 17.0});
  CHECK(!r.budget_capped);
}

TEST_CASE("sampling stops at the cap and flags it") {
  SedrParams p;
  p.t_min = 3;
  p.hard_cap = 9;
  p.se_threshold = 1e-9;
  std::vector<int> seen;
  const auto r = sedr_evaluate(
      [&](int i) {
        seen.push_back(i);
        return ObjectiveVector{static_cast<double>(i % 2), 0.0};
      },
      p);
  CHECK(r.n == 9);
  CHECK(r.budget_capped);
  CHECK(seen == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(r.samples.size() == 9);
}

TEST_CASE("parameter checks") {
  SedrParams p;
  p.t_min = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.se_threshold = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.hard_cap = p.t_min - 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.scale = {1.0, 0.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("sample count grows with the noise") {
  SedrParams p;
  p.t_min = 5;
  p.hard_cap = 60;
  p.se_threshold = 0.02;
  double prev = 0;
  for (double sigma : {0.01, 0.05, 0.1, 0.15, 0.2}) {
    double total = 0;
    for (int trial = 0; trial < 100; ++trial) {
      KeyedStream st(static_cast<std::uint64_t>(trial), 0, 0, Purpose::Benchmark);
      const auto r = sedr_evaluate(
          [&](int i) {
            return ObjectiveVector{sigma * KeyedStream::normal_quantile(st.uniform_at(2 * static_cast<std::uint64_t>(i))),
                                   sigma * KeyedStream::normal_quantile(st.uniform_at(2 * static_cast<std::uint64_t>(i) + 1))};
          },
          p);
      total += r.n;
    }
    CHECK(total / 100 >= prev);
    prev = total / 100;
  }
  CHECK(prev > p.t_min);
}
