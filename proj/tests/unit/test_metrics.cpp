#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "runway/metrics.hpp"

using namespace runway;

namespace {

std::vector<ObjectiveVector> random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ObjectiveVector> pts;
  for (int k = 0; k < n; ++k) pts.push_back({u(rng), u(rng)});
  return pts;
}

std::vector<ObjectiveVector> brute_filter(const std::vector<ObjectiveVector>& pts) {
  std::vector<ObjectiveVector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dom = false;
    for (std::size_t j = 0; j < pts.size() && !dom; ++j)
      dom = pts[j].f1 <= pts[i].f1 && pts[j].f2 <= pts[i].f2 && (pts[j].f1 < pts[i].f1 || pts[j].f2 < pts[i].f2);
    if (!dom) out.push_back(pts[i]);
  }
  return out;
}

double monte_carlo_hv(const std::vector<ObjectiveVector>& front, std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int hit = 0;
  for (int s = 0; s < samples; ++s) {
    const double x = u(rng), y = u(rng);
    for (const auto& p : front)
      if (p.f1 <= x && p.f2 <= y) {
        ++hit;
        break;
      }
  }
  return static_cast<double>(hit) / samples;
}

}  // namespace

TEST_CASE("dominance and filtering") {
  CHECK(dominates({1, 2}, {2, 3}) == Dominance::Strict);
  CHECK(dominates({1, 2}, {1, 2}) == Dominance::WeakOnly);
  CHECK(dominates({1, 3}, {2, 2}) == Dominance::None);
  CHECK(nondominated_filter({{1, 2}, {2, 3}}) == std::vector<ObjectiveVector>{{1, 2}});
  const std::vector<ObjectiveVector> anti{{0, 4}, {1, 3}, {2, 2}, {3, 1}, {4, 0}};
  CHECK(nondominated_filter(anti) == anti);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    auto pts = random_points(rng, 1 + trial % 100);
    if (trial % 3 == 0)
      for (auto& p : pts) p = {std::round(p.f1 * 5), std::round(p.f2 * 5)};  // ties and duplicates
    const auto f = nondominated_filter(pts);
    REQUIRE(f == brute_filter(pts));
    CHECK(nondominated_filter(f) == f);
  }
}

TEST_CASE("pareto ranks and crowding") {
  const std::vector<ObjectiveVector> pts{{0, 2}, {1, 1}, {2, 0}, {1, 2}, {2, 2}};
  CHECK(pareto_ranks(pts) == std::vector<int>{0, 0, 0, 1, 2});
  const auto cd = crowding_distance({{0, 2}, {1, 1}, {2, 0}});
  CHECK(std::isinf(cd[0]));
  CHECK(std::isinf(cd[2]));
  CHECK(cd[1] == doctest::Approx(2.0));
  const auto flat = crowding_distance({{1, 1}, {1, 1}, {1, 1}});
  CHECK(std::isinf(flat[0]));
}

TEST_CASE("hypervolume exact cases") {
  CHECK(hypervolume({{0.5, 0.5}}, {1, 1}) == doctest::Approx(0.25));
  CHECK(hypervolume({{0.2, 0.6}, {0.6, 0.2}}, {1, 1}) == doctest::Approx(0.48));
  CHECK(hypervolume({{0, 0}}, {1, 1}) == doctest::Approx(1.0));
  std::size_t skipped = 0;
  CHECK(hypervolume({{1.5, 0.2}, {0.5, 0.5}}, {1, 1}, &skipped) == doctest::Approx(0.25));
  CHECK(skipped == 1);
  CHECK(hypervolume({}, {1, 1}) == 0.0);
}

TEST_CASE("hypervolume against Monte Carlo and monotonicity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto front = nondominated_filter(random_points(rng, 10));
    const double hv = hypervolume(front, {1, 1});
    CHECK(std::abs(hv - monte_carlo_hv(front, rng, 1'000'000)) < 0.005);
  }
  for (int trial = 0; trial < 300; ++trial) {
    auto pts = random_points(rng, 12);
    const double full = hypervolume(pts, {1, 1});
    auto fewer = pts;
    fewer.erase(fewer.begin() + trial % 12);
    CHECK(hypervolume(fewer, {1, 1}) <= full + 1e-15);
    auto more = pts;
    more.push_back(random_points(rng, 1)[0]);
    CHECK(hypervolume(more, {1, 1}) >= full - 1e-15);
  }
}

TEST_CASE("normalization and the Y metric") {
  const std::vector<ObjectiveVector> pts{{10, 5}, {20, 1}, {15, 3}};
  const auto b = bounds_of(pts);
  CHECK(normalize(ObjectiveVector{15, 3}, b).f1 == doctest::Approx(0.5));
  CHECK(normalize(ObjectiveVector{15, 3}, b).f2 == doctest::Approx(0.5));
  CHECK(normalize(ObjectiveVector{7, 7}, Bounds{{7, 7}, {7, 7}}).f1 == 0.0);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto raw = random_points(rng, 8);
    for (auto& p : raw) p = {p.f1 * 900 + 3, p.f2 * 1e5};
    const auto n = normalize(raw, bounds_of(raw));
    auto argmin = [](const std::vector<ObjectiveVector>& v, bool first) {
      std::size_t k = 0;
      for (std::size_t i = 1; i < v.size(); ++i)
        if ((first ? v[i].f1 < v[k].f1 : v[i].f2 < v[k].f2)) k = i;
      return k;
    };
    CHECK(argmin(n, true) == argmin(raw, true));
    CHECK(argmin(n, false) == argmin(raw, false));
  }

  const std::vector<ObjectiveVector> ref{{0, 1}, {0.5, 0.5}, {1, 0}};
  CHECK(y_metric({{0.5, 0.5}}, ref) == 0.0);
  CHECK(y_metric({{3, 4}}, {{0, 0}}) == doctest::Approx(5.0));
  std::vector<ObjectiveVector> shifted;
  for (const auto& p : ref) shifted.push_back({p.f1 + 0.05, p.f2 + 0.05});
  CHECK(y_metric(shifted, ref) <= 0.05 * std::sqrt(2.0) + 1e-12);
}

TEST_CASE("benchmark closed forms") {
  const double r = 1.0 / std::sqrt(2.0);
  const double e4 = 1.0 - std::exp(-4.0);
  const double e1 = 1.0 - std::exp(-1.0);
  CHECK(std::abs(ff(r, r).f1) < 1e-9);
  CHECK(std::abs(ff(r, r).f2 - e4) < 1e-9);
  CHECK(std::abs(ff(-r, -r).f1 - e4) < 1e-9);
  CHECK(std::abs(ff(-r, -r).f2) < 1e-9);
  CHECK(std::abs(ff(0, 0).f1 - e1) < 1e-9);
  CHECK(std::abs(ff(0, 0).f2 - e1) < 1e-9);
  CHECK(std::abs(zdt3(0, 0).f1) < 1e-9);
  CHECK(std::abs(zdt3(0, 0).f2 - 1.0) < 1e-9);
  CHECK(std::abs(zdt3(0, 1).f2 - (1.0 + 9.0 / 29.0)) < 1e-9);
  CHECK(std::abs(zdt3(0.5, 0).f2 - (1.0 - std::sqrt(0.5))) < 1e-9);
  CHECK_THROWS_AS(ff(4.5, 0), std::domain_error);
  CHECK_THROWS_AS(zdt3(0.5, -0.1), std::domain_error);
}

TEST_CASE("noisy benchmark moments") {
  NoisyBenchmark exact(Benchmark::Zdt3, 0.0, 1);
  CHECK(exact(0.3, 0.4) == zdt3(0.3, 0.4));
  const double sigma = 0.1;
  NoisyBenchmark noisy(Benchmark::FonsecaFleming, sigma, 7);
  const auto f = ff(0.2, -0.3);
  const int n = 10000;
  double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
  for (int k = 0; k < n; ++k) {
    const auto v = noisy(0.2, -0.3);
    s1 += v.f1;
    s2 += v.f2;
    q1 += (v.f1 - f.f1) * (v.f1 - f.f1);
    q2 += (v.f2 - f.f2) * (v.f2 - f.f2);
  }
  CHECK(std::abs(s1 / n - f.f1) <= 3 * sigma / 100);
  CHECK(std::abs(s2 / n - f.f2) <= 3 * sigma / 100);
  CHECK(std::sqrt(q1 / n) == doctest::Approx(sigma).epsilon(0.05));
  CHECK(std::sqrt(q2 / n) == doctest::Approx(sigma).epsilon(0.05));
  CHECK(noisy.calls() == static_cast<std::uint64_t>(n));
  NoisyBenchmark again(Benchmark::FonsecaFleming, sigma, 7);
  NoisyBenchmark other(Benchmark::FonsecaFleming, sigma, 8);
  const auto a = again(0, 0);
  CHECK(a == NoisyBenchmark(Benchmark::FonsecaFleming, sigma, 7)(0, 0));
  CHECK(!(a == other(0, 0)));
}

TEST_CASE("true fronts and normalized indicators") {
  for (auto b : {Benchmark::FonsecaFleming, Benchmark::Zdt3}) {
    const auto tf = true_front(b, 2000);
    CHECK(nondominated_filter(tf).size() == tf.size());
    for (std::size_t k = 1; k < tf.size(); ++k) CHECK(tf[k - 1].f1 <= tf[k].f1);
    CHECK(normalized_hvm(tf, b) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(normalized_y(tf, b) < 1e-3);
    CHECK(normalized_hvm({tf.front()}, b) < 0.5);
  }
}

TEST_CASE("front csv") {
  std::stringstream ss;
  write_front_csv(ss, {});
  CHECK(ss.str() == "f1,f2\n");
  std::stringstream full;
  write_front_csv(full, {{1.5, 2}, {0.25, 3}}, {"a", "b"});
  CHECK(full.str().rfind("f1,f2,encoding\n", 0) == 0);
  const auto back = read_front_csv(full);
  REQUIRE(back.size() == 2);
  CHECK(back[1].f1 == 0.25);
  std::stringstream bad("x,y\n1,2\n");
  CHECK_THROWS_AS(read_front_csv(bad), std::runtime_error);
}
