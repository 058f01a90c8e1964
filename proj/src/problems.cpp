#include "runway/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "runway/simulator.hpp"

namespace runway {

ScheduleEvaluator makespan_fairness_evaluator(const Scenario& scenario) {
  return [&scenario](const Schedule& s) {
    std::vector<Millis> times(scenario.aircraft.size());
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = s.slots[k].start;
    return ObjectiveVector{to_seconds(s.makespan()), fairness(scenario.aircraft, times)};
  };
}

ScheduleEvaluator deviation_fairness_evaluator(const Scenario& scenario) {
  return [&scenario](const Schedule& s) {
    std::vector<Millis> times(scenario.aircraft.size());
    double dev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      times[k] = s.slots[k].start;
      dev += std::abs(to_seconds(times[k] - scenario.aircraft[k].target));
    }
    return ObjectiveVector{dev, fairness(scenario.aircraft, times)};
  };
}

// ---------------------------------------------------------------------------
// ScheduleProblem

ScheduleProblem::ScheduleProblem(const Scenario& scenario, ScheduleEvaluator evaluator, Solution initial,
                                 std::vector<PlacedOp> fixed, Settings settings)
    : scenario_(scenario),
      evaluator_(std::move(evaluator)),
      initial_(std::move(initial)),
      fixed_(std::move(fixed)),
      settings_(settings) {
  const auto n = scenario.aircraft.size();
  freq_.assign(n * static_cast<std::size_t>(scenario.runway_count) * std::max<std::size_t>(n, 1), 0);
}

std::optional<Schedule> ScheduleProblem::timed(const Solution& s) const {
  auto t = time_sequences(scenario_, s, fixed_);
  if (!t.window_feasible) return std::nullopt;
  return std::move(t.schedule);
}

ObjectiveVector ScheduleProblem::evaluate(const Solution& s) {
  ++evaluations_;
  auto t = timed(s);
  if (!t) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return evaluator_(*t);
}

SolutionKey ScheduleProblem::encode(const Solution& s) const {
  SolutionKey k;
  k.reserve(scenario_.aircraft.size() + s.size());
  for (std::size_t r = 0; r < s.size(); ++r) {
    k.push_back(-1 - static_cast<std::int64_t>(r));
    for (int j : s[r]) k.push_back(j);
  }
  return k;
}

double ScheduleProblem::distance(const Solution& a, const Solution& b) const {
  const auto n = scenario_.aircraft.size();
  std::vector<std::pair<int, int>> pa(n, {-1, -1}), pb(n, {-1, -1});
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t p = 0; p < a[r].size(); ++p) pa[static_cast<std::size_t>(a[r][p])] = {static_cast<int>(r), static_cast<int>(p)};
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t p = 0; p < b[r].size(); ++p) pb[static_cast<std::size_t>(b[r][p])] = {static_cast<int>(r), static_cast<int>(p)};
  int d = 0;
  for (std::size_t j = 0; j < n; ++j) d += pa[j] != pb[j];
  return d;
}

int ScheduleProblem::frequency(int j, int r, int p) const {
  const auto n = scenario_.aircraft.size();
  return freq_[(static_cast<std::size_t>(j) * static_cast<std::size_t>(scenario_.runway_count) + static_cast<std::size_t>(r)) * n +
               static_cast<std::size_t>(p)];
}

void ScheduleProblem::record(const Solution& s) {
  const auto n = scenario_.aircraft.size();
  for (std::size_t r = 0; r < s.size(); ++r)
    for (std::size_t p = 0; p < s[r].size(); ++p)
      ++freq_[(static_cast<std::size_t>(s[r][p]) * static_cast<std::size_t>(scenario_.runway_count) + r) * n + p];
}

std::optional<ScheduleProblem::Solution> ScheduleProblem::build_from_keys(const std::vector<double>& keys,
                                                                          std::mt19937_64& rng) const {
  const auto& all = scenario_.aircraft;
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  Timeline timeline(scenario_, fixed_);
  Solution out(static_cast<std::size_t>(scenario_.runway_count));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> any_runway(0, scenario_.runway_count - 1);
  for (auto j : order) {
    const auto& ac = all[j];
    int runway = 0;
    Millis start = std::numeric_limits<Millis>::max();
    if (scenario_.runway_count > 1 && coin(rng) < settings_.random_runway) {
      runway = any_runway(rng);
      start = timeline.earliest(ac, runway, ac.ready);
    } else {
      for (int r = 0; r < scenario_.runway_count; ++r) {
        const Millis e = timeline.earliest(ac, r, ac.ready);
        if (e < start) {
          start = e;
          runway = r;
        }
      }
    }
    if (start > ac.due) return std::nullopt;
    timeline.place(ac, runway, start);
    out[static_cast<std::size_t>(runway)].push_back(static_cast<int>(j));
  }
  if (!feasible(out)) return std::nullopt;
  return out;
}

std::optional<ScheduleProblem::Solution> ScheduleProblem::diversify(const Solution& seed, std::mt19937_64& rng) {
  const auto n = scenario_.aircraft.size();
  std::vector<double> base(n);
  if (auto t = timed(seed)) {
    for (std::size_t k = 0; k < n; ++k) base[k] = to_seconds(t->slots[k].start);
  } else {
    for (std::size_t k = 0; k < n; ++k) base[k] = to_seconds(scenario_.aircraft[k].target);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::optional<Solution> best;
  long best_score = std::numeric_limits<long>::max();
  for (int c = 0; c < settings_.diversify_candidates; ++c) {
    const double spread = settings_.max_spread_s * unit(rng);
    std::vector<double> keys(n);
    for (std::size_t k = 0; k < n; ++k) keys[k] = base[k] + spread * unit(rng);
    auto s = build_from_keys(keys, rng);
    if (!s) continue;
    long score = 0;
    for (std::size_t r = 0; r < s->size(); ++r)
      for (std::size_t p = 0; p < (*s)[r].size(); ++p) score += frequency((*s)[r][p], static_cast<int>(r), static_cast<int>(p));
    if (score < best_score) {
      best_score = score;
      best = std::move(s);
    }
  }
  return best;
}

std::vector<ScheduleProblem::Move> ScheduleProblem::moves(const Solution& s, std::mt19937_64& rng) const {
  std::vector<Move> out;
  const int reach = settings_.insertion_reach;
  for (std::size_t r = 0; r < s.size(); ++r) {
    for (std::size_t i = 0; i < s[r].size(); ++i) {
      const auto& ac = scenario_.aircraft[static_cast<std::size_t>(s[r][i])];
      for (std::size_t r2 = 0; r2 < s.size(); ++r2) {
        if (r2 == r) {
          const int len = static_cast<int>(s[r].size());
          for (int to = std::max(0, static_cast<int>(i) - reach); to <= std::min(len - 1, static_cast<int>(i) + reach); ++to)
            if (to != static_cast<int>(i)) out.push_back({static_cast<int>(r), static_cast<int>(i), static_cast<int>(r), to});
        } else {
          const int len = static_cast<int>(s[r2].size());
          int guess = 0;
          while (guess < len && scenario_.aircraft[static_cast<std::size_t>(s[r2][static_cast<std::size_t>(guess)])].target < ac.target) ++guess;
          for (int to = std::max(0, guess - reach); to <= std::min(len, guess + reach); ++to)
            out.push_back({static_cast<int>(r), static_cast<int>(i), static_cast<int>(r2), to});
        }
      }
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::optional<ScheduleProblem::Solution> ScheduleProblem::apply(const Solution& s, const Move& m) const {
  Solution out = s;
  auto& from = out[static_cast<std::size_t>(m.from_runway)];
  const int j = from[static_cast<std::size_t>(m.from_index)];
  from.erase(from.begin() + m.from_index);
  auto& to = out[static_cast<std::size_t>(m.to_runway)];
  if (m.to_index < 0 || m.to_index > static_cast<int>(to.size())) return std::nullopt;
  to.insert(to.begin() + m.to_index, j);
  if (!feasible(out)) return std::nullopt;
  return out;
}

std::vector<ScheduleProblem::Solution> ScheduleProblem::combine(const Solution& a, const Solution& b,
                                                                std::mt19937_64& rng) {
  const auto n = scenario_.aircraft.size();
  struct Place {
    int runway = 0;
    int position = 0;
  };
  auto places = [n](const Solution& s) {
    std::vector<Place> p(n);
    for (std::size_t r = 0; r < s.size(); ++r)
      for (std::size_t i = 0; i < s[r].size(); ++i) p[static_cast<std::size_t>(s[r][i])] = {static_cast<int>(r), static_cast<int>(i)};
    return p;
  };
  const auto pa = places(a);
  const auto pb = places(b);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double weight = 0.25 + 0.5 * unit(rng);
  std::vector<Solution> out;
  for (int child = 0; child < 2; ++child) {
    const double w = child == 0 ? weight : 1.0 - weight;
    std::vector<std::vector<std::pair<int, std::size_t>>> lists(static_cast<std::size_t>(scenario_.runway_count));
    for (std::size_t j = 0; j < n; ++j) {
      const Place& p = unit(rng) < w ? pa[j] : pb[j];
      lists[static_cast<std::size_t>(p.runway)].push_back({p.position, j});
    }
    Solution s(lists.size());
    for (std::size_t r = 0; r < lists.size(); ++r) {
      std::stable_sort(lists[r].begin(), lists[r].end(), [&](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        const auto& ax = scenario_.aircraft[x.second];
        const auto& ay = scenario_.aircraft[y.second];
        return ax.target != ay.target ? ax.target < ay.target : ax.id < ay.id;
      });
      for (const auto& [pos, j] : lists[r]) s[r].push_back(static_cast<int>(j));
    }
    if (!feasible(s)) continue;
    if (!out.empty() && out.front() == s) continue;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ContinuousProblem

ContinuousProblem::ContinuousProblem(Benchmark b, double sigma, std::uint64_t seed, std::uint64_t stream)
    : bench_(b), box_(box_of(b)), noisy_(b, sigma, seed, stream) {}

ContinuousProblem::Solution ContinuousProblem::initial() const {
  return {0.5 * (box_.lo[0] + box_.hi[0]), 0.5 * (box_.lo[1] + box_.hi[1])};
}

SolutionKey ContinuousProblem::encode(const Solution& s) const {
  return {std::bit_cast<std::int64_t>(s[0]), std::bit_cast<std::int64_t>(s[1])};
}

double ContinuousProblem::distance(const Solution& a, const Solution& b) const {
  double sum = 0.0;
  for (int d = 0; d < 2; ++d) {
    const double w = box_.hi[static_cast<std::size_t>(d)] - box_.lo[static_cast<std::size_t>(d)];
    const double x = (a[static_cast<std::size_t>(d)] - b[static_cast<std::size_t>(d)]) / w;
    sum += x * x;
  }
  return 100.0 * std::sqrt(sum / 2.0);
}

int ContinuousProblem::cell(const Solution& s) const {
  int idx[2];
  for (int d = 0; d < 2; ++d) {
    const auto u = static_cast<std::size_t>(d);
    const double t = (s[u] - box_.lo[u]) / (box_.hi[u] - box_.lo[u]);
    idx[d] = std::clamp(static_cast<int>(t * kBins), 0, kBins - 1);
  }
  return idx[0] * kBins + idx[1];
}

void ContinuousProblem::record(const Solution& s) { ++freq_[static_cast<std::size_t>(cell(s))]; }

std::optional<ContinuousProblem::Solution> ContinuousProblem::diversify(const Solution&, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x0(box_.lo[0], box_.hi[0]);
  std::uniform_real_distribution<double> x1(box_.lo[1], box_.hi[1]);
  Solution best{};
  int best_f = std::numeric_limits<int>::max();
  for (int c = 0; c < 4; ++c) {
    Solution s{x0(rng), x1(rng)};
    const int f = freq_[static_cast<std::size_t>(cell(s))];
    if (f < best_f) {
      best_f = f;
      best = s;
    }
  }
  return best;
}

std::vector<ContinuousProblem::Move> ContinuousProblem::moves(const Solution&, std::mt19937_64& rng) const {
  std::vector<Move> out;
  for (double step : {0.1, 0.02, 0.004})
    for (int d = 0; d < 2; ++d) {
      out.push_back({d, step});
      out.push_back({d, -step});
    }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::optional<ContinuousProblem::Solution> ContinuousProblem::apply(const Solution& s, const Move& m) const {
  const auto d = static_cast<std::size_t>(m.dim);
  Solution out = s;
  out[d] = std::clamp(s[d] + m.step * (box_.hi[d] - box_.lo[d]), box_.lo[d], box_.hi[d]);
  if (out == s) return std::nullopt;
  return out;
}

std::vector<ContinuousProblem::Solution> ContinuousProblem::combine(const Solution& a, const Solution& b,
                                                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> inside(0.0, 1.0);
  std::uniform_real_distribution<double> outside(0.0, 0.5);
  Solution c1{}, c2{};
  for (std::size_t d = 0; d < 2; ++d) {
    const double diff = b[d] - a[d];
    c1[d] = std::clamp(a[d] + inside(rng) * diff, box_.lo[d], box_.hi[d]);
    const double r = outside(rng);
    const double v = inside(rng) < 0.5 ? a[d] - r * diff : b[d] + r * diff;
    c2[d] = std::clamp(v, box_.lo[d], box_.hi[d]);
  }
  std::vector<Solution> out;
  if (c1 != a && c1 != b) out.push_back(c1);
  if (c2 != a && c2 != b && c2 != c1) out.push_back(c2);
  return out;
}

}  // namespace runway
