#pragma once

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "runway/metrics.hpp"
#include "runway/optimizer.hpp"
#include "runway/timeline.hpp"

namespace runway {

/// Maps a timed candidate schedule to its objectives.
using ScheduleEvaluator = std::function<ObjectiveVector(const Schedule&)>;

/// Planned makespan and planned fairness.
ScheduleEvaluator makespan_fairness_evaluator(const Scenario& scenario);
/// Total |t - target| and planned fairness.
ScheduleEvaluator deviation_fairness_evaluator(const Scenario& scenario);

struct ScheduleSearchSettings {
  /// Insertion moves reach at most this many positions away.
  int insertion_reach = 4;
  /// Candidates drawn per diversification call; the one on the least
  /// frequently used (aircraft, runway, position) cells wins.
  int diversify_candidates = 4;
  /// Upper bound of the random key spread, seconds.
  double max_spread_s = 600.0;
  /// Chance of putting an aircraft on a random runway while diversifying.
  double random_runway = 0.15;
};

/// Runway sequencing as a search problem. A solution is one aircraft order
/// per runway; start times follow from time_sequences, and solutions that
/// miss a due time are never produced.
class ScheduleProblem {
 public:
  using Solution = RunwaySequences;
  /// Move `aircraft` at (from_runway, from_index) to (to_runway, to_index).
  struct Move {
    int from_runway;
    int from_index;
    int to_runway;
    int to_index;
  };

  using Settings = ScheduleSearchSettings;

  ScheduleProblem(const Scenario& scenario, ScheduleEvaluator evaluator, Solution initial,
                  std::vector<PlacedOp> fixed = {}, Settings settings = {});

  Solution initial() const { return initial_; }
  ObjectiveVector evaluate(const Solution& s);
  SolutionKey encode(const Solution& s) const;
  /// Number of aircraft whose (runway, position) differ.
  double distance(const Solution& a, const Solution& b) const;
  std::optional<Solution> diversify(const Solution& seed, std::mt19937_64& rng);
  void record(const Solution& s);
  std::vector<Move> moves(const Solution& s, std::mt19937_64& rng) const;
  std::optional<Solution> apply(const Solution& s, const Move& m) const;
  /// Position-vote crossover: each aircraft takes its runway and position
  /// from a parent picked by weighted coin; runway lists are sorted by the
  /// voted position, ties by target time then id.
  std::vector<Solution> combine(const Solution& a, const Solution& b, std::mt19937_64& rng);

  /// Timed schedule, or nullopt if a due time is missed.
  std::optional<Schedule> timed(const Solution& s) const;
  bool feasible(const Solution& s) const { return timed(s).has_value(); }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<PlacedOp>& fixed() const { return fixed_; }
  std::uint64_t evaluations() const { return evaluations_; }
  int frequency(int aircraft_index, int runway, int position) const;

 private:
  std::optional<Solution> build_from_keys(const std::vector<double>& keys, std::mt19937_64& rng) const;

  const Scenario& scenario_;
  ScheduleEvaluator evaluator_;
  Solution initial_;
  std::vector<PlacedOp> fixed_;
  Settings settings_;
  std::vector<int> freq_;  // [aircraft][runway][position 0..n-1]
  std::uint64_t evaluations_ = 0;
};

/// A two-variable noisy benchmark as a search problem.
class ContinuousProblem {
 public:
  using Solution = std::array<double, 2>;
  struct Move {
    int dim;
    double step;  // fraction of the box width, signed
  };

  ContinuousProblem(Benchmark b, double sigma, std::uint64_t seed, std::uint64_t stream = 0);

  Solution initial() const;
  ObjectiveVector evaluate(const Solution& s) { return noisy_(s[0], s[1]); }
  ObjectiveVector true_objectives(const Solution& s) const { return runway::evaluate(bench_, s[0], s[1]); }
  SolutionKey encode(const Solution& s) const;
  /// 100 x root-mean-square of the box-normalized coordinate differences.
  double distance(const Solution& a, const Solution& b) const;
  std::optional<Solution> diversify(const Solution& seed, std::mt19937_64& rng);
  void record(const Solution& s);
  std::vector<Move> moves(const Solution& s, std::mt19937_64& rng) const;
  std::optional<Solution> apply(const Solution& s, const Move& m) const;
  std::vector<Solution> combine(const Solution& a, const Solution& b, std::mt19937_64& rng);

  std::uint64_t evaluations() const { return noisy_.calls(); }

 private:
  static constexpr int kBins = 8;
  int cell(const Solution& s) const;

  Benchmark bench_;
  Box box_;
  NoisyBenchmark noisy_;
  std::array<int, kBins * kBins> freq_{};
};

static_assert(SearchProblem<ScheduleProblem>);
static_assert(SearchProblem<ContinuousProblem>);

}  // namespace runway
