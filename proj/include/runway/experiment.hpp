#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "runway/baseline.hpp"
#include "runway/optimizer.hpp"
#include "runway/resampling.hpp"
#include "runway/simulator.hpp"
#include "json.hpp"

namespace runway {

/// Synthetic traffic: a Poisson stream of runway demand over one period of
/// `duration_s`, shifted so the earliest possible system arrival is 0.
struct GeneratorSpec {
  double rate_per_hour = 103.0;
  double duration_s = 3600.0;
  std::array<double, 4> fleet_mix{0.101, 0.038, 0.743, 0.118};
  double arrival_fraction = 0.54;
  int runways = 2;
  SpacingBand band = SpacingBand::Medium;
  double max_delay_s = 600.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Targets are the demand times; system arrival is the target minus the
/// nominal path (arrivals) or taxi time (departures); ready = target,
/// due = target + max delay. Ids 1..n in target order.
Scenario generate_instance(const GeneratorSpec& spec);

/// Parses "rate=103,hours=1,mix=a:b:c:d,runways=2,band=medium,arrivals=0.54,max_delay=600".
/// Every key is optional. Mix entries are percentages or fractions.
GeneratorSpec parse_generator_spec(const std::string& text, std::uint64_t seed);

enum class Approach : std::uint8_t { Fcfs, Deterministic, Sbo };
inline constexpr std::array<Approach, 3> kApproaches{Approach::Fcfs, Approach::Deterministic, Approach::Sbo};
std::string_view to_string(Approach a);
std::optional<Approach> parse_approach(std::string_view s);

struct ExperimentConfig {
  /// Exactly one of scenario_path and generator.
  std::optional<std::filesystem::path> scenario_path;
  std::optional<GeneratorSpec> generator;
  std::vector<Approach> approaches{kApproaches.begin(), kApproaches.end()};
  double horizon_s = 1200.0;
  int eval_replications = 50;
  bool antithetic = false;
  double w1 = 0.75;
  double w2 = 0.25;
  std::uint64_t seed = 1;

  OptParams det_params = OptParams::moo();
  OptParams sbo_params = OptParams::sbo();
  SedrParams sedr;
  std::filesystem::path out_dir;
  /// Worker cap for running approaches side by side; 0 reads RUNWAY_SBO_THREADS.
  int threads = 0;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Result of one planning window.
struct WindowOutcome {
  Schedule schedule;  // over the window scenario's aircraft
  std::vector<ObjectiveVector> front;
  std::vector<ProgressRow> progress;
  RunStats stats;
};

/// Solves one window given the operations committed by earlier windows.
using WindowSolver =
    std::function<WindowOutcome(const Scenario& window, const std::vector<PlacedOp>& committed, int window_index)>;

struct RollingResult {
  Schedule schedule;  // over the full scenario, positions renumbered per runway
  std::vector<WindowOutcome> windows;
  std::vector<std::vector<int>> window_ids;
};

/// Aircraft grouped into consecutive windows of `window_s` by system
/// arrival, counted from the earliest one. Empty windows are skipped.
std::vector<std::vector<std::size_t>> partition_windows(const Scenario& scenario, double window_s);

/// Solves the windows in order; each window sees every earlier window's
/// operations as fixed.
RollingResult rolling_horizon(const Scenario& scenario, double window_s, const WindowSolver& solver);

/// Picks the member minimizing w1*f1 + w2*f2 after normalizing both
/// objectives over the given points. Non-finite points are skipped;
/// returns nullopt if none are left.
std::optional<std::size_t> weighted_pick(const std::vector<ObjectiveVector>& points, double w1, double w2);

/// Window solvers used by run_experiment, exposed for testing.
WindowSolver fcfs_solver();
WindowSolver deterministic_solver(const ExperimentConfig& config, Approach tag = Approach::Deterministic);
WindowSolver sbo_solver(const ExperimentConfig& config);

/// One row of the comparison table. Delays and utilization are means over
/// the evaluation replications; sequence change is the planned schedule's
/// mean |position shift|.
struct TableRow {
  double utilization_s = 0.0;
  double avg_landing_delay_s = 0.0;
  double longest_landing_delay_s = 0.0;
  double avg_takeoff_delay_s = 0.0;
  double longest_takeoff_delay_s = 0.0;
  double avg_sequence_change = 0.0;
  double infeasible_fraction = 0.0;
};

struct ApproachResult {
  Approach approach = Approach::Fcfs;
  bool ok = false;
  std::string error;
  /// Every planned start within its window.
  bool window_feasible = true;
  RollingResult plan;
  TableRow row;
  /// Optimization CPU seconds, simulation-based final evaluation excluded.
  double compute_s = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  Scenario scenario;
  std::vector<ApproachResult> approaches;
};

/// Mean |position shift| of a schedule, per op type against FCFS order.
double planned_sequence_change(const Schedule& schedule, const Scenario& scenario);

Scenario load_experiment_scenario(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kTableHeader =
    "approach,utilization_s,avg_landing_delay_s,longest_landing_delay_s,avg_takeoff_delay_s,"
    "longest_takeoff_delay_s,avg_sequence_change,infeasible_fraction,window_feasible,status";

/// Writes table.csv, timing.csv, front_*, progress_*, schedule_* CSVs,
/// scenario.json and manifest.json. Throws std::runtime_error naming the
/// path when something cannot be written.
void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace runway
