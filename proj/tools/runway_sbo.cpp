#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "runway/experiment.hpp"
#include "runway/scenario_io.hpp"

namespace {

runway::ExperimentConfig config_from_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  nlohmann::json j;
  in >> j;
  return runway::config_from_json(j.at("config"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runway sequencing: FCFS, deterministic and simulation-based optimization"};

  std::string scenario_path;
  std::string generate;
  std::string manifest;
  std::string approach = "all";
  std::string preset;
  std::string out_dir = "runway_out";
  double window_s = 1200.0;
  int reps = 50;
  std::uint64_t seed = 1;
  std::uint64_t evals = 0;
  int threads = 0;
  bool antithetic = false;
  std::string save_scenario;

  auto* scen = app.add_option("--scenario", scenario_path, "Scenario JSON file");
  auto* gen = app.add_option("--generate", generate,
                             "Synthetic instance: rate=..,hours=..,mix=H:B:L:S[,runways=..,band=..,arrivals=..]");
  auto* man = app.add_option("--manifest", manifest, "Re-run the configuration recorded in a manifest.json");
  scen->excludes(gen);
  man->excludes(scen)->excludes(gen);
  app.add_option("--approach", approach, "fcfs|det|sbo|all")
      ->check(CLI::IsMember({"fcfs", "det", "sbo", "all"}));
  app.add_option("--window-s", window_s, "Planning window length in seconds")->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "Evaluation replications per schedule")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--preset", preset, "Optimizer parameters for both approaches: moo|sbo")
      ->check(CLI::IsMember({"moo", "sbo"}));
  app.add_option("--evals", evals, "Evaluation budget per window (0 keeps the default)");
  app.add_option("--threads", threads, "Approaches run side by side (0 reads RUNWAY_SBO_THREADS)");
  app.add_flag("--antithetic", antithetic, "Antithetic pairs in the final evaluation");
  app.add_option("--save-scenario", save_scenario, "Also write the scenario used to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    runway::ExperimentConfig config;
    if (!manifest.empty()) {
      config = config_from_manifest(manifest);
    } else {
      if (scenario_path.empty() && generate.empty())
        throw std::invalid_argument("give --scenario, --generate or --manifest");
      if (!scenario_path.empty()) config.scenario_path = scenario_path;
      else config.generator = runway::parse_generator_spec(generate, seed);
      config.approaches.clear();
      if (approach == "all") {
        config.approaches.assign(runway::kApproaches.begin(), runway::kApproaches.end());
      } else {
        config.approaches.push_back(*runway::parse_approach(approach));
      }
      config.horizon_s = window_s;
      config.eval_replications = reps;
      config.antithetic = antithetic;
      config.seed = seed;
      if (preset == "moo") config.det_params = config.sbo_params = runway::OptParams::moo();
      if (preset == "sbo") config.det_params = config.sbo_params = runway::OptParams::sbo();
      if (evals > 0) config.det_params.max_evaluations = config.sbo_params.max_evaluations = evals;
    }
    config.threads = threads;
    config.out_dir = out_dir;
    config.validate();

    const auto result = runway::run_experiment(config);
    runway::emit_outputs(result, out_dir);
    if (!save_scenario.empty()) runway::save_scenario(result.scenario, save_scenario);

    std::cout << runway::kTableHeader << '\n';
    std::ifstream table(std::filesystem::path(out_dir) / "table.csv");
    std::string line;
    std::getline(table, line);
    while (std::getline(table, line)) std::cout << line << '\n';
    for (const auto& r : result.approaches)
      if (!r.ok) std::cerr << runway::to_string(r.approach) << " failed: " << r.error << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
