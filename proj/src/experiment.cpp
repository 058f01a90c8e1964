#include "runway/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "runway/problems.hpp"
#include "runway/scenario_io.hpp"

namespace runway {

using nlohmann::json;

namespace {

enum class SeedTag : std::uint64_t { Optimizer = 11, Simulation = 12, Evaluation = 13 };

std::uint64_t derive(std::uint64_t seed, SeedTag tag, std::uint64_t a = 0, std::uint64_t b = 0) {
  return hash_combine(hash_combine(hash_combine(seed, static_cast<std::uint64_t>(tag)), a), b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x))
    throw std::invalid_argument("generator option " + key + ": not a number '" + v + "'");
  return x;
}

RunwaySequences seed_sequences(const Scenario& w, const std::vector<PlacedOp>& committed) {
  try {
    return sequences_of(greedy_schedule(w, {}, committed, true).schedule, w);
  } catch (const WindowInfeasible&) {
    return sequences_of(fcfs_schedule(w, committed, false), w);
  }
}

WindowOutcome solve_with(ScheduleProblem& problem, const OptParams& params, double w1, double w2) {
  ScatterSearch<ScheduleProblem> search(problem, params);
  auto run = search.run();
  WindowOutcome out;
  out.progress = std::move(run.progress);
  out.stats = run.stats;
  std::sort(run.front.begin(), run.front.end(), [](const auto& a, const auto& b) {
    if (a.obj.f1 != b.obj.f1) return a.obj.f1 < b.obj.f1;
    if (a.obj.f2 != b.obj.f2) return a.obj.f2 < b.obj.f2;
    return a.key < b.key;
  });
  for (const auto& m : run.front)
    if (std::isfinite(m.obj.f1) && std::isfinite(m.obj.f2)) out.front.push_back(m.obj);
  std::vector<ObjectiveVector> objs;
  for (const auto& m : run.front) objs.push_back(m.obj);
  if (auto pick = weighted_pick(objs, w1, w2)) {
    if (auto timed = problem.timed(run.front[*pick].solution)) {
      out.schedule = std::move(*timed);
      return out;
    }
  }
  out.schedule = time_sequences(problem.scenario(), problem.initial(), problem.fixed()).schedule;
  return out;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

int worker_count(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("RUNWAY_SBO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

json to_json(const OptParams& p) {
  return {{"psize", p.psize},
          {"b", p.b},
          {"b1", p.b1},
          {"improve_threshold", p.improve_threshold},
          {"dist_threshold", p.dist_threshold},
          {"archive_cap", p.archive_cap},
          {"max_evaluations", p.max_evaluations},
          {"max_iter", p.max_iter},
          {"max_cpu_s", p.max_cpu_s},
          {"elitist", p.elitist},
          {"dynamic_update", p.dynamic_update},
          {"rebuild", p.rebuild},
          {"ls_max_evals", p.ls_max_evals},
          {"tabu_iterations", p.tabu_iterations},
          {"tabu_sample", p.tabu_sample},
          {"rebuild_pool_factor", p.rebuild_pool_factor},
          {"seed", p.seed}};
}

OptParams opt_from_json(const json& j, OptParams p) {
  p.psize = j.value("psize", p.psize);
  p.b = j.value("b", p.b);
  p.b1 = j.value("b1", p.b1);
  p.improve_threshold = j.value("improve_threshold", p.improve_threshold);
  p.dist_threshold = j.value("dist_threshold", p.dist_threshold);
  p.archive_cap = j.value("archive_cap", p.archive_cap);
  p.max_evaluations = j.value("max_evaluations", p.max_evaluations);
  p.max_iter = j.value("max_iter", p.max_iter);
  p.max_cpu_s = j.value("max_cpu_s", p.max_cpu_s);
  p.elitist = j.value("elitist", p.elitist);
  p.dynamic_update = j.value("dynamic_update", p.dynamic_update);
  p.rebuild = j.value("rebuild", p.rebuild);
  p.ls_max_evals = j.value("ls_max_evals", p.ls_max_evals);
  p.tabu_iterations = j.value("tabu_iterations", p.tabu_iterations);
  p.tabu_sample = j.value("tabu_sample", p.tabu_sample);
  p.rebuild_pool_factor = j.value("rebuild_pool_factor", p.rebuild_pool_factor);
  p.seed = j.value("seed", p.seed);
  return p;
}

}  // namespace

void GeneratorSpec::validate() const {
  if (!(rate_per_hour > 0.0)) throw std::invalid_argument("rate must be positive");
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  double sum = 0.0;
  for (double x : fleet_mix) {
    if (x < 0.0) throw std::invalid_argument("fleet mix entries must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("fleet mix must sum to 1");
  if (arrival_fraction < 0.0 || arrival_fraction > 1.0) throw std::invalid_argument("arrival fraction outside [0, 1]");
  if (runways < 1) throw std::invalid_argument("need at least one runway");
  if (max_delay_s < 0.0) throw std::invalid_argument("max delay must be non-negative");
}

Scenario generate_instance(const GeneratorSpec& spec) {
  spec.validate();
  KeyedStream stream(spec.seed, 0, 0, Purpose::Generator);
  NodeNetwork network;
  std::vector<Aircraft> aircraft;
  const double mean_gap = 3600.0 / spec.rate_per_hour;
  Millis lead = network.taxi_to_roll;
  for (auto c : kWeightClasses) lead = std::max(lead, network.nominal_arrival_path(c));
  double t = 0.0;
  for (int id = 1;; ++id) {
    t += -std::log(stream.uniform()) * mean_gap;
    if (t >= spec.duration_s) break;
    Aircraft a;
    a.id = id;
    const double uc = stream.uniform();
    double acc = 0.0;
    a.weight_class = WeightClass::Small;
    for (auto c : kWeightClasses) {
      acc += spec.fleet_mix[static_cast<std::size_t>(index_of(c))];
      if (uc < acc) {
        a.weight_class = c;
        break;
      }
    }
    a.op = stream.uniform() < spec.arrival_fraction ? OperationType::Arrival : OperationType::Departure;
    a.target = lead + from_seconds(t);
    a.system_arrival = a.target - network.nominal_to_runway(a.op, a.weight_class);
    a.ready = a.target;
    a.due = a.target + from_seconds(spec.max_delay_s);
    aircraft.push_back(a);
  }
  Scenario s = make_scenario(std::move(aircraft), spec.runways, spec.band);
  s.network = network;
  s.fleet_mix = spec.fleet_mix;
  s.max_delay = from_seconds(spec.max_delay_s);
  s.validate();
  return s;
}

GeneratorSpec parse_generator_spec(const std::string& text, std::uint64_t seed) {
  GeneratorSpec g;
  g.seed = seed;
  if (text.empty()) return g;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("generator option without '=': '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "rate") {
      g.rate_per_hour = parse_double(key, value);
    } else if (key == "hours") {
      g.duration_s = parse_double(key, value) * 3600.0;
    } else if (key == "duration_s") {
      g.duration_s = parse_double(key, value);
    } else if (key == "mix") {
      const auto parts = split(value, ':');
      if (parts.size() != 4) throw std::invalid_argument("mix needs four ':'-separated entries");
      double sum = 0.0;
      for (std::size_t k = 0; k < 4; ++k) sum += g.fleet_mix[k] = parse_double(key, parts[k]);
      if (sum > 1.5)
        for (auto& x : g.fleet_mix) x /= 100.0;
    } else if (key == "runways") {
      g.runways = static_cast<int>(parse_double(key, value));
    } else if (key == "band") {
      auto b = parse_spacing_band(value);
      if (!b) throw std::invalid_argument("unknown spacing band '" + value + "'");
      g.band = *b;
    } else if (key == "arrivals") {
      g.arrival_fraction = parse_double(key, value);
    } else if (key == "max_delay") {
      g.max_delay_s = parse_double(key, value);
    } else {
      throw std::invalid_argument("unknown generator option '" + key + "'");
    }
  }
  g.validate();
  return g;
}

std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::Fcfs: return "fcfs";
    case Approach::Deterministic: return "det";
    case Approach::Sbo: return "sbo";
  }
  return "?";
}

std::optional<Approach> parse_approach(std::string_view s) {
  for (auto a : kApproaches)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (scenario_path.has_value() == generator.has_value())
    throw std::invalid_argument("give exactly one of a scenario path and a generator spec");
  if (generator) generator->validate();
  if (approaches.empty()) throw std::invalid_argument("no approach selected");
  if (!(horizon_s > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (eval_replications < 1) throw std::invalid_argument("need at least one evaluation replication");
  if (antithetic && eval_replications % 2 != 0)
    throw std::invalid_argument("antithetic evaluation needs an even replication count");
  if (w1 < 0.0 || w2 < 0.0 || std::abs(w1 + w2 - 1.0) > 1e-9)
    throw std::invalid_argument("selection weights must be non-negative and sum to 1");
  det_params.validate();
  sbo_params.validate();
  sedr.validate();
}

json to_json(const ExperimentConfig& c) {
  json j;
  if (c.scenario_path) j["scenario_path"] = c.scenario_path->string();
  if (c.generator) {
    const auto& g = *c.generator;
    j["generator"] = {{"rate_per_hour", g.rate_per_hour}, {"duration_s", g.duration_s},
                      {"fleet_mix", g.fleet_mix},         {"arrival_fraction", g.arrival_fraction},
                      {"runways", g.runways},             {"band", to_string(g.band)},
                      {"max_delay_s", g.max_delay_s},     {"seed", g.seed}};
  }
  json approaches = json::array();
  for (auto a : c.approaches) approaches.push_back(to_string(a));
  j["approaches"] = approaches;
  j["horizon_s"] = c.horizon_s;
  j["eval_replications"] = c.eval_replications;
  j["antithetic"] = c.antithetic;
  j["weights"] = {c.w1, c.w2};
  j["seed"] = c.seed;
  j["det_params"] = to_json(c.det_params);
  j["sbo_params"] = to_json(c.sbo_params);
  j["sedr"] = {{"t_min", c.sedr.t_min},
               {"se_threshold", c.sedr.se_threshold},
               {"hard_cap", c.sedr.hard_cap},
               {"scale", {c.sedr.scale.f1, c.sedr.scale.f2}}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("scenario_path")) c.scenario_path = j["scenario_path"].get<std::string>();
    if (j.contains("generator")) {
      const auto& gj = j["generator"];
      GeneratorSpec g;
      g.rate_per_hour = gj.value("rate_per_hour", g.rate_per_hour);
      g.duration_s = gj.value("duration_s", g.duration_s);
      if (gj.contains("fleet_mix")) g.fleet_mix = gj["fleet_mix"].get<std::array<double, 4>>();
      g.arrival_fraction = gj.value("arrival_fraction", g.arrival_fraction);
      g.runways = gj.value("runways", g.runways);
      if (gj.contains("band")) {
        auto b = parse_spacing_band(gj["band"].get<std::string>());
        if (!b) throw std::invalid_argument("unknown spacing band in generator");
        g.band = *b;
      }
      g.max_delay_s = gj.value("max_delay_s", g.max_delay_s);
      g.seed = gj.value("seed", g.seed);
      c.generator = g;
    }
    if (j.contains("approaches")) {
      c.approaches.clear();
      for (const auto& a : j["approaches"]) {
        auto p = parse_approach(a.get<std::string>());
        if (!p) throw std::invalid_argument("unknown approach " + a.dump());
        c.approaches.push_back(*p);
      }
    }
    c.horizon_s = j.value("horizon_s", c.horizon_s);
    c.eval_replications = j.value("eval_replications", c.eval_replications);
    c.antithetic = j.value("antithetic", c.antithetic);
    if (j.contains("weights")) {
      c.w1 = j["weights"].at(0).get<double>();
      c.w2 = j["weights"].at(1).get<double>();
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("det_params")) c.det_params = opt_from_json(j["det_params"], c.det_params);
    if (j.contains("sbo_params")) c.sbo_params = opt_from_json(j["sbo_params"], c.sbo_params);
    if (j.contains("sedr")) {
      const auto& s = j["sedr"];
      c.sedr.t_min = s.value("t_min", c.sedr.t_min);
      c.sedr.se_threshold = s.value("se_threshold", c.sedr.se_threshold);
      c.sedr.hard_cap = s.value("hard_cap", c.sedr.hard_cap);
      if (s.contains("scale")) c.sedr.scale = {s["scale"].at(0).get<double>(), s["scale"].at(1).get<double>()};
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<std::vector<std::size_t>> partition_windows(const Scenario& scenario, double window_s) {
  if (!(window_s > 0.0)) throw std::invalid_argument("window length must be positive");
  std::vector<std::vector<std::size_t>> out;
  if (scenario.aircraft.empty()) return out;
  Millis t0 = scenario.aircraft.front().system_arrival;
  for (const auto& a : scenario.aircraft) t0 = std::min(t0, a.system_arrival);
  const Millis w = std::max<Millis>(1, from_seconds(window_s));
  std::map<Millis, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < scenario.aircraft.size(); ++k)
    groups[(scenario.aircraft[k].system_arrival - t0) / w].push_back(k);
  for (auto& [idx, members] : groups) out.push_back(std::move(members));
  return out;
}

RollingResult rolling_horizon(const Scenario& scenario, double window_s, const WindowSolver& solver) {
  RollingResult out;
  out.schedule.slots.resize(scenario.aircraft.size());
  std::vector<PlacedOp> committed;
  int index = 0;
  for (const auto& members : partition_windows(scenario, window_s)) {
    Scenario w = scenario;
    w.aircraft.clear();
    std::vector<int> ids;
    for (auto k : members) {
      w.aircraft.push_back(scenario.aircraft[k]);
      ids.push_back(scenario.aircraft[k].id);
    }
    auto outcome = solver(w, committed, index++);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const Slot* s = outcome.schedule.find(w.aircraft[k].id);
      if (!s) throw std::logic_error("window solver left an aircraft unscheduled");
      out.schedule.slots[members[k]] = *s;
    }
    const auto placed = placed_ops(outcome.schedule, w);
    committed.insert(committed.end(), placed.begin(), placed.end());
    out.window_ids.push_back(std::move(ids));
    out.windows.push_back(std::move(outcome));
  }
  std::vector<std::vector<std::size_t>> by_runway(static_cast<std::size_t>(scenario.runway_count));
  for (std::size_t k = 0; k < out.schedule.slots.size(); ++k)
    by_runway[static_cast<std::size_t>(out.schedule.slots[k].runway)].push_back(k);
  for (auto& r : by_runway) {
    std::sort(r.begin(), r.end(), [&](std::size_t a, std::size_t b) {
      const auto& sa = out.schedule.slots[a];
      const auto& sb = out.schedule.slots[b];
      if (sa.start != sb.start) return sa.start < sb.start;
      return sa.aircraft_id < sb.aircraft_id;
    });
    for (std::size_t p = 0; p < r.size(); ++p) out.schedule.slots[r[p]].position = static_cast<int>(p) + 1;
  }
  return out;
}

std::optional<std::size_t> weighted_pick(const std::vector<ObjectiveVector>& points, double w1, double w2) {
  std::vector<std::size_t> finite;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (std::isfinite(points[k].f1) && std::isfinite(points[k].f2)) finite.push_back(k);
  if (finite.empty()) return std::nullopt;
  double lo1 = points[finite[0]].f1, hi1 = lo1, lo2 = points[finite[0]].f2, hi2 = lo2;
  for (auto k : finite) {
    lo1 = std::min(lo1, points[k].f1);
    hi1 = std::max(hi1, points[k].f1);
    lo2 = std::min(lo2, points[k].f2);
    hi2 = std::max(hi2, points[k].f2);
  }
  auto norm = [](double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; };
  std::size_t best = finite[0];
  double best_score = std::numeric_limits<double>::infinity();
  for (auto k : finite) {
    const double score = w1 * norm(points[k].f1, lo1, hi1) + w2 * norm(points[k].f2, lo2, hi2);
    if (score < best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

WindowSolver fcfs_solver() {
  return [](const Scenario& w, const std::vector<PlacedOp>& committed, int) {
    WindowOutcome out;
    out.schedule = fcfs_schedule(w, committed, false);
    return out;
  };
}

WindowSolver deterministic_solver(const ExperimentConfig& config, Approach tag) {
  return [params = config.det_params, seed = config.seed, w1 = config.w1, w2 = config.w2, tag](
             const Scenario& w, const std::vector<PlacedOp>& committed, int index) {
    ScheduleProblem problem(w, deviation_fairness_evaluator(w), seed_sequences(w, committed), committed);
    OptParams p = params;
    p.seed = derive(seed, SeedTag::Optimizer, static_cast<std::uint64_t>(tag), static_cast<std::uint64_t>(index));
    return solve_with(problem, p, w1, w2);
  };
}

WindowSolver sbo_solver(const ExperimentConfig& config) {
  return [params = config.sbo_params, sedr = config.sedr, seed = config.seed, w1 = config.w1, w2 = config.w2](
             const Scenario& w, const std::vector<PlacedOp>& committed, int index) {
    const std::uint64_t sim_seed = derive(seed, SeedTag::Simulation, static_cast<std::uint64_t>(index));
    // Sample i sees the same draws for every candidate, so they are drawn once.
    std::vector<DrawTable> tables;
    std::vector<SimOptions> options(static_cast<std::size_t>(sedr.hard_cap));
    tables.reserve(options.size());
    for (std::size_t i = 0; i < options.size(); ++i) {
      tables.emplace_back(w, RandomSource{sim_seed, i, false});
      options[i].context = committed;
    }
    for (std::size_t i = 0; i < options.size(); ++i) options[i].draws = &tables[i];
    auto sampler_for = [&](const Schedule& s) {
      return [&w, &options, &s, sim_seed](int i) {
        const auto k = static_cast<std::size_t>(i);
        return simulate(s, w, RandomSource{sim_seed, k, false}, options.at(k)).objectives();
      };
    };

    const auto initial = seed_sequences(w, committed);
    SedrParams tuned = sedr;
    {
      const Schedule s0 = time_sequences(w, initial, committed).schedule;
      std::vector<ObjectiveVector> samples;
      auto sample = sampler_for(s0);
      for (int i = 0; i < sedr.t_min; ++i) samples.push_back(sample(i));
      const auto ref = summarize(std::move(samples)).mean;
      tuned.scale = {1.0, ref.f1 > 0.0 ? std::max(1.0, ref.f2 / ref.f1) : 1.0};
    }
    ScheduleEvaluator evaluator = [&, tuned](const Schedule& s) {
      return sedr_evaluate(sampler_for(s), tuned).mean;
    };
    ScheduleProblem problem(w, evaluator, initial, committed);
    OptParams p = params;
    p.seed = derive(seed, SeedTag::Optimizer, static_cast<std::uint64_t>(Approach::Sbo),
                    static_cast<std::uint64_t>(index));
    return solve_with(problem, p, w1, w2);
  };
}

double planned_sequence_change(const Schedule& schedule, const Scenario& scenario) {
  if (scenario.aircraft.empty()) return 0.0;
  std::vector<Millis> times(scenario.aircraft.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Slot* s = schedule.find(scenario.aircraft[k].id);
    if (!s) throw StructuralError("schedule misses aircraft " + std::to_string(scenario.aircraft[k].id));
    times[k] = s->start;
  }
  double sum = 0.0;
  for (int v : position_shifts(scenario.aircraft, times)) sum += std::abs(v);
  return sum / static_cast<double>(times.size());
}

Scenario load_experiment_scenario(const ExperimentConfig& config) {
  if (config.scenario_path) return load_scenario(*config.scenario_path);
  return generate_instance(*config.generator);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result{config, load_experiment_scenario(config), {}};
  const Scenario& scenario = result.scenario;
  result.approaches.resize(config.approaches.size());
  const std::uint64_t eval_seed = derive(config.seed, SeedTag::Evaluation);

  auto run_one = [&](std::size_t slot) {
    ApproachResult& r = result.approaches[slot];
    r.approach = config.approaches[slot];
    try {
      WindowSolver solver;
      switch (r.approach) {
        case Approach::Fcfs: solver = fcfs_solver(); break;
        case Approach::Deterministic: solver = deterministic_solver(config); break;
        case Approach::Sbo: solver = sbo_solver(config); break;
      }
      const double cpu0 = thread_cpu_seconds();
      r.plan = rolling_horizon(scenario, config.horizon_s, solver);
      r.compute_s = thread_cpu_seconds() - cpu0;

      for (const auto& v : check_feasibility(r.plan.schedule, scenario)) {
        if (v.kind != Violation::Kind::Window)
          throw std::logic_error("planned schedule breaks separation or runway order");
        r.window_feasible = false;
      }
      const auto eval = run_replications(r.plan.schedule, scenario, eval_seed, config.eval_replications,
                                         config.antithetic, {}, false);
      r.row.utilization_s = eval.stat("makespan_s").mean;
      r.row.avg_landing_delay_s = eval.stat("avg_landing_delay_s").mean;
      r.row.longest_landing_delay_s = eval.stat("max_landing_delay_s").mean;
      r.row.avg_takeoff_delay_s = eval.stat("avg_takeoff_delay_s").mean;
      r.row.longest_takeoff_delay_s = eval.stat("max_takeoff_delay_s").mean;
      r.row.infeasible_fraction = eval.stat("infeasible").mean;
      r.row.avg_sequence_change = planned_sequence_change(r.plan.schedule, scenario);
      r.ok = true;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
  };

  const auto n = config.approaches.size();
  const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count(config.threads)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) run_one(k);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        while (true) {
          std::size_t k;
          {
            std::lock_guard lock(mu);
            if (next >= n) return;
            k = next++;
          }
          run_one(k);
        }
      });
    for (auto& th : pool) th.join();
  }
  return result;
}

void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  {
    auto out = open_out(dir / "table.csv");
    out << kTableHeader << '\n';
    for (const auto& r : result.approaches) {
      const auto& row = r.row;
      out << to_string(r.approach) << ',' << fmt(row.utilization_s) << ',' << fmt(row.avg_landing_delay_s) << ','
          << fmt(row.longest_landing_delay_s) << ',' << fmt(row.avg_takeoff_delay_s) << ','
          << fmt(row.longest_takeoff_delay_s) << ',' << fmt(row.avg_sequence_change) << ','
          << fmt(row.infeasible_fraction) << ',' << (r.window_feasible ? 1 : 0) << ','
          << (r.ok ? std::string("ok") : "failed: " + csv_safe(r.error)) << '\n';
    }
  }
  {
    auto out = open_out(dir / "timing.csv");
    out << "approach,compute_s,evaluations,windows\n";
    for (const auto& r : result.approaches) {
      std::uint64_t evals = 0;
      for (const auto& w : r.plan.windows) evals += w.stats.evaluations;
      out << to_string(r.approach) << ',' << fmt(r.compute_s) << ',' << evals << ',' << r.plan.windows.size() << '\n';
    }
  }
  for (const auto& r : result.approaches) {
    const std::string name(to_string(r.approach));
    {
      auto out = open_out(dir / ("schedule_" + name + ".csv"));
      out << "id,op,class,runway,position,start_s\n";
      for (std::size_t k = 0; k < result.scenario.aircraft.size() && r.ok; ++k) {
        const auto& a = result.scenario.aircraft[k];
        const auto& s = r.plan.schedule.slots[k];
        out << a.id << ',' << to_string(a.op) << ',' << to_string(a.weight_class) << ',' << s.runway << ','
            << s.position << ',' << fmt(to_seconds(s.start)) << '\n';
      }
    }
    if (r.approach == Approach::Fcfs) continue;
    {
      auto out = open_out(dir / ("progress_" + name + ".csv"));
      out << "window,iteration,evaluations,archive_size,hvm\n";
      for (std::size_t w = 0; w < r.plan.windows.size(); ++w)
        for (const auto& p : r.plan.windows[w].progress)
          out << w << ',' << p.iteration << ',' << p.evaluations << ',' << p.archive_size << ',' << fmt(p.hvm) << '\n';
    }
    {
      auto out = open_out(dir / ("front_" + name + ".csv"));
      out << "window,f1,f2\n";
      for (std::size_t w = 0; w < r.plan.windows.size(); ++w)
        for (const auto& p : r.plan.windows[w].front) out << w << ',' << fmt(p.f1) << ',' << fmt(p.f2) << '\n';
    }
  }
  try {
    save_scenario(result.scenario, dir / "scenario.json");
  } catch (const std::exception& e) {
    throw std::runtime_error(e.what());
  }
  {
    json manifest;
    manifest["artifact"] = "runway_sbo";
    manifest["format_version"] = 1;
    manifest["config"] = to_json(result.config);
    manifest["scenario_file"] = "scenario.json";
    manifest["evaluation_seed"] = derive(result.config.seed, SeedTag::Evaluation);
    json approaches = json::array();
    for (const auto& r : result.approaches)
      approaches.push_back({{"approach", to_string(r.approach)}, {"ok", r.ok}, {"error", r.error}});
    manifest["approaches"] = approaches;
    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
}

}  // namespace runway
