#include <pybind11/pybind11.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "runway/baseline.hpp"
#include "runway/experiment.hpp"
#include "runway/metrics.hpp"
#include "runway/resampling.hpp"
#include "runway/scenario_io.hpp"
#include "runway/simulator.hpp"

namespace py = pybind11;
using namespace runway;

namespace {

using Point = std::pair<double, double>;

std::vector<ObjectiveVector> to_points(const std::vector<Point>& v) {
  std::vector<ObjectiveVector> out;
  out.reserve(v.size());
  for (const auto& [a, b] : v) out.push_back({a, b});
  return out;
}

std::vector<Point> from_points(const std::vector<ObjectiveVector>& v) {
  std::vector<Point> out;
  out.reserve(v.size());
  for (const auto& p : v) out.emplace_back(p.f1, p.f2);
  return out;
}

py::dict metrics_dict(const SimMetrics& m) {
  py::dict d;
  const auto values = m.values();
  for (std::size_t k = 0; k < SimMetrics::kCount; ++k) d[py::str(std::string(SimMetrics::kNames[k]))] = values[k];
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Runway sequencing core: baselines, simulator, metrics and experiments";

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<WindowInfeasible>(m, "WindowInfeasible", PyExc_ValueError);

  py::class_<Slot>(m, "Slot")
      .def_readonly("aircraft_id", &Slot::aircraft_id)
      .def_readonly("runway", &Slot::runway)
      .def_readonly("position", &Slot::position)
      .def_property_readonly("start_s", [](const Slot& s) { return to_seconds(s.start); })
      .def("__repr__", [](const Slot& s) {
        return "Slot(id=" + std::to_string(s.aircraft_id) + ", runway=" + std::to_string(s.runway) +
               ", position=" + std::to_string(s.position) + ", start_s=" + std::to_string(to_seconds(s.start)) + ")";
      });

  py::class_<Schedule>(m, "Schedule")
      .def_readonly("slots", &Schedule::slots)
      .def_property_readonly("makespan_s", [](const Schedule& s) { return to_seconds(s.makespan()); })
      .def("__len__", [](const Schedule& s) { return s.slots.size(); });

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_json", [](const std::string& text) { return scenario_from_json(nlohmann::json::parse(text)); })
      .def("to_json", [](const Scenario& s) { return to_json(s).dump(); })
      .def_property_readonly("aircraft_count", [](const Scenario& s) { return s.aircraft.size(); })
      .def_readonly("runway_count", &Scenario::runway_count)
      .def_property(
          "noise_enabled", [](const Scenario& s) { return s.noise.enabled; },
          [](Scenario& s, bool on) { s.noise.enabled = on; });

  m.def("load_scenario", [](const std::filesystem::path& p) { return load_scenario(p); }, py::arg("path"));
  m.def("save_scenario", [](const Scenario& s, const std::filesystem::path& p) { save_scenario(s, p); },
        py::arg("scenario"), py::arg("path"));
  m.def(
      "generate",
      [](const std::string& spec, std::uint64_t seed) { return generate_instance(parse_generator_spec(spec, seed)); },
      py::arg("spec") = "", py::arg("seed") = 1,
      "Synthetic instance from a spec such as \"rate=103,hours=1,mix=10.1:3.8:74.3:11.8\".");

  m.def("fcfs_schedule", [](const Scenario& s, bool strict) { return fcfs_schedule(s, {}, strict); },
        py::arg("scenario"), py::arg("strict") = false);
  m.def("greedy_schedule", [](const Scenario& s) { return greedy_schedule(s, {}, {}, false).schedule; },
        py::arg("scenario"));
  m.def(
      "violations",
      [](const Schedule& sched, const Scenario& s) {
        std::vector<std::string> out;
        for (const auto& v : check_feasibility(sched, s)) out.push_back(std::string(to_string(v.kind)));
        return out;
      },
      py::arg("schedule"), py::arg("scenario"));

  m.def(
      "simulate",
      [](const Schedule& sched, const Scenario& s, std::uint64_t seed, std::uint64_t replication) {
        return metrics_dict(simulate(sched, s, RandomSource{seed, replication, false}).metrics);
      },
      py::arg("schedule"), py::arg("scenario"), py::arg("seed") = 1, py::arg("replication") = 0);
  m.def(
      "replicate",
      [](const Schedule& sched, const Scenario& s, std::uint64_t seed, int n, bool antithetic) {
        const auto r = run_replications(sched, s, seed, n, antithetic, {}, false);
        py::dict d;
        for (std::size_t k = 0; k < SimMetrics::kCount; ++k)
          d[py::str(std::string(SimMetrics::kNames[k]))] = py::make_tuple(r.stats[k].mean, r.stats[k].sd);
        return d;
      },
      py::arg("schedule"), py::arg("scenario"), py::arg("seed") = 1, py::arg("n") = 50, py::arg("antithetic") = false,
      "Per-metric (mean, sd) over n replications.");

  m.def("hypervolume", [](const std::vector<Point>& f, Point ref) {
    return hypervolume(to_points(f), {ref.first, ref.second});
  }, py::arg("front"), py::arg("ref") = Point{1.0, 1.0});
  m.def("nondominated", [](const std::vector<Point>& pts) { return from_points(nondominated_filter(to_points(pts))); },
        py::arg("points"));
  m.def("y_metric", [](const std::vector<Point>& f, const std::vector<Point>& ref) {
    return y_metric(to_points(f), to_points(ref));
  }, py::arg("front"), py::arg("reference"));
  m.def("ff", [](double x1, double x2) { const auto v = ff(x1, x2); return Point{v.f1, v.f2}; });
  m.def("zdt3", [](double x1, double x2) { const auto v = zdt3(x1, x2); return Point{v.f1, v.f2}; });

  m.def(
      "sedr_sample_count",
      [](const std::function<Point(int)>& sample, int t_min, double threshold, int hard_cap) {
        SedrParams p;
        p.t_min = t_min;
        p.se_threshold = threshold;
        p.hard_cap = hard_cap;
        p.validate();
        const auto r = sedr_evaluate(
            [&](int i) {
              const auto v = sample(i);
              return ObjectiveVector{v.first, v.second};
            },
            p);
        return py::make_tuple(r.n, Point{r.mean.f1, r.mean.f2}, r.budget_capped);
      },
      py::arg("sample"), py::arg("t_min") = 14, py::arg("threshold") = 22.0, py::arg("hard_cap") = 30,
      "Returns (samples drawn, mean, capped).");

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::filesystem::path& out_dir) {
        auto c = config_from_json(nlohmann::json::parse(config_json));
        c.out_dir = out_dir;
        c.validate();
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c);
          emit_outputs(r, out_dir);
        }
        py::dict rows;
        for (const auto& a : r.approaches) {
          py::dict row;
          row["ok"] = a.ok;
          row["error"] = a.error;
          row["utilization_s"] = a.row.utilization_s;
          row["avg_sequence_change"] = a.row.avg_sequence_change;
          row["infeasible_fraction"] = a.row.infeasible_fraction;
          rows[py::str(std::string(to_string(a.approach)))] = row;
        }
        return rows;
      },
      py::arg("config_json"), py::arg("out_dir"),
      "Runs the configuration (same JSON as a manifest's \"config\"), writes the CSVs, returns the table rows.");
  m.def("default_config", []() {
    ExperimentConfig c;
    c.generator = GeneratorSpec{};
    return to_json(c).dump();
  });
}
