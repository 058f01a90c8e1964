#include "runway/scenario_io.hpp"

#include <fstream>
#include <stdexcept>

namespace runway {

using nlohmann::json;

namespace {

double sec(Millis ms) { return to_seconds(ms); }
Millis ms(const json& j) { return from_seconds(j.get<double>()); }

std::string op_pair_key(OperationType leader, OperationType follower) {
  return std::string(to_string(leader)) + ">" + std::string(to_string(follower));
}

template <typename T, typename Parse>
T parse_or_throw(const json& j, Parse parse, const char* what) {
  const auto s = j.get<std::string>();
  auto v = parse(s);
  if (!v) throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
  return *v;
}

json to_json(const TruncatedNormal& t) {
  return {{"mean_s", t.mean_s}, {"sd_s", t.sd_s}, {"lo_sd", t.lo_sd}, {"hi_sd", t.hi_sd}};
}

void read(const json& j, TruncatedNormal& t) {
  t.mean_s = j.value("mean_s", t.mean_s);
  t.sd_s = j.value("sd_s", t.sd_s);
  t.lo_sd = j.value("lo_sd", t.lo_sd);
  t.hi_sd = j.value("hi_sd", t.hi_sd);
}

json to_json(const StochasticConfig& c) {
  json shapes = json::array();
  for (const auto& b : c.rot_shape) shapes.push_back({{"alpha", b.alpha}, {"beta", b.beta}});
  return {{"enabled", c.enabled},
          {"arrival_sysarr", to_json(c.arrival_sysarr)},
          {"departure_sysarr", to_json(c.departure_sysarr)},
          {"transit", to_json(c.transit)},
          {"min_segment_fraction", c.min_segment_fraction},
          {"rot_shape", shapes},
          {"rot_mean_s", {{"arrival", c.rot_mean_s[0]}, {"departure", c.rot_mean_s[1]}}},
          {"rot_lo_factor", c.rot_lo_factor},
          {"rot_hi_factor", c.rot_hi_factor},
          {"holding_cap", c.holding_cap},
          {"max_wait_s", sec(c.max_wait)}};
}

void read(const json& j, StochasticConfig& c) {
  c.enabled = j.value("enabled", c.enabled);
  if (j.contains("arrival_sysarr")) read(j["arrival_sysarr"], c.arrival_sysarr);
  if (j.contains("departure_sysarr")) read(j["departure_sysarr"], c.departure_sysarr);
  if (j.contains("transit")) read(j["transit"], c.transit);
  c.min_segment_fraction = j.value("min_segment_fraction", c.min_segment_fraction);
  if (j.contains("rot_shape")) {
    const auto& a = j["rot_shape"];
    if (a.size() != 4) throw std::invalid_argument("rot_shape needs four entries");
    for (std::size_t k = 0; k < 4; ++k) c.rot_shape[k] = {a[k].at("alpha").get<double>(), a[k].at("beta").get<double>()};
  }
  if (j.contains("rot_mean_s")) {
    c.rot_mean_s[0] = j["rot_mean_s"].at("arrival").get<std::array<double, 4>>();
    c.rot_mean_s[1] = j["rot_mean_s"].at("departure").get<std::array<double, 4>>();
  }
  c.rot_lo_factor = j.value("rot_lo_factor", c.rot_lo_factor);
  c.rot_hi_factor = j.value("rot_hi_factor", c.rot_hi_factor);
  c.holding_cap = j.value("holding_cap", c.holding_cap);
  if (j.contains("max_wait_s")) c.max_wait = ms(j["max_wait_s"]);
}

json to_json(const NodeNetwork& n) {
  return {{"arrival_nm", n.arrival_nm},   {"departure_nm", n.departure_nm},   {"arrival_kts", n.arrival_kts},
          {"departure_kts", n.departure_kts}, {"taxi_to_roll_s", sec(n.taxi_to_roll)}};
}

void read(const json& j, NodeNetwork& n) {
  if (j.contains("arrival_nm")) n.arrival_nm = j["arrival_nm"].get<decltype(n.arrival_nm)>();
  if (j.contains("departure_nm")) n.departure_nm = j["departure_nm"].get<decltype(n.departure_nm)>();
  if (j.contains("arrival_kts")) n.arrival_kts = j["arrival_kts"].get<decltype(n.arrival_kts)>();
  if (j.contains("departure_kts")) n.departure_kts = j["departure_kts"].get<decltype(n.departure_kts)>();
  if (j.contains("taxi_to_roll_s")) n.taxi_to_roll = ms(j["taxi_to_roll_s"]);
}

constexpr SpacingBand kBands[] = {SpacingBand::Close, SpacingBand::Medium, SpacingBand::Wide};

}  // namespace

json to_json(const SeparationMatrix& m) {
  json same = json::object();
  for (auto lo : kOperationTypes)
    for (auto fo : kOperationTypes) {
      json rows = json::array();
      for (auto l : kWeightClasses) {
        json row = json::array();
        for (auto f : kWeightClasses) row.push_back(sec(m.same_runway(l, f, lo, fo)));
        rows.push_back(row);
      }
      same[op_pair_key(lo, fo)] = rows;
    }
  json parallel = json::object();
  for (auto band : kBands) {
    json rules = json::object();
    for (auto lo : kOperationTypes)
      for (auto fo : kOperationTypes) {
        const auto& r = m.parallel(band, lo, fo);
        switch (r.kind) {
          case ParallelRule::Kind::SameAsSingle: rules[op_pair_key(lo, fo)] = "same_as_single"; break;
          case ParallelRule::Kind::Independent: rules[op_pair_key(lo, fo)] = "independent"; break;
          case ParallelRule::Kind::Fixed: rules[op_pair_key(lo, fo)] = {{"fixed_s", sec(r.fixed)}}; break;
        }
      }
    parallel[std::string(to_string(band))] = rules;
  }
  return {{"same_runway", same}, {"parallel", parallel}};
}

SeparationMatrix separation_from_json(const json& j) {
  SeparationMatrix m = SeparationMatrix::faa_default();
  if (j.contains("same_runway")) {
    for (auto lo : kOperationTypes)
      for (auto fo : kOperationTypes) {
        const auto key = op_pair_key(lo, fo);
        if (!j["same_runway"].contains(key)) continue;
        const auto& rows = j["same_runway"][key];
        if (rows.size() != 4) throw std::invalid_argument("separation table " + key + " needs 4 rows");
        for (auto l : kWeightClasses) {
          const auto& row = rows[static_cast<std::size_t>(index_of(l))];
          if (row.size() != 4) throw std::invalid_argument("separation table " + key + " needs 4 columns");
          for (auto f : kWeightClasses) {
            const Millis v = ms(row[static_cast<std::size_t>(index_of(f))]);
            if (v < 0) throw std::invalid_argument("negative separation in " + key);
            m.set_same_runway(l, f, lo, fo, v);
          }
        }
      }
  }
  if (j.contains("parallel")) {
    for (auto band : kBands) {
      const std::string bk(to_string(band));
      if (!j["parallel"].contains(bk)) continue;
      const auto& rules = j["parallel"][bk];
      for (auto lo : kOperationTypes)
        for (auto fo : kOperationTypes) {
          const auto key = op_pair_key(lo, fo);
          if (!rules.contains(key)) continue;
          const auto& r = rules[key];
          ParallelRule rule;
          if (r.is_string() && r == "same_as_single") {
            rule.kind = ParallelRule::Kind::SameAsSingle;
          } else if (r.is_string() && r == "independent") {
            rule.kind = ParallelRule::Kind::Independent;
          } else if (r.is_object() && r.contains("fixed_s")) {
            rule.kind = ParallelRule::Kind::Fixed;
            rule.fixed = ms(r["fixed_s"]);
          } else {
            throw std::invalid_argument("bad parallel rule for " + bk + " " + key);
          }
          m.set_parallel(band, lo, fo, rule);
        }
    }
  }
  return m;
}

json to_json(const Scenario& s) {
  json aircraft = json::array();
  for (const auto& a : s.aircraft)
    aircraft.push_back({{"id", a.id},
                        {"op", to_string(a.op)},
                        {"class", to_string(a.weight_class)},
                        {"ready_s", sec(a.ready)},
                        {"target_s", sec(a.target)},
                        {"due_s", sec(a.due)},
                        {"weight", a.weight},
                        {"system_arrival_s", sec(a.system_arrival)}});
  json bands = json::array();
  for (int a = 0; a < s.runway_count; ++a)
    for (int b = a + 1; b < s.runway_count; ++b)
      bands.push_back({{"runways", {a, b}}, {"band", to_string(s.band(a, b))}});
  return {{"version", kScenarioVersion},
          {"aircraft", aircraft},
          {"runways", {{"count", s.runway_count}, {"spacing_bands", bands}}},
          {"separation", to_json(s.separation)},
          {"fleet_mix", s.fleet_mix},
          {"max_delay_s", sec(s.max_delay)},
          {"noise", to_json(s.noise)},
          {"network", to_json(s.network)}};
}

Scenario scenario_from_json(const json& j) {
  try {
    if (j.value("version", std::string{}) != kScenarioVersion)
      throw std::invalid_argument("scenario version must be \"" + std::string(kScenarioVersion) + "\"");
    Scenario s;
    const auto& rw = j.at("runways");
    s.runway_count = rw.at("count").get<int>();
    if (s.runway_count < 1) throw std::invalid_argument("runway count must be >= 1");
    s.spacing.assign(static_cast<std::size_t>(s.runway_count * s.runway_count), SpacingBand::Wide);
    if (rw.contains("spacing_bands"))
      for (const auto& e : rw["spacing_bands"]) {
        const int a = e.at("runways").at(0).get<int>();
        const int b = e.at("runways").at(1).get<int>();
        if (a < 0 || b < 0 || a >= s.runway_count || b >= s.runway_count || a == b)
          throw std::invalid_argument("bad runway pair in spacing_bands");
        s.set_band(a, b, parse_or_throw<SpacingBand>(e.at("band"), parse_spacing_band, "spacing band"));
      }
    for (const auto& e : j.at("aircraft")) {
      Aircraft a;
      a.id = e.at("id").get<int>();
      a.op = parse_or_throw<OperationType>(e.at("op"), parse_operation_type, "operation");
      a.weight_class = parse_or_throw<WeightClass>(e.at("class"), parse_weight_class, "weight class");
      a.target = ms(e.at("target_s"));
      a.ready = e.contains("ready_s") ? ms(e["ready_s"]) : a.target;
      a.system_arrival = e.contains("system_arrival_s") ? ms(e["system_arrival_s"]) : a.ready;
      a.weight = e.value("weight", 1.0);
      if (e.contains("max_delay_s")) throw std::invalid_argument("max_delay_s is a scenario field, not per aircraft");
      s.aircraft.push_back(a);
    }
    if (j.contains("max_delay_s")) s.max_delay = ms(j["max_delay_s"]);
    for (std::size_t k = 0; k < s.aircraft.size(); ++k) {
      const auto& e = j["aircraft"][k];
      s.aircraft[k].due = e.contains("due_s") ? ms(e["due_s"]) : s.aircraft[k].target + s.max_delay;
    }
    if (j.contains("separation")) s.separation = separation_from_json(j["separation"]);
    if (j.contains("fleet_mix")) s.fleet_mix = j["fleet_mix"].get<std::array<double, 4>>();
    if (j.contains("noise")) read(j["noise"], s.noise);
    if (j.contains("network")) read(j["network"], s.network);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("scenario " + path.string() + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario " + path.string());
  out << to_json(s).dump(2) << '\n';
}

}  // namespace runway
