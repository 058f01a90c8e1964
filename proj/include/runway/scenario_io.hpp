#pragma once

#include <filesystem>
#include <string>

#include "runway/domain.hpp"
#include "json.hpp"

namespace runway {

inline constexpr std::string_view kScenarioVersion = "v1";

/// Scenario document: {version, aircraft[], runways{count, spacing_bands},
/// separation, fleet_mix, max_delay_s, noise, network}. Times are seconds.
nlohmann::json to_json(const Scenario& s);
/// Missing optional sections keep their defaults. Throws
/// std::invalid_argument on a wrong version or malformed content.
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SeparationMatrix& m);
SeparationMatrix separation_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace runway
