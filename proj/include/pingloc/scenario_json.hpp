#pragma once

#include <filesystem>

#include "json.hpp"
#include "pingloc/scenario.hpp"

namespace pingloc {

/// Field names mirror the struct members. `pinger` (with `position`) is
/// required; everything else falls back to the defaults.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Scenario& scenario);

nlohmann::json load_json_file(const std::filesystem::path& path);

nlohmann::json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& value, const std::string& where);

}  // namespace pingloc
