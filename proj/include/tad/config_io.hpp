#pragma once

#include "tad/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace tad {

/// Parses a scenario document. Missing optional fields take their defaults
/// (unit weights and penalties, step 0.005, horizon 6, lambda 1, equal gamma
/// weights, capture radius 0.1). The result is validated.
ScenarioConfig config_from_json(const nlohmann::json& doc);

/// Full effective document; config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Applies "dotted.key=value" overrides to the effective document of cfg.
/// Every key must already exist in that document. Values are parsed as JSON
/// when possible and kept as strings otherwise.
ScenarioConfig apply_overrides(const ScenarioConfig& cfg, const std::vector<std::string>& overrides);

/// Reads, defaults, overrides and validates a scenario file.
ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});

}  // namespace tad
