#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "wban/engine.hpp"

namespace wban {

// Fully-defaulted configuration document; user files are validated against
// this skeleton (unknown keys are rejected by name).
nlohmann::json default_config_json();

SimConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SimConfig& cfg);

SimConfig parse_config(const std::string& text);
std::string serialize_config(const SimConfig& cfg);
SimConfig load_config_file(const std::string& path);

// Applies a flat "section.key=value" override; the key path must exist.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace wban
