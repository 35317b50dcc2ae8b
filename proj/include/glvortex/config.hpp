#pragma once

// Nested key-value configuration files: a TOML subset (tables, strings,
// booleans, numbers, single-level arrays) mapped onto JSON values.

#include <string>

#include <json.hpp>

namespace glvortex {

/// Parses the TOML subset. Throws Errc::Config with a line number on errors.
nlohmann::json parse_toml(const std::string& text);

/// Writes a JSON object as TOML: scalars and arrays at the top, then one table
/// per nested object. Numbers keep full precision.
std::string dump_toml(const nlohmann::json& doc);

/// JSON if the first non-blank character is '{', TOML otherwise.
nlohmann::json parse_config_text(const std::string& text);

nlohmann::json load_config_file(const std::string& path);

}  // namespace glvortex
