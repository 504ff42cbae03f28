#pragma once

// Flat text scenario files: one `key = value` per line, dotted section
// prefixes, `#` comments. Every key is optional; missing keys keep the
// defaults of ScenarioConfig. See docs/config-format.md.

#include <string>

#include "spinfreeze/experiments.hpp"

namespace spinfreeze {

/// Every key, in a fixed order, with doubles printed to round-trip exactly.
std::string serialize_config(const ScenarioConfig& cfg);

/// Throws ConfigError naming the key (or "line N" for malformed lines).
ScenarioConfig parse_config(const std::string& text);

/// Throws IoError if the file cannot be read.
ScenarioConfig load_config(const std::string& path);

}  // namespace spinfreeze
