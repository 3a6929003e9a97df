// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "netmimo/experiment.hpp"

namespace netmimo {

/// Parses an experiment spec from JSON text. Unknown keys, wrong types and
/// constraint violations raise ConfigError with the offending key.
ExperimentSpec parse_spec(const std::string& json_text);

/// Reads and parses a JSON file; IoError if unreadable.
ExperimentSpec load_spec(const std::string& path);

std::string spec_to_json(const ExperimentSpec& spec);

}  // namespace netmimo
