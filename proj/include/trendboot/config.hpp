#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trendboot/harness.hpp"

namespace trendboot {

using Setting = std::pair<std::string, std::string>;

/// Read an INI-style document ([section] headers, key = value lines, '#' or
/// ';' comments) into "section.key" settings, in document order.
std::vector<Setting> read_settings(std::istream& in);
std::vector<Setting> read_settings_file(const std::string& path);

/// Build an experiment configuration from settings. `dgp.preset` is applied
/// first so that the remaining dgp keys override preset values. Unknown keys
/// and malformed values raise ConfigError; the result is validated.
ExperimentConfig build_experiment_config(const std::vector<Setting>& settings);

/// Apply one "section.key" = value setting.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Names of every accepted "section.key".
std::vector<std::string> known_setting_keys();

/// Parse "a,b,c" into reals; throws ConfigError on malformed entries.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace trendboot
