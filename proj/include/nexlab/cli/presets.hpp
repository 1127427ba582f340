#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace nexlab::cli {

inline constexpr int kPresetVersion = 1;

std::vector<std::string> preset_names();

/// Config document of a named preset; ConfigError if the name is unknown.
nlohmann::json preset(const std::string& name);

}  // namespace nexlab::cli
