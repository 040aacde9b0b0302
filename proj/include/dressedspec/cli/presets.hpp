// presets.hpp: bundled configurations

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dressedspec::cli {

struct Preset {
    std::string name;
    std::string description;
    std::string yaml;
};

const std::vector<Preset>& presets();
std::optional<Preset> find_preset(const std::string& name);

} // namespace dressedspec::cli
