#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace airship {

struct BundledScenario {
    std::string_view name;
    std::string_view json;
};

/// Scenario configs compiled into the library from scenarios/*.json, sorted by name.
const std::vector<BundledScenario>& bundled_scenarios();

std::optional<std::string_view> find_bundled(std::string_view name);

}  // namespace airship
