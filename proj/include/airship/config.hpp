#pragma once

// JSON scenario files.  See docs/config.md for the schema.

#include "airship/sim.hpp"
#include "airship/siso.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace airship {

/// Malformed or out-of-range configuration.  `field` is the dotted path of the offending key.
struct ConfigError : std::runtime_error {
    ConfigError(std::string field, const std::string& message);
    std::string field;
};

/// A file could not be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SisoScenario {
    std::string name = "siso";
    int order = 2;
    std::vector<double> k{1.0};
    std::vector<double> lambda{1.0, 1.0};
    std::vector<double> c{1.0};
    double rho = 0.05;
    siso::RhoMode rho_mode = siso::RhoMode::Fixed;
    double rho0 = 0.0;
    std::vector<double> x0{1.0, 0.0};
    double dt = 1e-4;
    double t_end = 20.0;
    std::vector<siso::SisoLaw> laws{siso::SisoLaw::BSMC2, siso::SisoLaw::BSMC1, siso::SisoLaw::SMC};

    siso::SisoGains gains() const;
};

enum class ScenarioKind { Airship, Siso };

ScenarioKind scenario_kind(const nlohmann::json& j);

/// Airship scenario.  Missing keys take the defaults of ScenarioConfig / default_airship_params.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

SisoScenario siso_scenario_from_json(const nlohmann::json& j);
nlohmann::json siso_scenario_to_json(const SisoScenario& s);

AirshipParams params_from_json(const nlohmann::json& j, const std::string& path = "params");
nlohmann::json params_to_json(const AirshipParams& p);

GainSet gains_from_json(const nlohmann::json& j, const std::string& path = "gains");
nlohmann::json gains_to_json(const GainSet& g);

/// Parses text; syntax errors are reported as ConfigError with field "<document>".
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& path);

siso::SisoLaw parse_siso_law(std::string_view s);
std::string_view to_string(siso::SisoLaw law);

}  // namespace airship
