#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "risfso_cli/sweep.hpp"

namespace risfso::cli
{
struct ParsedConfig
{
    SweepSpec spec;
    // Unknown keys, as JSON pointers.
    std::vector<std::string> warnings;
};

// Throws SchemaError with the JSON pointer of the offending field.
ParsedConfig parse_config(nlohmann::json const& doc);
ParsedConfig parse_config_file(std::string const& path);

// One scenario object as it appears under "scenarios"; `path` prefixes error
// messages and warnings.
Scenario parse_scenario_object(nlohmann::json const& node, std::string const& path,
                               std::vector<std::string>& warnings);

/// Named (alpha, beta) constants for the nine strong/moderate/weak x
/// red/blue/green scenarios, e.g. "table2-blue-strong".
struct TurbulencePreset
{
    std::string name;
    double alpha;
    double beta;
    double wavelength_nm;
    double cn2;
};

std::vector<TurbulencePreset> const& turbulence_presets();
TurbulencePreset const& turbulence_preset(std::string const& name);

// Figure presets: fig2 ... fig8, fig9a, fig9b.
std::vector<std::string> sweep_preset_names();
SweepSpec sweep_preset(std::string const& name, SnrSplit split = SnrSplit::product);

}  // namespace risfso::cli
