#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nvnmr/io.hpp"

namespace nvnmr {

enum class ScenarioId { fig2_generator, fig3_chemshift, fig4_proton, custom };

std::string to_string(ScenarioId id);
ScenarioId scenario_id_from_string(const std::string& s);

/// A scenario: preset parameter blocks (JSON, merged with user overrides),
/// an output directory and a master seed applied to blocks that carry none.
struct ScenarioConfig {
    ScenarioId id = ScenarioId::custom;
    io::json blocks;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
};

/// Parses {"scenario": "...", "out_dir": "...", "seed": ..., <blocks>...},
/// filling preset defaults for the named scenario (user blocks win).
ScenarioConfig scenario_from_json(const io::json& j);

/// Aggregated invariant check of every parameter block; pure.
ValidationIssues validate_config(const ScenarioConfig& cfg);

struct ScenarioResult {
    std::vector<std::filesystem::path> files; // everything written
    io::json summary;                         // also written as summary.json
};

/// Runs the scenario and writes its artifact bundle. All computation happens
/// before the first write, so an invalid config or a numeric failure leaves
/// the output directory untouched. Every numeric quantity in the summary
/// carries a unit string and the module that produced it.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

} // namespace nvnmr
