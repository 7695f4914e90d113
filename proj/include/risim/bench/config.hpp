#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "risim/focuser.hpp"
#include "risim/scene.hpp"

namespace risim::bench {

enum class Method { NoRis, BeamFocus, FixedPhase, CopperSheet };

/// Stable identifier used in config files and CSV output.
std::string method_key(Method m);
/// Human-readable name used in the text tables.
std::string method_display_name(Method m);
Method method_from_key(const std::string& key);

struct OutputPaths {
    std::string csv;         // summary rows
    std::string table;       // aligned text table
    std::string records;     // optional per-realization rows
    std::string focus_log;   // optional per-realization focus records
};

/// Full description of one experiment: scenario statistics, geometry,
/// methods to evaluate, search mode, and output destinations.
struct ExperimentConfig {
    ScenarioSpec scenario;
    GeometryParams geometry;
    std::vector<Method> methods;
    FocusMode mode = FocusMode::Constructive;
    bool reoptimize_per_realization = true;
    OutputPaths output;

    void validate() const;

    /// Grid defaults: all four methods, 100 realizations.
    static ExperimentConfig defaults(Regime regime, std::size_t modules, std::uint64_t seed);
};

/// Sectioned key = value text format; unknown sections, unknown keys, and
/// duplicate keys are errors.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

std::string regime_key(Regime regime);

}  // namespace risim::bench
