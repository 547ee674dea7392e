#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "blowup/experiments.hpp"
#include "blowup/field.hpp"
#include "blowup/profile.hpp"
#include "blowup/solver.hpp"

namespace blowup {

struct SimulateSettings {
    Direction direction = Direction::Backward;
    double t_from = 0.0;
    double t_to = -0.1;
    /// "gaussian": amplitude * exp(-|x|^2 / (2 width^2)); "profile": U(t_from).
    std::string initial = "gaussian";
    double amplitude = 1.0;
    double width = 1.0;
    bool operator==(const SimulateSettings&) const = default;
};

struct RatesSettings {
    FitWindow window{1e-4, 1e-1};
    std::size_t samples = 31;
    double exterior_radius = 0.3;
    bool forward_track = false;
    int forward_n = 64;
    bool operator==(const RatesSettings&) const = default;
};

struct RunConfig {
    ProfileSpec profile = ProfileSpec::power_law(ModelParams{}, 1.0, 12.0);
    Grid grid;
    SolverConfig solver;
    SimulateSettings simulate;
    SequenceSchedule schedule;
    FitWindow mu_window{1e-3, 1e-1};
    std::size_t checkpoints = 21;
    RatesSettings rates;
    std::string output_dir;  // empty: fall back to the environment or the default
    bool svg = true;
    std::uint64_t seed = 1729;
    std::size_t pairs = 100000;

    const ModelParams& model() const { return profile.params; }
    bool operator==(const RunConfig&) const = default;
};

/// Flat INI: `[section]` headers, `key = value` lines, `#` or `;` comments.
/// Errors are ConfigError naming the key and line.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Every setting, in a fixed order; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Text describing every key and its default, for --help.
std::string config_reference();

}  // namespace blowup
