#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "blowup/config.hpp"
#include "blowup/report.hpp"

namespace blowup {

inline constexpr int kExitPass = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitCheckFailed = 2;

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::string> out;
    bool force = false;
    unsigned jobs = 1;
    std::optional<Direction> direction;  // simulate only
};

/// --out, then output.dir from the config, then $BLOWUP_LAB_OUT, then ./blowup-out.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& config);

/// Report builders behind the subcommands. Each echoes the full configuration.
ExperimentReport profile_check_report(const RunConfig& config);
ExperimentReport simulate_report(const RunConfig& config, const std::filesystem::path& out_dir);
ExperimentReport approx_sequence_report(const RunConfig& config, unsigned jobs);
ExperimentReport rates_report(const RunConfig& config, unsigned jobs);
ExperimentReport invariants_report(const RunConfig& config);

/// Loads the config, dispatches, writes artifacts under <out>/<subcommand> and
/// returns 0 when every check passes, 2 when one fails and 1 on configuration
/// or IO errors.
int run_command(const std::string& subcommand, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace blowup
