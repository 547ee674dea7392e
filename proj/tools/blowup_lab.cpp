// blowup-lab: command-line front end of the blow-up simulator.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "blowup/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral simulator and verification harness for ODE-type blowup of\n"
                 "u_t = i Lap u + |u|^alpha u."};
    app.require_subcommand(1);
    app.footer(blowup::config_reference() +
               "\nExit status: 0 all checks pass, 2 a check failed, 1 configuration or IO error.");

    blowup::CommandOptions opts;
    std::string direction;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "Run configuration (flat INI)")->required();
        sub->add_option("--out", opts.out, "Output root; overrides $BLOWUP_LAB_OUT and output.dir");
        sub->add_flag("--force", opts.force, "Run even when the profile hypotheses fail");
        sub->add_option("--jobs", opts.jobs, "Parallel jobs for sequence runs (0 = all cores)")
            ->default_val(1);
    };
    const char* subs[][2] = {
        {"profile-check", "Check the hypotheses on phi and report local coefficients"},
        {"simulate", "Single forward or backward run with monitor CSV"},
        {"approx-seq", "Approximate-solution sequence u_n from U(-1/n), Cauchy check"},
        {"rates", "Blow-up rate fits of the profile against the predicted exponents"},
        {"invariants", "Pointwise inequality and scaling property suites"},
    };
    for (auto& s : subs) {
        auto* sub = app.add_subcommand(s[0], s[1]);
        add_common(sub);
        if (std::string(s[0]) == "simulate") {
            sub->add_option("--direction", direction, "forward or backward (overrides simulate.direction)")
                ->check(CLI::IsMember({"forward", "backward"}));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : blowup::kExitConfigError;
    }
    if (!direction.empty()) {
        opts.direction = direction == "forward" ? blowup::Direction::Forward : blowup::Direction::Backward;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    return blowup::run_command(name, opts, std::cout, std::cerr);
}
