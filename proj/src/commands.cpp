#include "blowup/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/experiments.hpp"
#include "blowup/format.hpp"
#include "blowup/invariants.hpp"

namespace blowup {

namespace {

void echo_config(ExperimentReport& r, const RunConfig& config) {
    std::istringstream in(serialize_config(config));
    std::string line, section;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find(" = ");
        r.echo(section + "." + line.substr(0, eq), line.substr(eq + 3));
    }
}

void require_hypotheses(const RunConfig& config, bool force) {
    if (force) return;
    const auto rep = check_hypotheses(config.profile);
    if (const auto* f = rep.first_failure()) {
        throw HypothesisError("profile hypothesis failed: " + f->label + " (" + f->detail +
                              "); use --force to run anyway");
    }
}

ComplexField gaussian(const Grid& grid, double amplitude, double width) {
    return inject(grid, [&](const Coord& x) {
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) r2 += x[d] * x[d];
        return complex(amplitude * std::exp(-r2 / (2.0 * width * width)), 0.0);
    });
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& config) {
    if (flag && !flag->empty()) return *flag;
    if (!config.output_dir.empty()) return config.output_dir;
    if (const char* env = std::getenv("BLOWUP_LAB_OUT"); env && *env) return env;
    return "blowup-out";
}

ExperimentReport profile_check_report(const RunConfig& config) {
    ExperimentReport r;
    r.title = "profile-check";
    echo_config(r, config);
    const auto rep = check_hypotheses(config.profile);
    for (const auto& c : rep.checks) {
        r.flag(c.label, c.passed);
        if (!c.detail.empty()) r.value(c.label + ".detail", c.detail);
    }
    for (const auto& lb : rep.local) {
        const std::string p = "point" + std::to_string(lb.point + 1);
        r.value(p + ".eta0", lb.eta0);
        r.value(p + ".eta0_direction_spread", lb.eta0_spread);
        for (int b = 1; b <= 3; ++b) {
            r.value(p + ".order" + std::to_string(b) + "_ratio_range",
                    "[" + format_double(lb.ratio_min[b]) + ", " + format_double(lb.ratio_max[b]) + "]");
        }
    }
    if (rep.passed()) {
        const auto t = theoretical_exponents(config.profile);
        r.value("target.l2_exponent", t.l2_exponent);
        r.value("target.theta", t.theta);
        r.value("target.grad_exponent", t.grad_exponent);
        r.value("target.laplacian_bound_exponent", t.laplacian_bound_exponent);
        r.value("target.grad_laplacian_bound_exponent", t.grad_laplacian_bound_exponent);
        if (config.grid.dim <= 3) {
            const BlowupProfile profile(config.profile);
            r.value("grid.boundary_magnitude_t0",
                    validate_profile_on_grid(profile, config.grid, config.schedule.t0));
        }
    }
    return r;
}

ExperimentReport simulate_report(const RunConfig& config, const std::filesystem::path& out_dir) {
    ExperimentReport r;
    r.title = "simulate";
    echo_config(r, config);
    const auto& s = config.simulate;
    SpectralWorkspace ws(config.grid);
    ComplexField initial;
    if (s.initial == "profile") {
        const BlowupProfile profile(config.profile);
        validate_profile_on_grid(profile, config.grid, s.t_from);
        initial = eval_U(profile, s.t_from, config.grid);
    } else {
        initial = gaussian(config.grid, s.amplitude, s.width);
    }
    const auto res = integrate(config.model(), initial, s.t_from, s.t_to, s.direction, config.solver, ws);
    r.value("direction", to_string(s.direction));
    r.value("status", res.status == RunStatus::Completed ? "completed" : "blowup_detected");
    r.value("t_final", res.t);
    r.value("steps", static_cast<double>(res.steps));
    r.value("dt_smallest", res.dt_smallest);
    r.value("linf_final", linf_norm(res.field));
    r.value("l2_final", res.monitor.records.back().l2);

    std::ostringstream monitor_csv;
    write_monitor_csv(res.monitor, monitor_csv);
    write_text_file(out_dir / "monitor.csv", monitor_csv.str());
    std::ostringstream field_csv;
    write_csv(res.field, field_csv);
    write_text_file(out_dir / "field.csv", field_csv.str());

    if (s.direction == Direction::Backward) {
        const auto mono = check_monotone(res.monitor, 1e-8);
        r.check("backward.l2_relative_increase", mono.worst_l2_increase, Relation::AtMost, 1e-8);
        r.check("backward.grad_relative_increase", mono.worst_grad_increase, Relation::AtMost, 1e-8);
        if (res.monitor.cadence == 1 && res.monitor.records.size() >= 3) {
            r.value("dissipation_residual", dissipation_residual(res.monitor));
            r.value("gradient_law_excess", gradient_law_excess(res.monitor));
        }
    }
    return r;
}

ExperimentReport approx_sequence_report(const RunConfig& config, unsigned jobs) {
    ExperimentReport r;
    r.title = "approx-seq";
    echo_config(r, config);
    const BlowupProfile profile(config.profile);
    SequenceOptions opts{config.mu_window, config.checkpoints, jobs};
    const auto seq = approx_sequence(profile, config.grid, config.schedule, config.solver, opts);
    for (const auto& run : seq.runs) {
        const std::string p = "n" + std::to_string(run.n);
        r.check(p + ".eps_at_start_h1", run.initial_error_h1, Relation::Below, 1e-13);
        r.value(p + ".eps_at_t0_h1", run.final_error_h1);
        r.value(p + ".steps", static_cast<double>(run.steps));
        r.fits.push_back({run.error_h1.name, run.mu, std::nullopt});
        r.check(p + ".mu_positive", run.mu.slope, Relation::Above, 0.0);
        r.check(p + ".mu_stderr_over_mu", run.mu.stderr_slope / run.mu.slope, Relation::Below, 0.1);
        r.series.push_back(run.error_h1);
    }
    r.value("pooled_mu", seq.pooled_mu);
    r.value("pooled_mu_stderr", seq.pooled_stderr);
    r.flag("eps_at_t0_strictly_decreasing_in_n", seq.final_error_decreasing());
    if (seq.runs.size() >= 2) {
        const auto cauchy = cauchy_in_n(seq);
        for (const auto& p : cauchy.consecutive) {
            r.value("cauchy.n" + std::to_string(p.n) + "_n" + std::to_string(p.m), p.distance);
        }
        r.value("cauchy.max_distance", cauchy.max_distance);
        r.flag("cauchy.consecutive_decreasing", cauchy.consecutive_decreasing());
        r.flag("cauchy.triangle_inequality", cauchy.triangle_holds());
    }
    return r;
}

ExperimentReport rates_report(const RunConfig& config, unsigned jobs) {
    ExperimentReport r;
    r.title = "rates";
    echo_config(r, config);
    const BlowupProfile profile(config.profile);
    const auto& w = config.rates.window;
    validate_profile_on_grid(profile, config.grid, -w.s_hi);
    const auto pr = profile_rates(profile, config.grid, w, config.rates.samples);
    const auto& t = pr.targets;
    r.value("target.l2_exponent", t.l2_exponent);
    r.value("target.grad_exponent", t.grad_exponent);
    r.value("target.laplacian_bound_exponent", t.laplacian_bound_exponent);
    r.value("target.grad_laplacian_bound_exponent", t.grad_laplacian_bound_exponent);
    r.check_fit("l2_slope", pr.l2_fit, -t.l2_exponent, 0.01);
    r.check_fit("grad_l2_slope", pr.grad_fit, -t.grad_exponent, 0.01);
    r.check_fit("laplacian_l2_slope", pr.laplacian_fit, -t.laplacian_bound_exponent, 0.02);
    r.fits.push_back({"grad_laplacian_l2", pr.grad_laplacian_fit, -t.grad_laplacian_bound_exponent});
    r.value("l2_plateau", pr.l2_plateau);
    r.value("grad_plateau", pr.grad_plateau);
    r.check("l2_plateau_spread_last_decade", pr.l2_plateau_spread, Relation::Below, 0.02);
    r.check("grad_plateau_spread_last_decade", pr.grad_plateau_spread, Relation::Below, 0.02);
    for (const auto* s : {&pr.l2, &pr.grad_l2, &pr.laplacian_l2, &pr.grad_laplacian_l2}) r.series.push_back(*s);

    const auto ext = exterior_convergence_closed_form(profile, config.grid, {-w.s_hi, -w.s_lo},
                                                      config.rates.exterior_radius);
    r.value("exterior.mask_points", static_cast<double>(ext.mask_points));
    r.value("exterior.distance_early", ext.samples.front().distance);
    r.value("exterior.distance_late", ext.samples.back().distance);
    r.flag("exterior.distance_decreases", ext.decreasing());

    if (config.rates.forward_track) {
        SequenceSchedule one{{config.rates.forward_n}, config.schedule.t0};
        SequenceOptions opts{config.mu_window, config.checkpoints, jobs};
        const auto seq = approx_sequence(profile, config.grid, one, config.solver, opts);
        const auto& run = seq.runs.front();
        const auto tr = forward_blowup(profile, run.final_field, config.schedule.t0, config.solver);
        r.value("forward.t_stop", tr.t_stop);
        r.value("forward.status", tr.status == RunStatus::BlowupDetected ? "blowup_detected" : "completed");
        r.value("forward.relative_error_at_start", tr.samples.front().relative_error);
        r.check("forward.max_relative_h1_error", tr.max_relative_error, Relation::Below, 0.1);
        if (tr.l2_fit) {
            r.check_fit("forward.l2_slope_last_decade", *tr.l2_fit, -t.l2_exponent, 0.05);
        } else {
            r.flag("forward.l2_slope_last_decade_available", false);
        }
        if (tr.grad_fit) r.fits.push_back({"forward.grad_l2_last_decade", *tr.grad_fit, -t.grad_exponent});
        NormSeries fl2{"forward_l2", 0.0, {}, {}};
        for (const auto& s : tr.samples) fl2.push(s.t, s.l2);
        r.series.push_back(fl2);
    }
    return r;
}

ExperimentReport invariants_report(const RunConfig& config) {
    ExperimentReport r;
    r.title = "invariants";
    echo_config(r, config);
    InvariantOptions opts;
    opts.seed = config.seed;
    opts.pairs = config.pairs;
    for (const auto& s : run_invariant_suites(opts)) {
        if (s.name.rfind("monotonicity", 0) == 0) {
            r.check(s.name, s.measured, Relation::AtLeast, s.threshold);
        } else if (s.name.rfind("remainder", 0) == 0) {
            r.check(s.name, s.measured, Relation::AtMost, s.threshold);
            r.value(s.name + ".detail", s.detail);
        } else {
            r.check(s.name, s.measured, Relation::Below, s.threshold);
        }
    }
    return r;
}

int run_command(const std::string& subcommand, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
    try {
        RunConfig config = load_config(options.config);
        if (options.direction) config.simulate.direction = *options.direction;
        const auto dir = resolve_output_dir(options.out, config) / subcommand;
        const auto start = std::chrono::steady_clock::now();
        ExperimentReport report;
        if (subcommand == "profile-check") {
            report = profile_check_report(config);
        } else if (subcommand == "invariants") {
            report = invariants_report(config);
        } else if (subcommand == "simulate") {
            require_hypotheses(config, options.force);
            report = simulate_report(config, dir);
        } else if (subcommand == "approx-seq") {
            require_hypotheses(config, options.force);
            report = approx_sequence_report(config, options.jobs);
        } else if (subcommand == "rates") {
            require_hypotheses(config, options.force);
            report = rates_report(config, options.jobs);
        } else {
            err << "unknown subcommand '" << subcommand << "'\n";
            return kExitConfigError;
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        report.value("runtime_seconds", std::round(elapsed.count() * 1000.0) / 1000.0);
        const auto written = write_report(report, dir, config.svg);
        render_summary(report, out);
        out << "wrote " << written.front().parent_path().string() << '\n';
        return report.passed() ? kExitPass : kExitCheckFailed;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

}  // namespace blowup
