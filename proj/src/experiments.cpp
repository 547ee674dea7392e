#include "blowup/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "blowup/error.hpp"
#include "blowup/format.hpp"
#include "blowup/parallel.hpp"

namespace blowup {

void SequenceSchedule::validate() const {
    if (n.empty()) throw ConfigError("schedule needs at least one n");
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] < 1) throw ConfigError("schedule n must be positive");
        if (i > 0 && n[i] <= n[i - 1]) throw ConfigError("schedule n must be increasing");
        if (!(t0 < start_time(n[i]))) {
            throw ConfigError("schedule t0 = " + format_double(t0) + " must precede T_n = -1/" +
                              std::to_string(n[i]));
        }
    }
}

void check_core_resolution(const ProfileSpec& spec, const Grid& grid, double t) {
    const double width = std::pow(-t, 1.0 / spec.k_min());
    const double per_core = width / grid.spacing();
    if (per_core < 16.0) {
        throw ResolutionInsufficient("grid resolves the core width " + format_double(width) +
                                     " at t = " + format_double(t) + " with " +
                                     format_double(per_core) + " points, at least 16 needed");
    }
}

bool SequenceResult::final_error_decreasing() const {
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (!(runs[i].final_error_h1 < runs[i - 1].final_error_h1)) return false;
    }
    return true;
}

const SequenceRun& SequenceResult::run(int n) const {
    for (const auto& r : runs) {
        if (r.n == n) return r;
    }
    throw std::out_of_range("no run for n = " + std::to_string(n));
}

namespace {

double h1_distance(const ComplexField& a, const ComplexField& b, SpectralWorkspace& ws) {
    return norms(diff(a, b), ws).h1;
}

SequenceRun run_one(const BlowupProfile& profile, const Grid& grid, int n, double t0,
                    const SolverConfig& config, const SequenceOptions& options) {
    SpectralWorkspace ws(grid);
    const ModelParams& params = profile.spec().params;
    SequenceRun run;
    run.n = n;
    run.start_time = SequenceSchedule::start_time(n);
    run.error_h1.name = "eps_h1_n" + std::to_string(n);
    run.error_h1.t_ref = run.start_time;

    ComplexField u = eval_U(profile, run.start_time, grid);
    run.initial_error_h1 = h1_distance(u, eval_U(profile, run.start_time, grid), ws);

    std::vector<double> targets;
    for (double t : log_spaced_times(run.start_time, options.mu_window, options.checkpoints)) {
        if (t > t0) targets.push_back(t);
    }
    std::reverse(targets.begin(), targets.end());  // latest first: the run goes backwards
    targets.push_back(t0);

    double t = run.start_time;
    for (double target : targets) {
        if (target >= t) continue;
        auto res = integrate(params, u, t, target, Direction::Backward, config, ws);
        run.steps += res.steps;
        u = std::move(res.field);
        t = target;
        const double e = h1_distance(u, eval_U(profile, t, grid), ws);
        run.error_h1.push(t, e);
    }
    run.final_error_h1 = run.error_h1.value.back();
    run.final_field = std::move(u);
    // Only the checkpoints inside the window enter the fit.
    FitWindow w = options.mu_window;
    w.s_hi = std::min(w.s_hi, run.start_time - t0);
    run.mu = fit_rate(run.error_h1, w);
    return run;
}

}  // namespace

SequenceResult approx_sequence(const BlowupProfile& profile, const Grid& grid,
                               const SequenceSchedule& schedule, const SolverConfig& config,
                               const SequenceOptions& options) {
    schedule.validate();
    config.validate();
    validate_profile_on_grid(profile, grid, schedule.t0);
    for (int n : schedule.n) check_core_resolution(profile.spec(), grid, SequenceSchedule::start_time(n));

    SequenceResult result;
    result.schedule = schedule;
    result.grid = grid;
    result.runs.resize(schedule.n.size());
    run_jobs(schedule.n.size(), options.jobs, [&](std::size_t i) {
        result.runs[i] = run_one(profile, grid, schedule.n[i], schedule.t0, config, options);
    });

    double wsum = 0.0, mean = 0.0;
    for (const auto& r : result.runs) {
        const double w = 1.0 / std::max(r.mu.stderr_slope * r.mu.stderr_slope, 1e-300);
        wsum += w;
        mean += w * r.mu.slope;
    }
    result.pooled_mu = mean / wsum;
    result.pooled_stderr = 1.0 / std::sqrt(wsum);
    return result;
}

bool CauchyReport::consecutive_decreasing() const {
    for (std::size_t i = 1; i < consecutive.size(); ++i) {
        if (!(consecutive[i].distance < consecutive[i - 1].distance)) return false;
    }
    return true;
}

bool CauchyReport::triangle_holds() const {
    return std::all_of(all_pairs.begin(), all_pairs.end(),
                       [](const CauchyPair& p) { return p.within_bound; });
}

CauchyReport cauchy_in_n(const SequenceResult& sequence) {
    if (sequence.runs.size() < 2) {
        throw InsufficientSamples("Cauchy check needs at least two completed runs");
    }
    SpectralWorkspace ws(sequence.grid);
    CauchyReport rep;
    const auto& runs = sequence.runs;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            CauchyPair p;
            p.n = runs[i].n;
            p.m = runs[j].n;
            p.distance = h1_distance(runs[i].final_field, runs[j].final_field, ws);
            p.bound = runs[i].final_error_h1 + runs[j].final_error_h1;
            // The discrete H1 norm is a norm, so only rounding separates the two sides.
            p.within_bound = p.distance <= p.bound * (1.0 + 1e-12);
            rep.max_distance = std::max(rep.max_distance, p.distance);
            rep.all_pairs.push_back(p);
            if (j == i + 1) rep.consecutive.push_back(p);
        }
    }
    return rep;
}

bool ExteriorSeries::decreasing() const {
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].distance < samples[i - 1].distance)) return false;
    }
    return true;
}

namespace {

std::vector<Coord> centres_of(const ProfileSpec& spec) {
    std::vector<Coord> c;
    for (std::size_t j = 0; j < spec.point_count(); ++j) c.push_back(spec.centre(j));
    return c;
}

struct LimitFields {
    ComplexField value;
    std::vector<ComplexField> grad;
};

// phi^(-1/alpha) and its gradient on the mask; zero elsewhere (never read there).
LimitFields limit_fields(const BlowupProfile& profile, const RegionMask& mask) {
    const Grid& g = mask.grid();
    LimitFields lf{ComplexField(g), {}};
    for (int d = 0; d < g.dim; ++d) lf.grad.emplace_back(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mask.contains(i)) continue;
        const Coord x = g.coordinate(i);
        lf.value[i] = profile.limit_value(x);
        const Coord gr = profile.limit_gradient(x);
        for (int d = 0; d < g.dim; ++d) lf.grad[d][i] = gr[d];
    }
    return lf;
}

double masked_distance(const ComplexField& u, const std::vector<ComplexField>& grad_u,
                       const LimitFields& lf, const RegionMask& mask) {
    std::vector<ComplexField> dg;
    for (std::size_t d = 0; d < grad_u.size(); ++d) dg.push_back(diff(grad_u[d], lf.grad[d]));
    return norms(diff(u, lf.value), dg, &mask).h1;
}

RegionMask exterior_mask(const BlowupProfile& profile, const Grid& grid, double radius) {
    const auto centres = centres_of(profile.spec());
    auto mask = RegionMask::exterior_of_balls(grid, centres, radius);
    if (mask.count() == 0) {
        throw EmptyMask("exterior of balls of radius " + format_double(radius) +
                        " contains no grid point");
    }
    return mask;
}

}  // namespace

ExteriorSeries exterior_convergence(const BlowupProfile& profile,
                                    const std::vector<Snapshot>& snapshots, double radius) {
    if (snapshots.empty()) throw InsufficientSamples("exterior convergence needs a snapshot");
    const Grid& grid = snapshots.front().field.grid;
    const auto mask = exterior_mask(profile, grid, radius);
    const auto lf = limit_fields(profile, mask);
    SpectralWorkspace ws(grid);
    ExteriorSeries out;
    out.radius = radius;
    out.mask_points = mask.count();
    auto ordered = snapshots;
    std::sort(ordered.begin(), ordered.end(),
              [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
    for (const auto& s : ordered) {
        if (!(s.field.grid == grid)) throw ShapeMismatch("snapshots live on different grids");
        const auto g = gradient(s.field, ws);
        out.samples.push_back({s.t, masked_distance(s.field, g, lf, mask), norms(s.field, g).h1});
    }
    return out;
}

ExteriorSeries exterior_convergence_closed_form(const BlowupProfile& profile, const Grid& grid,
                                                const std::vector<double>& times, double radius) {
    const auto mask = exterior_mask(profile, grid, radius);
    const auto lf = limit_fields(profile, mask);
    ExteriorSeries out;
    out.radius = radius;
    out.mask_points = mask.count();
    auto ordered = times;
    std::sort(ordered.begin(), ordered.end());
    for (double t : ordered) {
        const auto pf = eval_U_derivatives(profile, t, grid);
        out.samples.push_back({t, masked_distance(pf.u, pf.grad, lf, mask), norms(pf.u, pf.grad).h1});
    }
    return out;
}

std::vector<Snapshot> backward_snapshots(const BlowupProfile& profile, const Grid& grid,
                                         double start, const std::vector<double>& times,
                                         const SolverConfig& config) {
    SpectralWorkspace ws(grid);
    auto ordered = times;
    std::sort(ordered.rbegin(), ordered.rend());
    std::vector<Snapshot> out;
    ComplexField u = eval_U(profile, start, grid);
    double t = start;
    for (double target : ordered) {
        if (target > start) {
            throw std::invalid_argument("snapshot time " + format_double(target) +
                                        " lies after the start " + format_double(start));
        }
        if (target < t) {
            auto res = integrate(profile.spec().params, u, t, target, Direction::Backward, config, ws);
            u = std::move(res.field);
            t = target;
        }
        out.push_back({t, u});
    }
    return out;
}

std::vector<PeakLocation> locate_peaks(const BlowupProfile& profile, const ComplexField& f) {
    const auto& spec = profile.spec();
    const Grid& g = f.grid;
    const double global = linf_norm(f);
    std::vector<PeakLocation> out;
    for (std::size_t j = 0; j < spec.point_count(); ++j) {
        const Coord c = spec.centre(j);
        double best = -1.0, offset = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Coord x = g.coordinate(i);
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
            if (r2 > spec.rho * spec.rho) continue;
            const double a = std::abs(f[i]);
            if (a > best) {
                best = a;
                offset = std::sqrt(r2);
            }
        }
        out.push_back({j, offset, (global - best) / global});
    }
    return out;
}

ProfileRates profile_rates(const BlowupProfile& profile, const Grid& grid, const FitWindow& window,
                           std::size_t samples) {
    ProfileRates r;
    r.targets = theoretical_exponents(profile.spec());
    r.l2.name = "l2";
    r.grad_l2.name = "grad_l2";
    r.laplacian_l2.name = "laplacian_l2";
    r.grad_laplacian_l2.name = "grad_laplacian_l2";
    r.linf.name = "linf";
    for (double t : log_spaced_times(0.0, window, samples)) {
        const auto pf = eval_U_derivatives(profile, t, grid);
        const Norms n = norms(pf.u, pf.grad);
        double gl2 = 0.0;
        for (const auto& c : pf.grad_laplacian) gl2 += lp_integral(c, 2.0);
        r.l2.push(t, n.l2);
        r.grad_l2.push(t, n.grad_l2);
        r.laplacian_l2.push(t, lp_norm(pf.laplacian, 2.0));
        r.grad_laplacian_l2.push(t, std::sqrt(gl2));
        r.linf.push(t, n.linf);
    }
    r.l2_fit = fit_rate(r.l2, window);
    r.grad_fit = fit_rate(r.grad_l2, window);
    r.laplacian_fit = fit_rate(r.laplacian_l2, window);
    r.grad_laplacian_fit = fit_rate(r.grad_laplacian_l2, window);
    const FitWindow last{window.s_lo, 10.0 * window.s_lo};
    r.l2_plateau_spread = plateau_spread(r.l2, r.targets.l2_exponent, last);
    r.grad_plateau_spread = plateau_spread(r.grad_l2, r.targets.grad_exponent, last);
    const double s_last = -r.l2.t.back();
    r.l2_plateau = std::pow(s_last, r.targets.l2_exponent) * r.l2.value.back();
    r.grad_plateau = std::pow(s_last, r.targets.grad_exponent) * r.grad_l2.value.back();
    return r;
}

ForwardTracking forward_blowup(const BlowupProfile& profile, const ComplexField& start,
                               double t_start, const SolverConfig& config,
                               std::size_t samples_per_decade) {
    if (!(t_start < 0.0)) throw std::invalid_argument("forward tracking needs t_start < 0");
    if (samples_per_decade < 1) throw std::invalid_argument("samples_per_decade must be >= 1");
    const Grid& grid = start.grid;
    const ModelParams& params = profile.spec().params;
    SpectralWorkspace ws(grid);
    ForwardTracking tr;
    tr.t_start = t_start;
    tr.targets = theoretical_exponents(profile.spec());

    auto sample = [&](double t, const ComplexField& u) {
        const auto uu = eval_U(profile, t, grid);
        const Norms nu = norms(u, ws);
        TrackingSample s;
        s.t = t;
        s.relative_error = norms(diff(u, uu), ws).h1 / norms(uu, ws).h1;
        s.l2 = nu.l2;
        s.grad_l2 = nu.grad_l2;
        s.linf = nu.linf;
        tr.samples.push_back(s);
        tr.max_relative_error = std::max(tr.max_relative_error, s.relative_error);
    };

    ComplexField u = start;
    double t = t_start;
    sample(t, u);
    const double ratio = std::pow(10.0, -1.0 / static_cast<double>(samples_per_decade));
    // Below this distance to 0 the step controller could not make progress anyway.
    const double s_floor = std::max(config.dt_min, 1e-14);
    double s = -t_start;
    while (true) {
        s *= ratio;
        const double target = s > s_floor ? -s : 0.0;
        auto res = integrate(params, u, t, target, Direction::Forward, config, ws);
        tr.steps += res.steps;
        u = std::move(res.field);
        t = res.t;
        if (t < 0.0) sample(t, u);
        if (res.status == RunStatus::BlowupDetected || target == 0.0) {
            tr.status = res.status;
            break;
        }
    }
    tr.t_stop = t;

    NormSeries l2{"forward_l2", 0.0, {}, {}};
    NormSeries grad{"forward_grad_l2", 0.0, {}, {}};
    for (const auto& smp : tr.samples) {
        l2.push(smp.t, smp.l2);
        grad.push(smp.t, smp.grad_l2);
    }
    const double s_stop = -tr.samples.back().t;
    if (s_stop > 0.0) {
        const FitWindow last{s_stop, 10.0 * s_stop};
        try {
            tr.l2_fit = fit_rate(l2, last);
            tr.grad_fit = fit_rate(grad, last);
        } catch (const DegenerateWindow&) {
            // Fewer than five samples in the last decade: no fit to report.
        }
    }
    return tr;
}

}  // namespace blowup
