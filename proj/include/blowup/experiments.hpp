#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/profile.hpp"
#include "blowup/rate_fit.hpp"
#include "blowup/solver.hpp"

namespace blowup {

/// Approximate-solution schedule: u_n starts from U(T_n) at T_n = -1/n and is
/// carried back to the common time t0.
struct SequenceSchedule {
    std::vector<int> n{4, 8, 16, 32, 64};
    double t0 = -0.5;

    static double start_time(int n) { return -1.0 / n; }
    void validate() const;
    bool operator==(const SequenceSchedule&) const = default;
};

struct SequenceOptions {
    /// Window in T_n - t over which the per-n exponent is fitted.
    FitWindow mu_window{1e-3, 1e-1};
    std::size_t checkpoints = 21;
    unsigned jobs = 1;
};

/// Requires at least 16 grid points across the core width (-t)^(1/k_1).
/// Throws ResolutionInsufficient otherwise.
void check_core_resolution(const ProfileSpec& spec, const Grid& grid, double t);

struct SequenceRun {
    int n = 0;
    double start_time = 0.0;
    double initial_error_h1 = 0.0;  // ||eps_n(T_n)||_H1
    double final_error_h1 = 0.0;    // ||eps_n(t0)||_H1
    NormSeries error_h1;            // ||eps_n(t)||_H1 with t_ref = T_n
    RateFit mu;
    ComplexField final_field;       // u_n(t0)
    std::size_t steps = 0;
};

struct SequenceResult {
    SequenceSchedule schedule;
    Grid grid;
    std::vector<SequenceRun> runs;  // ordered as the schedule
    double pooled_mu = 0.0;
    double pooled_stderr = 0.0;

    /// ||eps_n(t0)||_H1 strictly decreasing in n.
    bool final_error_decreasing() const;
    const SequenceRun& run(int n) const;
};

/// Runs the backward equation from U(T_n) to t0 for every scheduled n and
/// records eps_n = u_n - U in H1 at log-spaced checkpoints.
SequenceResult approx_sequence(const BlowupProfile& profile, const Grid& grid,
                               const SequenceSchedule& schedule, const SolverConfig& config,
                               const SequenceOptions& options = {});

struct CauchyPair {
    int n = 0;
    int m = 0;
    double distance = 0.0;  // ||u_n(t0) - u_m(t0)||_H1
    double bound = 0.0;     // ||eps_n(t0)||_H1 + ||eps_m(t0)||_H1
    bool within_bound = false;
};

struct CauchyReport {
    std::vector<CauchyPair> consecutive;
    std::vector<CauchyPair> all_pairs;
    double max_distance = 0.0;

    bool consecutive_decreasing() const;
    bool triangle_holds() const;
};

CauchyReport cauchy_in_n(const SequenceResult& sequence);

struct ExteriorSample {
    double t = 0.0;
    double distance = 0.0;      // ||u(t) - phi^(-1/alpha)||_H1 on the mask
    double full_h1 = 0.0;       // ||u(t)||_H1 on the whole box
};

struct ExteriorSeries {
    double radius = 0.0;
    std::size_t mask_points = 0;
    std::vector<ExteriorSample> samples;  // ordered by time

    bool decreasing() const;
};

/// Snapshot of a run at one time.
struct Snapshot {
    double t = 0.0;
    ComplexField field;
};

/// Masked H1 distance to the limit profile, excluding balls of the given radius
/// around every x_j. The gradient of each snapshot is spectral; that of the
/// limit is closed form. Throws EmptyMask when the mask selects nothing.
ExteriorSeries exterior_convergence(const BlowupProfile& profile,
                                    const std::vector<Snapshot>& snapshots, double radius);

/// Same distance evaluated from the closed-form U and its gradient.
ExteriorSeries exterior_convergence_closed_form(const BlowupProfile& profile, const Grid& grid,
                                                const std::vector<double>& times, double radius);

/// Backward run from U(start) to `end` keeping snapshots at the given times.
std::vector<Snapshot> backward_snapshots(const BlowupProfile& profile, const Grid& grid,
                                         double start, const std::vector<double>& times,
                                         const SolverConfig& config);

/// For every x_j: distance from x_j to the largest |u| within rho of it, and
/// the gap between that local maximum and the global one (relative).
struct PeakLocation {
    std::size_t point = 0;
    double offset = 0.0;
    double relative_gap = 0.0;
};
std::vector<PeakLocation> locate_peaks(const BlowupProfile& profile, const ComplexField& f);

struct ProfileRates {
    NormSeries l2;
    NormSeries grad_l2;
    NormSeries laplacian_l2;
    NormSeries grad_laplacian_l2;
    NormSeries linf;
    RateFit l2_fit;
    RateFit grad_fit;
    RateFit laplacian_fit;
    RateFit grad_laplacian_fit;
    double l2_plateau_spread = 0.0;  // over the last decade of the window
    double grad_plateau_spread = 0.0;
    double l2_plateau = 0.0;         // measured limit of (-t)^e ||U(t)||_2
    double grad_plateau = 0.0;
    RateTargets targets;
};

/// Norms of the closed-form profile on log-spaced times of the window, with fits.
ProfileRates profile_rates(const BlowupProfile& profile, const Grid& grid, const FitWindow& window,
                           std::size_t samples);

struct TrackingSample {
    double t = 0.0;
    double relative_error = 0.0;  // ||u - U||_H1 / ||U||_H1
    double l2 = 0.0;
    double grad_l2 = 0.0;
    double linf = 0.0;
};

struct ForwardTracking {
    double t_start = 0.0;
    double t_stop = 0.0;
    RunStatus status = RunStatus::Completed;
    std::vector<TrackingSample> samples;
    double max_relative_error = 0.0;
    std::optional<RateFit> l2_fit;    // over the last decade before the stop
    std::optional<RateFit> grad_fit;
    RateTargets targets;
    std::size_t steps = 0;
};

/// Forward equation from `start` at t_start towards t = 0 until the sup norm
/// passes the blow-up threshold, compared with U at log-spaced times.
ForwardTracking forward_blowup(const BlowupProfile& profile, const ComplexField& start,
                               double t_start, const SolverConfig& config,
                               std::size_t samples_per_decade = 10);

}  // namespace blowup
