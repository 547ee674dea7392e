#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/model.hpp"

namespace blowup {

/// Forward: t increases under u_t = i Lap u + |u|^alpha u.
/// Backward: t decreases; equivalently the backward equation
/// v_s = -i Lap v - |v|^alpha v runs forward in s = t_from - t.
enum class Direction { Forward, Backward };

const char* to_string(Direction d);

struct SolverConfig {
    double dt_max = 1e-4;
    double cfl_amp = 0.1;  // dt <= cfl_amp * ||u||_inf^-alpha
    double dt_min = 1e-12;
    double blowup_linf_threshold = 1e3;
    int monitor_cadence = 1;

    void validate() const;
    bool operator==(const SolverConfig&) const = default;
};

struct MonitorRecord {
    double t = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
    double linf = 0.0;
    double lp_alpha2 = 0.0;    // ||u||_{alpha+2}^{alpha+2}
    double dissipation = 0.0;  // int |u|^alpha |grad u|^2
    double grad_l2 = 0.0;
};

struct StepMonitor {
    Direction direction = Direction::Forward;
    int cadence = 1;
    std::vector<MonitorRecord> records;
};

/// Multiplies mode xi by exp(-i |xi|^2 dt); dt may have either sign.
void linear_step(ComplexField& f, double dt, SpectralWorkspace& ws);

/// Exact flow of the pointwise ODE u_t = |u|^alpha u over |dt| in the given
/// direction: the modulus maps r -> (r^-alpha -/+ alpha dt)^(-1/alpha), the
/// phase is unchanged. Throws ForwardStepBlowup when a forward step would
/// cross the pointwise blow-up time.
void nonlinear_step_exact(const ModelParams& params, ComplexField& f, double dt,
                          Direction direction);

MonitorRecord measure(const ModelParams& params, double t, const ComplexField& f,
                      SpectralWorkspace& ws);

enum class RunStatus { Completed, BlowupDetected };

struct IntegrationResult {
    ComplexField field;
    double t = 0.0;
    RunStatus status = RunStatus::Completed;
    std::size_t steps = 0;
    double dt_smallest = 0.0;
    StepMonitor monitor;
};

/// Called at every monitor record with the current time and field.
using Observer = std::function<void(double, const ComplexField&)>;

/// Strang splitting (half nonlinear, full linear, half nonlinear) from t_from to
/// t_to with dt = min(dt_max, cfl_amp ||u||_inf^-alpha), truncated to land on t_to.
///
/// Forward runs stop with RunStatus::BlowupDetected once ||u||_inf exceeds the
/// threshold. Throws StepUnderflow when the admissible step falls below dt_min.
IntegrationResult integrate(const ModelParams& params, const ComplexField& initial, double t_from,
                            double t_to, Direction direction, const SolverConfig& config,
                            SpectralWorkspace& ws, const Observer& observer = {});

/// Max over interior records of |d/ds ||v||_2^2 + 2 ||v||_{alpha+2}^{alpha+2}| /
/// max(1, 2 ||v||_{alpha+2}^{alpha+2}), s being the evolution time of the run.
/// Needs a cadence-1 monitor with at least three records.
double dissipation_residual(const StepMonitor& monitor);

/// Max over interior records of (d/ds ||grad v||^2 + int |v|^alpha |grad v|^2) /
/// max(1, int |v|^alpha |grad v|^2). The gradient law makes this <= 0 up to
/// splitting error for backward runs.
double gradient_law_excess(const StepMonitor& monitor);

struct MonotonicityReport {
    bool l2_nonincreasing = true;
    bool grad_nonincreasing = true;
    double worst_l2_increase = 0.0;    // relative
    double worst_grad_increase = 0.0;  // relative
    bool ok() const { return l2_nonincreasing && grad_nonincreasing; }
};

/// Checks ||v||_2 and ||grad v||_2 along the evolution time of the run.
MonotonicityReport check_monotone(const StepMonitor& monitor, double rel_tol);

/// Header `t,l2,h1,linf,lp_alpha2,dissipation`, one row per record.
void write_monitor_csv(const StepMonitor& monitor, std::ostream& os);

}  // namespace blowup
