#include "blowup/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "blowup/error.hpp"
#include "blowup/format.hpp"

namespace blowup {

const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

void SolverConfig::validate() const {
    if (!(dt_min > 0.0) || !(dt_min <= dt_max)) {
        throw ConfigError("solver needs 0 < dt_min <= dt_max");
    }
    if (!(cfl_amp > 0.0 && cfl_amp <= 1.0)) throw ConfigError("solver cfl_amp must lie in (0, 1]");
    if (!(blowup_linf_threshold > 0.0)) {
        throw ConfigError("solver blowup_linf_threshold must be positive");
    }
    if (monitor_cadence < 1) throw ConfigError("solver monitor_cadence must be >= 1");
}

void linear_step(ComplexField& f, double dt, SpectralWorkspace& ws) {
    if (dt == 0.0) return;
    auto& spec = ws.spectrum();
    ws.forward(f.values, spec);
    const auto& k2 = ws.xi_squared();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::polar(1.0, -k2[i] * dt);
    ws.inverse(spec, f.values);
}

void nonlinear_step_exact(const ModelParams& params, ComplexField& f, double dt,
                          Direction direction) {
    const double a = params.alpha;
    const double sign = direction == Direction::Forward ? -1.0 : 1.0;
    if (direction == Direction::Forward) {
        const double sup = linf_norm(f);
        if (a * dt * std::pow(sup, a) >= 1.0) {
            throw ForwardStepBlowup("nonlinear substep of length " + format_double(dt) +
                                        " crosses the pointwise blow-up time",
                                    sup);
        }
    }
    // r (1 -/+ a dt r^a)^(-1/a) equals (r^-a -/+ a dt)^(-1/a) and maps 0 to 0.
    const double c = sign * a * dt;
    if (a == 2.0) {
        for (auto& z : f.values) z /= std::sqrt(1.0 + c * std::norm(z));
        return;
    }
    for (auto& z : f.values) {
        const double r2 = std::norm(z);
        if (r2 == 0.0) continue;
        z *= std::pow(1.0 + c * std::pow(r2, 0.5 * a), -1.0 / a);
    }
}

namespace {

MonitorRecord measure_with(const ModelParams& params, double t, const ComplexField& f,
                           std::vector<ComplexField>& grad, SpectralWorkspace& ws) {
    gradient(f, ws, grad);
    const Norms n = norms(f, grad);
    const double a = params.alpha;
    double diss = 0.0;
    double lp = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r2 = std::norm(f[i]);
        const double ra = a == 2.0 ? r2 : std::pow(r2, 0.5 * a);
        double g2 = 0.0;
        for (const auto& g : grad) g2 += std::norm(g[i]);
        diss += ra * g2;
        lp += ra * r2;
    }
    const double w = f.grid.cell_volume();
    MonitorRecord rec;
    rec.t = t;
    rec.l2 = n.l2;
    rec.h1 = n.h1;
    rec.linf = n.linf;
    rec.grad_l2 = n.grad_l2;
    rec.lp_alpha2 = w * lp;
    rec.dissipation = w * diss;
    return rec;
}

}  // namespace

MonitorRecord measure(const ModelParams& params, double t, const ComplexField& f,
                      SpectralWorkspace& ws) {
    std::vector<ComplexField> grad;
    return measure_with(params, t, f, grad, ws);
}

namespace {

// exp(-i |xi|^2 dt) for the most recent signed step; the adaptive controller
// repeats the same step length for long stretches.
class Propagator {
public:
    void apply(ComplexField& f, double dt, SpectralWorkspace& ws) {
        const auto& k2 = ws.xi_squared();
        if (dt != dt_ || factors_.size() != k2.size()) {
            factors_.resize(k2.size());
            for (std::size_t i = 0; i < k2.size(); ++i) factors_[i] = std::polar(1.0, -k2[i] * dt);
            dt_ = dt;
        }
        auto& spec = ws.spectrum();
        ws.forward(f.values, spec);
        for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= factors_[i];
        ws.inverse(spec, f.values);
    }

private:
    double dt_ = std::numeric_limits<double>::quiet_NaN();
    std::vector<complex> factors_;
};

void strang_step(const ModelParams& params, ComplexField& f, double dt, Direction dir,
                 SpectralWorkspace& ws, Propagator& prop) {
    const double signed_dt = dir == Direction::Forward ? dt : -dt;
    nonlinear_step_exact(params, f, 0.5 * dt, dir);
    prop.apply(f, signed_dt, ws);
    nonlinear_step_exact(params, f, 0.5 * dt, dir);
}

}  // namespace

IntegrationResult integrate(const ModelParams& params, const ComplexField& initial, double t_from,
                            double t_to, Direction direction, const SolverConfig& config,
                            SpectralWorkspace& ws, const Observer& observer) {
    config.validate();
    if (!(initial.grid == ws.grid())) throw ShapeMismatch("workspace grid differs from field grid");
    const bool forward = direction == Direction::Forward;
    if (t_to != t_from && (t_to > t_from) != forward) {
        throw std::invalid_argument(std::string("a ") + to_string(direction) +
                                    " run needs t_to on the " +
                                    (forward ? "future" : "past") + " side of t_from");
    }

    IntegrationResult res;
    res.field = initial;
    res.t = t_from;
    res.monitor.direction = direction;
    res.monitor.cadence = config.monitor_cadence;
    res.dt_smallest = config.dt_max;

    std::vector<ComplexField> grad;
    Propagator prop;
    auto record = [&]() {
        res.monitor.records.push_back(measure_with(params, res.t, res.field, grad, ws));
        if (observer) observer(res.t, res.field);
    };
    record();

    const double a = params.alpha;
    const double sign = forward ? 1.0 : -1.0;
    double remaining = std::abs(t_to - t_from);
    ComplexField saved;
    while (remaining > 0.0) {
        const double sup = linf_norm(res.field);
        if (forward && sup > config.blowup_linf_threshold) {
            res.status = RunStatus::BlowupDetected;
            if (res.monitor.records.back().t != res.t) record();
            return res;
        }
        double dt = config.dt_max;
        if (sup > 0.0) dt = std::min(dt, config.cfl_amp * std::pow(sup, -a));
        bool last = false;
        // Absorb a remainder within rounding of one step so no sliver step follows.
        if (dt * (1.0 + 1e-6) >= remaining) {
            dt = remaining;
            last = true;
        }
        saved = res.field;
        while (true) {
            if (!last && dt < config.dt_min) {
                throw StepUnderflow("time step " + format_double(dt) + " below dt_min at t = " +
                                        format_double(res.t),
                                    res.t);
            }
            try {
                strang_step(params, res.field, dt, direction, ws, prop);
                break;
            } catch (const ForwardStepBlowup&) {
                res.field = saved;
                dt *= 0.5;
                last = false;
            }
        }
        res.dt_smallest = std::min(res.dt_smallest, dt);
        ++res.steps;
        if (last) {
            res.t = t_to;
            remaining = 0.0;
        } else {
            res.t += sign * dt;
            remaining = std::abs(t_to - res.t);
            // Guard against a sliver step caused by rounding of res.t.
            if (remaining <= 1e-14 * std::max(1.0, std::abs(t_to))) {
                res.t = t_to;
                remaining = 0.0;
            }
        }
        if (remaining == 0.0 || res.steps % config.monitor_cadence == 0) record();
    }
    if (forward && linf_norm(res.field) > config.blowup_linf_threshold) {
        res.status = RunStatus::BlowupDetected;
    }
    return res;
}

namespace {

// Second-order derivative on a non-uniform three-point stencil.
double central_derivative(double sm, double s0, double sp, double fm, double f0, double fp) {
    const double hm = s0 - sm;
    const double hp = sp - s0;
    return (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) / (hm * hp * (hm + hp));
}

void require_dense(const StepMonitor& m) {
    if (m.cadence != 1) {
        throw std::invalid_argument("identity checks need a monitor recorded at every step");
    }
    if (m.records.size() < 3) {
        throw InsufficientSamples("identity checks need at least three records, got " +
                                  std::to_string(m.records.size()));
    }
}

// Evolution time of the run: t for forward runs, t_from - t for backward runs.
double evolution_time(const StepMonitor& m, std::size_t i) {
    return m.direction == Direction::Forward ? m.records[i].t : -m.records[i].t;
}

}  // namespace

double dissipation_residual(const StepMonitor& monitor) {
    require_dense(monitor);
    // In the evolution time s, d/ds ||v||^2 = -2 ||v||_{a+2}^{a+2} for backward runs
    // and +2 ||u||_{a+2}^{a+2} for forward runs.
    const double law = monitor.direction == Direction::Forward ? -2.0 : 2.0;
    double worst = 0.0;
    const auto& r = monitor.records;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double d = central_derivative(
            evolution_time(monitor, i - 1), evolution_time(monitor, i), evolution_time(monitor, i + 1),
            r[i - 1].l2 * r[i - 1].l2, r[i].l2 * r[i].l2, r[i + 1].l2 * r[i + 1].l2);
        const double target = law * r[i].lp_alpha2;
        worst = std::max(worst, std::abs(d + target) / std::max(1.0, std::abs(target)));
    }
    return worst;
}

double gradient_law_excess(const StepMonitor& monitor) {
    require_dense(monitor);
    double worst = -std::numeric_limits<double>::infinity();
    const auto& r = monitor.records;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double d = central_derivative(
            evolution_time(monitor, i - 1), evolution_time(monitor, i), evolution_time(monitor, i + 1),
            r[i - 1].grad_l2 * r[i - 1].grad_l2, r[i].grad_l2 * r[i].grad_l2,
            r[i + 1].grad_l2 * r[i + 1].grad_l2);
        worst = std::max(worst, (d + r[i].dissipation) / std::max(1.0, r[i].dissipation));
    }
    return worst;
}

MonotonicityReport check_monotone(const StepMonitor& monitor, double rel_tol) {
    MonotonicityReport rep;
    const auto& r = monitor.records;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double dl2 = (r[i].l2 - r[i - 1].l2) / std::max(r[i - 1].l2, 1e-300);
        const double dg = (r[i].grad_l2 - r[i - 1].grad_l2) / std::max(r[i - 1].grad_l2, 1e-300);
        rep.worst_l2_increase = std::max(rep.worst_l2_increase, dl2);
        rep.worst_grad_increase = std::max(rep.worst_grad_increase, dg);
    }
    rep.l2_nonincreasing = rep.worst_l2_increase <= rel_tol;
    rep.grad_nonincreasing = rep.worst_grad_increase <= rel_tol;
    return rep;
}

void write_monitor_csv(const StepMonitor& monitor, std::ostream& os) {
    os << "t,l2,h1,linf,lp_alpha2,dissipation\n";
    for (const auto& r : monitor.records) {
        os << format_double(r.t) << ',' << format_double(r.l2) << ',' << format_double(r.h1) << ','
           << format_double(r.linf) << ',' << format_double(r.lp_alpha2) << ','
           << format_double(r.dissipation) << '\n';
    }
}

}  // namespace blowup
