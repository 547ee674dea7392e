#include <cmath>
#include <numbers>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/invariants.hpp"
#include "blowup/profile.hpp"
#include "blowup/solver.hpp"
#include "doctest.h"

using namespace blowup;

namespace {

ComplexField gaussian(const Grid& g, double amplitude = 1.0) {
    return inject(g, [&](const Coord& x) {
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
        return complex(amplitude * std::exp(-0.5 * r2), 0.0);
    });
}

SolverConfig fixed_step(double dt) {
    SolverConfig c;
    c.dt_max = dt;
    c.cfl_amp = 1.0;
    c.dt_min = 1e-12;
    return c;
}

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.dt_min = 2 * c.dt_max;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SolverConfig{};
    c.cfl_amp = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SolverConfig{};
    c.blowup_linf_threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SolverConfig{};
    c.monitor_cadence = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("linear substep") {
    // xi = 2 on a box of length 2 pi.
    const Grid g = Grid::make(1, 2 * std::numbers::pi, 16);
    SpectralWorkspace ws(g);
    auto f = inject(g, [](const Coord& x) { return std::polar(1.0, 2 * x[0]); });
    const auto before = f;
    linear_step(f, 0.5, ws);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(std::abs(f[i] - before[i] * std::polar(1.0, -2.0)) < 1e-13);
    }
    auto same = before;
    linear_step(same, 0.0, ws);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(same[i] == before[i]);

    Rng rng(1);
    const Grid g2 = Grid::make(2, 10.0, 64);
    SpectralWorkspace ws2(g2);
    for (int k = 0; k < 5; ++k) {
        ComplexField r(g2);
        for (auto& z : r.values) z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double l2 = norms(r, ws2).l2;
        linear_step(r, rng.uniform(-1, 1), ws2);
        CHECK(std::abs(norms(r, ws2).l2 - l2) / l2 < 1e-13);
    }
}

TEST_CASE("exact nonlinear substep") {
    const auto p = ModelParams::make(1, 2.0);
    const Grid g = Grid::make(1, 2.0, 8);
    ComplexField f(g, std::vector<complex>(8, complex(1.0, 0.0)));
    f[3] = 0.0;
    f[5] = complex(0.0, 1.0);
    auto fwd = f;
    nonlinear_step_exact(p, fwd, 0.1, Direction::Forward);
    CHECK(fwd[0].real() == doctest::Approx(1.1180340).epsilon(1e-7));
    CHECK(fwd[3] == complex(0.0, 0.0));
    // Phase unchanged.
    CHECK(fwd[5].real() == 0.0);
    CHECK(fwd[5].imag() == doctest::Approx(1.1180340).epsilon(1e-7));
    auto bwd = f;
    nonlinear_step_exact(p, bwd, 0.1, Direction::Backward);
    CHECK(bwd[0].real() == doctest::Approx(0.9128709).epsilon(1e-7));
    CHECK(bwd[3] == complex(0.0, 0.0));

    // alpha dt r^alpha >= 1 crosses the pointwise blow-up time.
    auto big = f;
    CHECK_THROWS_AS(nonlinear_step_exact(p, big, 0.5, Direction::Forward), ForwardStepBlowup);
    CHECK_NOTHROW(nonlinear_step_exact(p, big, 0.5, Direction::Backward));

    const auto p3 = ModelParams::make(1, 3.0);
    auto f3 = f;
    nonlinear_step_exact(p3, f3, 0.05, Direction::Forward);
    CHECK(f3[0].real() == doctest::Approx(std::pow(1.0 - 3.0 * 0.05, -1.0 / 3.0)));
}

TEST_CASE("backward then forward nonlinear substep is the identity") {
    Rng rng(2);
    for (double alpha : {2.0, 2.5, 3.0}) {
        const auto p = ModelParams::make(1, alpha);
        const Grid g = Grid::make(1, 1.0, 256);
        ComplexField f(g);
        for (auto& z : f.values) z = rng.polar_log_uniform(1e-3, 3.0);
        auto h = f;
        const double dt = 0.01;
        nonlinear_step_exact(p, h, dt, Direction::Backward);
        nonlinear_step_exact(p, h, dt, Direction::Forward);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(h[i] - f[i]) <= 1e-12 * std::abs(f[i]));
    }
}

TEST_CASE("integrate bookkeeping") {
    const auto p = ModelParams::make(1, 2.0);
    const Grid g = Grid::make(1, 40.0, 256);
    SpectralWorkspace ws(g);
    const auto f = gaussian(g);
    auto zero = integrate(p, f, -0.3, -0.3, Direction::Backward, fixed_step(1e-3), ws);
    CHECK(zero.steps == 0);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(zero.field[i] == f[i]);
    CHECK(zero.monitor.records.size() == 1);

    CHECK_THROWS_AS(integrate(p, f, 0.0, 0.1, Direction::Backward, fixed_step(1e-3), ws), std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, f, 0.0, -0.1, Direction::Forward, fixed_step(1e-3), ws), std::invalid_argument);

    // 0.0103 is not a multiple of 1e-3: the last step is truncated to land exactly.
    auto res = integrate(p, f, 0.0, -0.0103, Direction::Backward, fixed_step(1e-3), ws);
    CHECK(res.t == -0.0103);
    CHECK(res.steps == 11);
    CHECK(res.monitor.records.back().t == -0.0103);
    for (std::size_t i = 1; i < res.monitor.records.size(); ++i) {
        CHECK(res.monitor.records[i].t < res.monitor.records[i - 1].t);
    }

    auto sparse_cfg = fixed_step(1e-3);
    sparse_cfg.monitor_cadence = 4;
    auto sparse = integrate(p, f, 0.0, -0.0103, Direction::Backward, sparse_cfg, ws);
    // Initial record, steps 4 and 8, and the final step.
    CHECK(sparse.monitor.records.size() == 4);
    CHECK_THROWS_AS(dissipation_residual(sparse.monitor), std::invalid_argument);

    int calls = 0;
    integrate(p, f, 0.0, -0.005, Direction::Backward, fixed_step(1e-3), ws,
              [&](double, const ComplexField&) { ++calls; });
    CHECK(calls == 6);
}

TEST_CASE("forward blow-up detection and step underflow") {
    const auto p = ModelParams::make(1, 2.0);
    const Grid g = Grid::make(1, 2.0, 16);
    SpectralWorkspace ws(g);
    // A constant field follows the ODE exactly and blows up at t = 1/(alpha r^alpha) = 0.5.
    const ComplexField one(g, std::vector<complex>(16, complex(1.0, 0.0)));
    SolverConfig c;
    c.dt_max = 1e-2;
    c.cfl_amp = 0.1;
    c.dt_min = 1e-14;
    c.blowup_linf_threshold = 100.0;
    const auto res = integrate(p, one, 0.0, 1.0, Direction::Forward, c, ws);
    CHECK(res.status == RunStatus::BlowupDetected);
    CHECK(res.t < 0.5);
    CHECK(res.t > 0.49);
    // Along the exact solution (1 - 2t)^(-1/2) the sup norm at the stop is past the threshold.
    CHECK(linf_norm(res.field) > 100.0);
    CHECK(linf_norm(res.field) == doctest::Approx(std::pow(1.0 - 2.0 * res.t, -0.5)).epsilon(1e-9));

    SolverConfig tight;
    tight.dt_max = 1e-2;
    tight.dt_min = 1e-2;
    tight.cfl_amp = 0.1;
    CHECK_THROWS_AS(integrate(p, one, 0.0, 1.0, Direction::Forward, tight, ws), StepUnderflow);
}

TEST_CASE("backward runs are monotone and satisfy the mass identity") {
    const auto p = ModelParams::make(1, 2.0);
    const Grid g = Grid::make(1, 40.0, 1024);
    SpectralWorkspace ws(g);
    const auto res = integrate(p, gaussian(g), 0.0, -0.1, Direction::Backward, fixed_step(1e-4), ws);
    const auto mono = check_monotone(res.monitor, 1e-8);
    CHECK(mono.l2_nonincreasing);
    CHECK(mono.grad_nonincreasing);
    const double r1 = dissipation_residual(res.monitor);
    CHECK(r1 < 1e-3);
    const auto half = integrate(p, gaussian(g), 0.0, -0.1, Direction::Backward, fixed_step(5e-5), ws);
    const double r2 = dissipation_residual(half.monitor);
    CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.1));
    // Gradient law: d/ds ||grad v||^2 <= -int |v|^alpha |grad v|^2 up to O(dt^2).
    CHECK(gradient_law_excess(res.monitor) < 1e-6);

    // The profile at T_n as data.
    const BlowupProfile u(ProfileSpec::power_law(p, 1.0, 12.0));
    const auto prof = integrate(p, eval_U(u, -1.0 / 16, g), -1.0 / 16, -0.2, Direction::Backward,
                                fixed_step(1e-4), ws);
    CHECK(check_monotone(prof.monitor, 1e-8).ok());
}

TEST_CASE("forward runs gain mass at the rate of the identity") {
    const auto p = ModelParams::make(1, 2.0);
    const Grid g = Grid::make(1, 40.0, 512);
    SpectralWorkspace ws(g);
    const auto res = integrate(p, gaussian(g, 0.5), 0.0, 0.05, Direction::Forward, fixed_step(1e-4), ws);
    CHECK(dissipation_residual(res.monitor) < 1e-6);
    for (std::size_t i = 1; i < res.monitor.records.size(); ++i) {
        CHECK(res.monitor.records[i].l2 >= res.monitor.records[i - 1].l2);
    }
}

TEST_CASE("dissipation residual edge cases") {
    const auto p = ModelParams::make(1, 2.0);
    const Grid g = Grid::make(1, 10.0, 64);
    SpectralWorkspace ws(g);
    const auto res = integrate(p, ComplexField(g), 0.0, -0.01, Direction::Backward, fixed_step(1e-3), ws);
    CHECK(dissipation_residual(res.monitor) == 0.0);
    StepMonitor short_run;
    short_run.records.resize(2);
    CHECK_THROWS_AS(dissipation_residual(short_run), InsufficientSamples);
}

TEST_CASE("monitor csv") {
    StepMonitor m;
    m.records.push_back({-0.5, 1.0, 2.0, 3.0, 0.25, 0.125, 1.5});
    std::ostringstream os;
    write_monitor_csv(m, os);
    CHECK(os.str() == "t,l2,h1,linf,lp_alpha2,dissipation\n-0.5,1,2,3,0.25,0.125\n");
}

TEST_CASE("accumulated rounding does not leave a sliver step") {
    const auto p = ModelParams::make(1, 2.0);
    const Grid g = Grid::make(1, 40.0, 256);
    SpectralWorkspace ws(g);
    const double t0 = -1.0 / 16;
    const auto res = integrate(p, gaussian(g), t0, t0 - 0.1, Direction::Backward, fixed_step(5e-5), ws);
    CHECK(res.steps == 2000);
    CHECK(res.dt_smallest >= 5e-5 * (1 - 1e-6));
    CHECK(res.t == t0 - 0.1);
}
