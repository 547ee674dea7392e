#include <cmath>
#include <string>

#include "blowup/error.hpp"
#include "blowup/invariants.hpp"
#include "blowup/profile.hpp"
#include "doctest.h"

using namespace blowup;

namespace {

ProfileSpec single(int dim = 1, double k = 12.0, double amplitude = 1.0) {
    return ProfileSpec::power_law(ModelParams::make(dim, 2.0), amplitude, k);
}

ProfileSpec pair_1d(double separation = 2.0) {
    return ProfileSpec::multi_point(ModelParams::make(1, 2.0),
                                    {Coord{-0.5 * separation}, Coord{0.5 * separation}}, {12.0, 12.0});
}

std::string first_failure(const ProfileSpec& s) {
    const auto rep = check_hypotheses(s);
    const auto* f = rep.first_failure();
    return f ? f->label + " | " + f->detail : "";
}

Coord shifted(Coord x, int axis, double h) {
    x[axis] += h;
    return x;
}

}  // namespace

TEST_CASE("phi examples") {
    const auto phi = build_phi(single());
    CHECK(phi.value(Coord{0.0}) == 0.0);
    CHECK(phi.value(Coord{1.0}) == doctest::Approx(1.0));
    CHECK(phi.jet(Coord{1.0}).d1[0] == doctest::Approx(12.0));
    CHECK(build_phi(pair_1d()).value(Coord{0.0}) == doctest::Approx(1.0));
    // Away from the centres phi is positive; it vanishes at each centre.
    const auto two = build_phi(pair_1d());
    CHECK(two.value(Coord{-1.0}) == 0.0);
    CHECK(two.value(Coord{1.0}) == 0.0);
    CHECK(two.value(Coord{0.3}) > 0.0);
}

TEST_CASE("phi jet matches finite differences") {
    const auto spec = ProfileSpec::multi_point(ModelParams::make(2, 2.0),
                                               {Coord{-1.0, 0.0}, Coord{1.0, 0.5}}, {11.5, 13.0}, 0.7);
    const auto phi = build_phi(spec);
    Rng rng(4);
    const double h = 1e-5;
    for (int i = 0; i < 50; ++i) {
        const Coord x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const auto j = phi.jet(x);
        for (int a = 0; a < 2; ++a) {
            const double fd = (phi.value(shifted(x, a, h)) - phi.value(shifted(x, a, -h))) / (2 * h);
            CHECK(std::abs(fd - j.d1[a]) <= 1e-6 * std::max(1.0, std::abs(j.d1[a])));
            for (int b = 0; b < 2; ++b) {
                const double fd2 =
                    (phi.jet(shifted(x, b, h)).d1[a] - phi.jet(shifted(x, b, -h)).d1[a]) / (2 * h);
                CHECK(std::abs(fd2 - j.d2[a][b]) <= 1e-6 * std::max(1.0, std::abs(j.d2[a][b])));
                for (int c = 0; c < 2; ++c) {
                    const double fd3 =
                        (phi.jet(shifted(x, c, h)).d2[a][b] - phi.jet(shifted(x, c, -h)).d2[a][b]) / (2 * h);
                    CHECK(std::abs(fd3 - j.d3[a][b][c]) <= 1e-6 * std::max(1.0, std::abs(j.d3[a][b][c])));
                }
            }
        }
    }
}

TEST_CASE("structural hypotheses") {
    CHECK(first_failure(single(1, 8.0)).find("k_1 > 10") != std::string::npos);
    CHECK(first_failure(single(1, 12.0, -1.0)).find("A > 0") != std::string::npos);
    // rho set explicitly to the full separation: |x_1 - x_2| = rho < 2 rho.
    const auto close = ProfileSpec::multi_point(ModelParams::make(1, 2.0), {Coord{-1.0}, Coord{1.0}},
                                                {12.0, 12.0}, 1.0, 2.0);
    CHECK(first_failure(close).find("|x_j - x_l| >= 2*rho") != std::string::npos);
    const auto unordered = ProfileSpec::multi_point(ModelParams::make(1, 2.0), {Coord{-1.0}, Coord{1.0}},
                                                    {13.0, 12.0});
    CHECK_FALSE(first_failure(unordered).empty());
    // N = 3, alpha = 4: k_J must exceed 6; k = 11 passes, and 10.5 fails k_1 > 10 first.
    CHECK(first_failure(ProfileSpec::power_law(ModelParams::make(3, 4.0), 1.0, 11.0)).empty());
    CHECK_THROWS_AS(build_phi(single(1, 8.0)), HypothesisError);
    try {
        build_phi(single(1, 8.0));
    } catch (const HypothesisError& e) {
        CHECK(std::string(e.what()).find("k_1 > 10") != std::string::npos);
    }
}

TEST_CASE("numerical hypothesis checks and local coefficients") {
    const auto rep = check_hypotheses(single());
    CHECK(rep.passed());
    REQUIRE(rep.local.size() == 1);
    CHECK(rep.local[0].eta0 == doctest::Approx(1.0).epsilon(1e-9));

    const auto two = check_hypotheses(pair_1d());
    CHECK(two.passed());
    REQUIRE(two.local.size() == 2);
    // eta_{j,0} = c * prod_{l != j} |x_j - x_l|^{k_l} = 2^12
    CHECK(two.local[0].eta0 == doctest::Approx(4096.0).epsilon(1e-2));
    CHECK(two.local[1].eta0 == doctest::Approx(4096.0).epsilon(1e-2));

    const auto planar = check_hypotheses(ProfileSpec::multi_point(
        ModelParams::make(2, 2.0), {Coord{-1.0, 0.0}, Coord{1.0, 0.0}, Coord{0.0, 2.0}}, {11.0, 12.0, 12.0}));
    CHECK(planar.passed());
}

TEST_CASE("profile values") {
    const BlowupProfile u(single());
    CHECK(u.value(-1.0, Coord{0.0}) == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(u.value(-0.25, Coord{1.0}) == doctest::Approx(0.8164966).epsilon(1e-7));
    CHECK(u.value(-1e-6, Coord{1.0}) == doctest::Approx(0.999999).epsilon(1e-6));
    CHECK(u.limit_value(Coord{1.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(u.value(0.0, Coord{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(u.derivatives(0.5, Coord{0.0}), std::invalid_argument);
    const Grid g = Grid::make(1, 40.0, 256);
    CHECK_THROWS_AS(eval_U(u, 0.0, g), std::invalid_argument);
}

TEST_CASE("profile derivative examples") {
    const BlowupProfile u(single());
    const auto d = u.derivatives(-1.0, Coord{1.0});
    CHECK(d.grad[0] == doctest::Approx(-1.1547005).epsilon(1e-7));
    CHECK(u.derivatives(-0.3, Coord{0.0}).grad[0] == 0.0);

    const Grid g = Grid::make(1, 40.0, 512);
    for (double t : {-1.0, -0.01}) {
        const auto f = eval_U_derivatives(u, t, g);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double v = f.u[i].real();
            worst = std::max(worst, std::abs(f.dt_u[i].real() - v * v * v));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("closed-form derivatives agree with finite differences") {
    const double h = 1e-5;
    auto run = [&](const ProfileSpec& spec, double t_lo, std::uint64_t seed) {
        const BlowupProfile u(spec);
        const int n = spec.params.dim;
        Rng rng(seed);
        const double k1 = spec.k_min();
        double worst_grad = 0.0, worst_lap = 0.0, worst_glap = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double t = -std::exp(rng.uniform(std::log(-t_lo), 0.0));
            const double keep_out = 0.5 * std::pow(-t, 1.0 / k1);
            Coord x{};
            bool ok = false;
            while (!ok) {
                for (int a = 0; a < n; ++a) x[a] = rng.uniform(-3.0, 3.0);
                ok = true;
                for (std::size_t j = 0; j < spec.point_count(); ++j) {
                    double r2 = 0.0;
                    for (int a = 0; a < n; ++a) r2 += std::pow(x[a] - spec.centre(j)[a], 2);
                    if (std::sqrt(r2) < keep_out) ok = false;
                }
            }
            const auto d = u.derivatives(t, x);
            double lap_fd = 0.0;
            Coord glap_fd{};
            for (int a = 0; a < n; ++a) {
                const double g_fd = (u.value(t, shifted(x, a, h)) - u.value(t, shifted(x, a, -h))) / (2 * h);
                worst_grad = std::max(worst_grad, std::abs(g_fd - d.grad[a]) /
                                                      std::max(std::abs(d.grad[a]), 1e-300));
                lap_fd += (u.derivatives(t, shifted(x, a, h)).grad[a] -
                           u.derivatives(t, shifted(x, a, -h)).grad[a]) / (2 * h);
                glap_fd[a] = (u.derivatives(t, shifted(x, a, h)).laplacian -
                              u.derivatives(t, shifted(x, a, -h)).laplacian) / (2 * h);
            }
            worst_lap = std::max(worst_lap, std::abs(lap_fd - d.laplacian) /
                                                std::max(std::abs(d.laplacian), d.laplacian_scale));
            double diff2 = 0.0, norm2 = 0.0;
            for (int a = 0; a < n; ++a) {
                diff2 += std::pow(glap_fd[a] - d.grad_laplacian[a], 2);
                norm2 += d.grad_laplacian[a] * d.grad_laplacian[a];
            }
            worst_glap = std::max(worst_glap, std::sqrt(diff2) /
                                                  std::max(std::sqrt(norm2), d.grad_laplacian_scale));
        }
        CHECK(worst_grad < 1e-6);
        CHECK(worst_lap < 1e-6);
        CHECK(worst_glap < 1e-6);
    };
    run(single(), -1e-3, 1);
    run(pair_1d(), -1e-3, 2);
    run(ProfileSpec::multi_point(ModelParams::make(2, 2.0), {Coord{-1.0, 0.0}, Coord{1.0, 0.5}},
                                 {11.5, 13.0}, 0.7),
        -1e-2, 3);
    run(ProfileSpec::power_law(ModelParams::make(3, 3.0), 2.0, 10.5), -1e-2, 4);
}

TEST_CASE("sup norm is attained at the blow-up points") {
    const Grid g = Grid::make(1, 16.0, 1024);
    const BlowupProfile u(pair_1d());
    for (double t : {-1e-1, -1e-3}) {
        const auto f = eval_U(u, t, g);
        const double expect = std::pow(-2.0 * t, -0.5);
        CHECK(linf_norm(f) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("power-law profile is self-similar") {
    const BlowupProfile u(single(1, 12.5, 1.7));
    const double a = 2.0;
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const double t = -std::exp(rng.uniform(std::log(1e-6), std::log(10.0)));
        const double x = rng.uniform(-5.0, 5.0);
        const double y = std::pow(-t, -1.0 / 12.5) * x;
        const double f = std::pow(a + 1.7 * std::pow(std::abs(y), 12.5), -1.0 / a);
        const double expect = std::pow(-t, -1.0 / a) * f;
        CHECK(std::abs(u.value(t, Coord{x}) - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("rate targets") {
    auto t = theoretical_exponents(single());
    CHECK(t.l2_exponent == doctest::Approx(11.0 / 24.0));
    CHECK(t.grad_exponent == doctest::Approx(13.0 / 24.0));
    CHECK(t.laplacian_bound_exponent == doctest::Approx(0.625));
    CHECK(t.grad_laplacian_bound_exponent == doctest::Approx(0.5 + 5.0 / 24.0));
    CHECK(t.linf_exponent == doctest::Approx(0.5));
    t = theoretical_exponents(single(2));
    CHECK(t.theta == doctest::Approx(0.0));
    CHECK(t.l2_exponent == doctest::Approx(0.5 - 1.0 / 12.0));
    t = theoretical_exponents(single(3));
    CHECK(t.theta == doctest::Approx(-1.0 / 24.0));
    CHECK(t.grad_exponent == doctest::Approx(11.0 / 24.0));
    t = theoretical_exponents(single(4));
    CHECK(t.theta == doctest::Approx(-2.0 / 24.0));
    CHECK(t.l2_exponent == doctest::Approx(0.5 - 4.0 / 24.0));
    // theta uses k_J for N <= 2 and k_1 for N >= 3
    const auto mixed2 = ProfileSpec::multi_point(ModelParams::make(1, 2.0), {Coord{-1.0}, Coord{1.0}},
                                                 {11.0, 14.0});
    CHECK(theoretical_exponents(mixed2).theta == doctest::Approx(1.0 / 28.0));
    const auto mixed3 = ProfileSpec::multi_point(ModelParams::make(3, 2.0),
                                                 {Coord{-1.0, 0, 0}, Coord{1.0, 0, 0}}, {11.0, 14.0});
    CHECK(theoretical_exponents(mixed3).theta == doctest::Approx(-1.0 / 22.0));
    CHECK(theoretical_exponents(mixed3).l2_exponent == doctest::Approx(0.5 - 3.0 / 28.0));
}

TEST_CASE("grid placement validation") {
    const BlowupProfile u(pair_1d(6.0));
    CHECK_THROWS_AS(validate_profile_on_grid(u, Grid::make(1, 10.0, 256), -0.1), ConfigError);
    CHECK_THROWS_AS(validate_profile_on_grid(u, Grid::make(2, 40.0, 16), -0.1), ConfigError);
    const double edge = validate_profile_on_grid(BlowupProfile(single()), Grid::make(1, 40.0, 1024), -0.5);
    // Faces at -L/2 and L/2 - h; the latter is closer to the peak.
    const double x_face = 20.0 - 40.0 / 1024;
    CHECK(edge == doctest::Approx(std::pow(1.0 + std::pow(x_face, 12.0), -0.5)).epsilon(1e-12));
}
