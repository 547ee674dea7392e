#include <cmath>
#include <string>

#include "blowup/error.hpp"
#include "blowup/invariants.hpp"
#include "blowup/model.hpp"
#include "doctest.h"

using namespace blowup;

namespace {

std::string message_of(int dim, double alpha) {
    try {
        ModelParams::make(dim, alpha);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("admissible parameters") {
    CHECK_NOTHROW(ModelParams::make(1, 2.0));
    CHECK_NOTHROW(ModelParams::make(2, 7.5));
    CHECK_NOTHROW(ModelParams::make(3, 4.0));
    CHECK_NOTHROW(ModelParams::make(4, 2.0));
    CHECK(message_of(1, 1.5).find("alpha >= 2") != std::string::npos);
    CHECK(message_of(3, 4.5).find("(N-2)*alpha <= 4") != std::string::npos);
    CHECK(message_of(4, 2.5).find("(N-2)*alpha <= 4") != std::string::npos);
    CHECK_FALSE(message_of(5, 2.0).empty());
    CHECK_FALSE(message_of(0, 2.0).empty());
}

TEST_CASE("nonlinearity examples") {
    const auto p2 = ModelParams::make(1, 2.0);
    const auto p3 = ModelParams::make(1, 3.0);
    CHECK(nonlinearity(p2, 0.0) == complex(0.0, 0.0));
    const complex g = nonlinearity(p2, {1.0, 1.0});
    CHECK(g.real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.imag() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(nonlinearity(p3, 2.0).real() == doctest::Approx(16.0).epsilon(1e-15));
}

TEST_CASE("wirtinger examples") {
    const auto p = ModelParams::make(1, 2.0);
    auto w = wirtinger_derivatives(p, 1.0);
    CHECK(w.dz.real() == doctest::Approx(2.0));
    CHECK(w.dzbar.real() == doctest::Approx(1.0));
    w = wirtinger_derivatives(p, 0.0);
    CHECK(std::abs(w.dz) == 0.0);
    CHECK(std::abs(w.dzbar) == 0.0);
    w = wirtinger_derivatives(p, {0.0, 1.0});
    CHECK(w.dz.real() == doctest::Approx(2.0));
    CHECK(std::abs(w.dz.imag()) < 1e-15);
    CHECK(w.dzbar.real() == doctest::Approx(-1.0));
    CHECK(std::abs(w.dzbar.imag()) < 1e-15);
}

TEST_CASE("wirtinger derivatives match a complex finite difference") {
    Rng rng(11);
    for (double alpha : {2.0, 2.5, 3.0, 4.0}) {
        const auto p = ModelParams::make(1, alpha);
        for (int i = 0; i < 2000; ++i) {
            const complex z = rng.polar_log_uniform(0.05, 20.0);
            const complex h = std::polar(1e-6, rng.uniform(0.0, 6.283185307179586));
            // Independent form of g: |z|^alpha z written via exp/log of the modulus.
            auto g = [&](complex x) { return std::exp(alpha * std::log(std::abs(x))) * x; };
            const auto w = wirtinger_derivatives(p, z);
            const complex lin = w.dz * h + w.dzbar * std::conj(h);
            const double scale = (std::abs(w.dz) + std::abs(w.dzbar)) * std::abs(h);
            CHECK(std::abs(g(z + h) - g(z) - lin) / scale < 1e-4);
        }
    }
}

TEST_CASE("monotonicity gap examples") {
    const auto p = ModelParams::make(1, 2.0);
    CHECK(monotonicity_gap(p, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(monotonicity_gap(p, 2.0, 1.0) == doctest::Approx(7.0));
    CHECK(monotonicity_gap(p, 1.0, {0.0, 1.0}) == doctest::Approx(2.0));
}

TEST_CASE("monotonicity gap is nonnegative on 1e5 pairs per alpha") {
    for (double alpha : {2.0, 2.5, 3.0}) {
        const auto p = ModelParams::make(1, alpha);
        Rng rng(20240 + static_cast<std::uint64_t>(alpha * 10));
        double worst = 1.0;
        for (int i = 0; i < 100000; ++i) {
            const complex z1 = std::polar(10.0 * std::sqrt(rng.uniform()), rng.uniform(0.0, 6.3));
            const complex z2 = std::polar(10.0 * std::sqrt(rng.uniform()), rng.uniform(0.0, 6.3));
            worst = std::min(worst, monotonicity_gap(p, z1, z2));
        }
        CHECK(worst >= -1e-12);
    }
}

TEST_CASE("remainder bounds hold with a stable calibrated constant") {
    for (double alpha : {2.0, 2.5, 3.0}) {
        const auto p = ModelParams::make(1, alpha);
        for (bool conj : {false, true}) {
            const double ca = remainder_constant(p, conj, 1, 100000);
            const double cb = remainder_constant(p, conj, 2, 100000);
            CHECK(std::isfinite(ca));
            CHECK(ca > 0.0);
            CHECK(cb <= 1.1 * ca);
            CHECK(ca <= 1.1 * cb);
        }
    }
}
