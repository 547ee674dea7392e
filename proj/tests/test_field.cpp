#include <cmath>
#include <numbers>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/field.hpp"
#include "blowup/invariants.hpp"
#include "doctest.h"

using namespace blowup;
using std::numbers::pi;

namespace {

double max_error(const ComplexField& a, const ComplexField& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

ComplexField plane_wave(const Grid& g, int m0, int m1 = 0) {
    return inject(g, [&](const Coord& x) { return std::polar(1.0, m0 * x[0] + m1 * x[1]); });
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_NOTHROW(Grid::make(1, 40.0, 8));
    CHECK_THROWS_AS(Grid::make(1, 40.0, 4), ConfigError);
    CHECK_THROWS_AS(Grid::make(1, 40.0, 100), ConfigError);
    CHECK_THROWS_AS(Grid::make(1, 0.0, 64), ConfigError);
    CHECK_THROWS_AS(Grid::make(4, 1.0, 8), ConfigError);
    const Grid g = Grid::make(2, 4.0, 8);
    CHECK(g.size() == 64);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.cell_volume() == doctest::Approx(0.25));
    // Origin is a grid point, axis 0 varies slowest.
    CHECK(g.coordinate(4 * 8 + 4)[0] == 0.0);
    CHECK(g.coordinate(4 * 8 + 4)[1] == 0.0);
    CHECK(g.coordinate(1)[1] == doctest::Approx(-1.5));
    CHECK(g.coordinate(8)[0] == doctest::Approx(-1.5));
}

TEST_CASE("laplacian of eigenfunctions") {
    const Grid g1 = Grid::make(1, 2 * pi, 32);
    SpectralWorkspace ws1(g1);
    const auto f = plane_wave(g1, 3);
    auto expect = f;
    for (auto& z : expect.values) z *= -9.0;
    CHECK(max_error(laplacian(f, ws1), expect) < 1e-12);

    const auto c = inject(g1, [](const Coord&) { return complex(2.5, -1.0); });
    CHECK(linf_norm(laplacian(c, ws1)) < 1e-13);

    const Grid g2 = Grid::make(2, 2 * pi, 16);
    SpectralWorkspace ws2(g2);
    const auto f2 = plane_wave(g2, 2, 1);
    auto expect2 = f2;
    for (auto& z : expect2.values) z *= -5.0;
    CHECK(max_error(laplacian(f2, ws2), expect2) < 1e-12);
}

TEST_CASE("gradient of a band-limited field") {
    const Grid g = Grid::make(2, 2 * pi, 16);
    SpectralWorkspace ws(g);
    const auto f = inject(g, [](const Coord& x) { return complex(std::sin(2 * x[0]) * std::cos(x[1]), 0); });
    const auto grad = gradient(f, ws);
    const auto dx = inject(g, [](const Coord& x) { return complex(2 * std::cos(2 * x[0]) * std::cos(x[1]), 0); });
    const auto dy = inject(g, [](const Coord& x) { return complex(-std::sin(2 * x[0]) * std::sin(x[1]), 0); });
    CHECK(max_error(grad[0], dx) < 1e-12);
    CHECK(max_error(grad[1], dy) < 1e-12);
}

TEST_CASE("norm examples") {
    const Grid g = Grid::make(1, 2 * pi, 64);
    SpectralWorkspace ws(g);
    const auto c = inject(g, [](const Coord&) { return complex(2.0, 0.0); });
    CHECK(norms(c, ws).l2 == doctest::Approx(2.0 * std::sqrt(2 * pi)).epsilon(1e-14));
    CHECK(norms(c, ws).linf == doctest::Approx(2.0));

    const auto w = plane_wave(g, 3);
    const double h1 = norms(w, ws).h1;
    CHECK(h1 == doctest::Approx(7.9266546).epsilon(1e-8));
    CHECK(h1 * h1 == doctest::Approx(10.0 * 2 * pi).epsilon(1e-13));

    const Grid gg = Grid::make(1, 40.0, 1024);
    SpectralWorkspace wg(gg);
    const auto gauss = inject(gg, [](const Coord& x) { return complex(std::exp(-0.5 * x[0] * x[0]), 0); });
    // int e^{-x^2} dx = sqrt(pi)
    CHECK(std::abs(norms(gauss, wg).l2 - std::pow(pi, 0.25)) < 1e-12);
}

TEST_CASE("lebesgue norms") {
    const Grid g = Grid::make(1, 2 * pi, 64);
    const auto c = inject(g, [](const Coord&) { return complex(0.0, 3.0); });
    CHECK(lp_norm(c, 4.0) == doctest::Approx(3.0 * std::pow(2 * pi, 0.25)));
    CHECK(lp_integral(c, 2.5) == doctest::Approx(std::pow(3.0, 2.5) * 2 * pi));
    CHECK(lp_norm(c, 1.0) == doctest::Approx(3.0 * 2 * pi));
    CHECK_THROWS_AS(lp_norm(c, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(lp_integral(c, 0.0), std::invalid_argument);
}

TEST_CASE("inject and diff") {
    const Grid g = Grid::make(1, 2 * pi, 32);
    SpectralWorkspace ws(g);
    const auto f = plane_wave(g, 3);
    CHECK(norms(diff(f, f), ws).l2 == 0.0);
    CHECK(norms(f, ws).h1 == doctest::Approx(7.9266546).epsilon(1e-8));
    const auto y = axpy(2.0, f, f);
    CHECK(max_error(y, inject(g, [](const Coord& x) { return 3.0 * std::polar(1.0, 3 * x[0]); })) < 1e-14);
    const Grid other = Grid::make(1, 2 * pi, 64);
    CHECK_THROWS_AS(diff(f, ComplexField(other)), ShapeMismatch);
    CHECK_THROWS_AS(ComplexField(g, std::vector<complex>(5)), ShapeMismatch);
}

TEST_CASE("parseval holds for random fields") {
    Rng rng(5);
    for (int dim : {1, 2, 3}) {
        const Grid g = Grid::make(dim, 3.0, dim == 3 ? 16 : 64);
        SpectralWorkspace ws(g);
        for (int k = 0; k < 5; ++k) {
            ComplexField f(g);
            for (auto& z : f.values) z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            const double a = norms(f, ws).l2;
            CHECK(std::abs(spectral_l2(f, ws) - a) / a < 1e-12);
        }
    }
}

TEST_CASE("masked norms") {
    const Grid g = Grid::make(2, 8.0, 32);
    SpectralWorkspace ws(g);
    Rng rng(3);
    const auto f = random_band_limited(g, 3, rng);
    const auto full = RegionMask::full(g);
    const auto a = norms(f, ws);
    const auto b = norms(f, ws, &full);
    CHECK(a.l2 == b.l2);
    CHECK(a.h1 == b.h1);
    CHECK(a.linf == b.linf);

    const std::vector<Coord> centres{Coord{1.0, 0.0}, Coord{-1.0, 0.0}};
    const auto ext = RegionMask::exterior_of_balls(g, centres, 0.5);
    CHECK(ext.count() < g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Coord x = g.coordinate(i);
        const bool out = std::hypot(x[0] - 1, x[1]) > 0.5 && std::hypot(x[0] + 1, x[1]) > 0.5;
        CHECK(ext.contains(i) == out);
    }
    CHECK(norms(f, ws, &ext).l2 < a.l2);
    const auto none = RegionMask::exterior_of_balls(g, centres, 100.0);
    CHECK(none.count() == 0);
    const auto ring = RegionMask::bounded_exterior(g, centres, 0.5, 3.0);
    CHECK(ring.count() < ext.count());
}

TEST_CASE("gagliardo-nirenberg ratio is amplitude invariant") {
    Rng rng(9);
    for (int dim : {1, 2}) {
        const Grid g = Grid::make(dim, 2 * pi, dim == 1 ? 64 : 32);
        SpectralWorkspace ws(g);
        const auto e = random_band_limited(g, 3, rng);
        for (double alpha : {2.0, 2.5, 3.0}) {
            for (auto v : {GnVariant::LAlpha, GnVariant::L2AlphaMinus2}) {
                const double base = gn_ratio(e, ws, alpha, v);
                for (double lambda : {1e-4, 0.3, 17.0, 1e4}) {
                    ComplexField s = e;
                    for (auto& z : s.values) z *= lambda;
                    CHECK(std::abs(gn_ratio(s, ws, alpha, v) - base) / base < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("csv snapshot") {
    const Grid g = Grid::make(1, 2.0, 8);
    const auto f = inject(g, [](const Coord& x) { return complex(x[0], -1.0); });
    std::ostringstream os;
    write_csv(f, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,re,im,abs");
    std::getline(in, line);
    CHECK(line == "-1,-1,-1,1.4142135623730951");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 8);
}

TEST_CASE("boundary magnitude") {
    const Grid g = Grid::make(2, 4.0, 16);
    const auto f = inject(g, [](const Coord& x) { return complex(std::abs(x[0]) + std::abs(x[1]), 0); });
    // Faces at -2 on each axis; the farthest face point is (-2, -2).
    CHECK(boundary_magnitude(f) == doctest::Approx(4.0));
}
