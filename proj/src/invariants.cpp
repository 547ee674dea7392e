#include "blowup/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "blowup/format.hpp"

namespace blowup {

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

complex Rng::polar_log_uniform(double r_lo, double r_hi) {
    const double r = std::exp(uniform(std::log(r_lo), std::log(r_hi)));
    return std::polar(r, uniform(0.0, 2.0 * std::numbers::pi));
}

namespace {

std::string alpha_tag(const ModelParams& p) { return "alpha=" + format_double(p.alpha); }

complex uniform_disc(Rng& rng, double radius) {
    const double r = radius * std::sqrt(rng.uniform());
    return std::polar(r, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

}  // namespace

SuiteResult monotonicity_suite(const ModelParams& params, std::uint64_t seed, std::size_t pairs) {
    Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs; ++i) {
        const complex z1 = uniform_disc(rng, 10.0);
        // Every fourth pair is a near neighbour, where the gap is smallest.
        const complex z2 = (i % 4 == 3) ? z1 + uniform_disc(rng, 1e-3) : uniform_disc(rng, 10.0);
        worst = std::min(worst, monotonicity_gap(params, z1, z2));
    }
    SuiteResult r;
    r.name = "monotonicity_gap " + alpha_tag(params);
    r.measured = worst;
    r.threshold = -1e-12;
    r.samples = pairs;
    r.passed = worst >= r.threshold;
    r.detail = "min gap over |z| <= 10";
    return r;
}

double remainder_constant(const ModelParams& params, bool conjugate, std::uint64_t seed,
                          std::size_t pairs) {
    Rng rng(seed);
    const double a = params.alpha;
    auto part = [&](complex z) {
        const auto w = wirtinger_derivatives(params, z);
        return conjugate ? w.dzbar : w.dz;
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        // Both sides are homogeneous of degree alpha, so magnitudes spanning six
        // decades cover every ratio |v|/|u| that matters.
        const complex u = rng.polar_log_uniform(1e-3, 1e3);
        const complex v = rng.polar_log_uniform(1e-3, 1e3);
        const double lhs = std::abs(part(u + v) - part(u) - part(v));
        const double ru = std::abs(u), rv = std::abs(v);
        const double rhs = std::pow(ru, a - 1.0) * rv + std::pow(rv, a - 1.0) * ru;
        worst = std::max(worst, lhs / rhs);
    }
    return worst;
}

SuiteResult remainder_suite(const ModelParams& params, bool conjugate, std::uint64_t seed_a,
                            std::uint64_t seed_b, std::size_t pairs) {
    const double ca = remainder_constant(params, conjugate, seed_a, pairs);
    const double cb = remainder_constant(params, conjugate, seed_b, pairs);
    SuiteResult r;
    r.name = std::string(conjugate ? "remainder_dzbar " : "remainder_dz ") + alpha_tag(params);
    r.measured = cb;
    r.threshold = 1.1 * ca;
    r.samples = 2 * pairs;
    r.passed = std::isfinite(ca) && cb <= r.threshold;
    r.detail = "calibrated C = " + format_double(ca) + ", check corpus max = " + format_double(cb);
    return r;
}

ComplexField random_band_limited(const Grid& grid, int max_mode, Rng& rng) {
    ComplexField f(grid);
    const double kx = 2.0 * std::numbers::pi / grid.length;
    struct Mode {
        std::array<int, 3> m;
        complex c;
    };
    std::vector<Mode> modes;
    const int span = 2 * max_mode + 1;
    int total = 1;
    for (int d = 0; d < grid.dim; ++d) total *= span;
    for (int idx = 0; idx < total; ++idx) {
        Mode mode{{0, 0, 0}, {}};
        int rest = idx;
        for (int d = 0; d < grid.dim; ++d) {
            mode.m[d] = rest % span - max_mode;
            rest /= span;
        }
        mode.c = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        modes.push_back(mode);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Coord x = grid.coordinate(i);
        complex v = 0.0;
        for (const auto& mode : modes) {
            double phase = 0.0;
            for (int d = 0; d < grid.dim; ++d) phase += kx * mode.m[d] * x[d];
            v += mode.c * std::polar(1.0, phase);
        }
        f[i] = v;
    }
    return f;
}

SuiteResult gn_scaling_suite(const Grid& grid, double alpha, GnVariant variant, std::uint64_t seed,
                             std::size_t fields) {
    Rng rng(seed);
    SpectralWorkspace ws(grid);
    const double lambdas[] = {1e-3, 0.1, 7.5, 1e3};
    double worst = 0.0;
    for (std::size_t k = 0; k < fields; ++k) {
        const auto e = random_band_limited(grid, 3, rng);
        const double base = gn_ratio(e, ws, alpha, variant);
        for (double lambda : lambdas) {
            ComplexField scaled = e;
            for (auto& z : scaled.values) z *= lambda;
            const double r = gn_ratio(scaled, ws, alpha, variant);
            worst = std::max(worst, std::abs(r - base) / base);
        }
    }
    SuiteResult r;
    r.name = std::string(variant == GnVariant::LAlpha ? "gn_scaling_l_alpha" : "gn_scaling_l_2alpha-2") +
             " N=" + std::to_string(grid.dim) + " alpha=" + format_double(alpha);
    r.measured = worst;
    r.threshold = 1e-10;
    r.samples = fields;
    r.passed = worst < r.threshold;
    r.detail = "max relative change of RHS/LHS over lambda";
    return r;
}

SuiteResult wirtinger_suite(const ModelParams& params, std::uint64_t seed, std::size_t samples) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const complex z = rng.polar_log_uniform(0.1, 10.0);
        const complex h = std::polar(1e-6, rng.uniform(0.0, 2.0 * std::numbers::pi));
        const auto w = wirtinger_derivatives(params, z);
        const complex predicted = w.dz * h + w.dzbar * std::conj(h);
        const complex actual = nonlinearity(params, z + h) - nonlinearity(params, z);
        const double scale = (std::abs(w.dz) + std::abs(w.dzbar)) * std::abs(h);
        worst = std::max(worst, std::abs(actual - predicted) / scale);
    }
    SuiteResult r;
    r.name = "wirtinger_fd " + alpha_tag(params);
    r.measured = worst;
    r.threshold = 1e-4;
    r.samples = samples;
    r.passed = worst < r.threshold;
    r.detail = "|h| = 1e-6, 0.1 <= |z| <= 10";
    return r;
}

std::vector<SuiteResult> run_invariant_suites(const InvariantOptions& options) {
    std::vector<SuiteResult> out;
    const std::uint64_t seed_b = options.seed ^ 0x5bd1e995ULL;
    for (double alpha : options.alphas) {
        const auto p = ModelParams::make(1, alpha);
        out.push_back(monotonicity_suite(p, options.seed, options.pairs));
        out.push_back(remainder_suite(p, false, options.seed, seed_b, options.pairs));
        out.push_back(remainder_suite(p, true, options.seed, seed_b, options.pairs));
        out.push_back(wirtinger_suite(p, options.seed, std::min<std::size_t>(options.pairs, 10000)));
    }
    for (int dim : {1, 2}) {
        const Grid g = Grid::make(dim, 2.0 * std::numbers::pi, dim == 1 ? 64 : 32);
        for (double alpha : options.alphas) {
            for (auto v : {GnVariant::LAlpha, GnVariant::L2AlphaMinus2}) {
                out.push_back(gn_scaling_suite(g, alpha, v, options.seed, 4));
            }
        }
    }
    return out;
}

}  // namespace blowup
