#include "blowup/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "blowup/error.hpp"
#include "blowup/format.hpp"

namespace blowup {

namespace {

double norm_of(const Coord& y, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += y[d] * y[d];
    return std::sqrt(s);
}

Coord subtract(const Coord& a, const Coord& b) {
    Coord c{};
    for (int d = 0; d < kMaxDim; ++d) c[d] = a[d] - b[d];
    return c;
}

std::string fmt(double v) { return format_double(v); }

// Jet of y -> |y|^k. All derivatives up to order three vanish at y = 0 since k > 3.
PhiJet radial_power_jet(const Coord& y, double k, int dim) {
    PhiJet j;
    j.dim = dim;
    const double r = norm_of(y, dim);
    if (r == 0.0) return j;
    const double rk2 = std::pow(r, k - 2.0);
    const double rk4 = rk2 / (r * r);
    const double rk6 = rk4 / (r * r);
    const double c1 = k * rk2;
    const double c2 = k * (k - 2.0) * rk4;
    const double c3 = k * (k - 2.0) * (k - 4.0) * rk6;
    j.value = rk2 * r * r;
    for (int a = 0; a < dim; ++a) {
        j.d1[a] = c1 * y[a];
        for (int b = 0; b < dim; ++b) {
            j.d2[a][b] = c2 * y[a] * y[b] + (a == b ? c1 : 0.0);
            for (int c = 0; c < dim; ++c) {
                double t = c3 * y[a] * y[b] * y[c];
                if (a == b) t += c2 * y[c];
                if (a == c) t += c2 * y[b];
                if (b == c) t += c2 * y[a];
                j.d3[a][b][c] = t;
            }
        }
    }
    return j;
}

// Leibniz rule for the product of two 3-jets.
PhiJet multiply(const PhiJet& f, const PhiJet& g) {
    PhiJet h;
    const int n = f.dim;
    h.dim = n;
    h.value = f.value * g.value;
    for (int a = 0; a < n; ++a) {
        h.d1[a] = f.d1[a] * g.value + f.value * g.d1[a];
        for (int b = 0; b < n; ++b) {
            h.d2[a][b] = f.d2[a][b] * g.value + f.d1[a] * g.d1[b] + f.d1[b] * g.d1[a] +
                         f.value * g.d2[a][b];
            for (int c = 0; c < n; ++c) {
                h.d3[a][b][c] = f.d3[a][b][c] * g.value + f.d2[a][b] * g.d1[c] +
                                f.d2[a][c] * g.d1[b] + f.d2[b][c] * g.d1[a] +
                                f.d1[a] * g.d2[b][c] + f.d1[b] * g.d2[a][c] +
                                f.d1[c] * g.d2[a][b] + f.value * g.d3[a][b][c];
            }
        }
    }
    return h;
}

void scale_jet(PhiJet& j, double s) {
    j.value *= s;
    for (int a = 0; a < j.dim; ++a) {
        j.d1[a] *= s;
        for (int b = 0; b < j.dim; ++b) {
            j.d2[a][b] *= s;
            for (int c = 0; c < j.dim; ++c) j.d3[a][b][c] *= s;
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- ProfileSpec

ProfileSpec ProfileSpec::power_law(const ModelParams& params, double amplitude, double k,
                                   double rho) {
    return ProfileSpec{params, PowerLaw{amplitude, k}, rho};
}

ProfileSpec ProfileSpec::multi_point(const ModelParams& params, std::vector<Coord> centres,
                                     std::vector<double> exponents, double scale,
                                     std::optional<double> rho) {
    double r = 1.0;
    if (rho) {
        r = *rho;
    } else if (centres.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < centres.size(); ++a) {
            for (std::size_t b = a + 1; b < centres.size(); ++b) {
                best = std::min(best, norm_of(subtract(centres[a], centres[b]), params.dim));
            }
        }
        r = 0.5 * best;
    }
    return ProfileSpec{params, MultiPoint{std::move(centres), std::move(exponents), scale}, r};
}

std::size_t ProfileSpec::point_count() const {
    if (std::holds_alternative<PowerLaw>(form)) return 1;
    return std::get<MultiPoint>(form).centres.size();
}

Coord ProfileSpec::centre(std::size_t j) const {
    if (std::holds_alternative<PowerLaw>(form)) return Coord{};
    return std::get<MultiPoint>(form).centres.at(j);
}

double ProfileSpec::exponent(std::size_t j) const {
    if (const auto* p = std::get_if<PowerLaw>(&form)) return p->k;
    return std::get<MultiPoint>(form).exponents.at(j);
}

double ProfileSpec::k_min() const {
    if (const auto* p = std::get_if<PowerLaw>(&form)) return p->k;
    const auto& e = std::get<MultiPoint>(form).exponents;
    return e.empty() ? 0.0 : *std::min_element(e.begin(), e.end());
}

double ProfileSpec::k_max() const {
    if (const auto* p = std::get_if<PowerLaw>(&form)) return p->k;
    const auto& e = std::get<MultiPoint>(form).exponents;
    return e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
}

double ProfileSpec::nu() const {
    if (const auto* p = std::get_if<PowerLaw>(&form)) return p->k;
    const auto& e = std::get<MultiPoint>(form).exponents;
    return std::accumulate(e.begin(), e.end(), 0.0);
}

std::vector<std::string> ProfileSpec::violations() const {
    std::vector<std::string> out;
    try {
        params.validate();
    } catch (const ConfigError& e) {
        out.emplace_back(e.what());
        return out;
    }
    const double critical = 0.5 * params.dim * params.alpha;
    std::vector<double> ks;
    if (const auto* p = std::get_if<PowerLaw>(&form)) {
        if (!(p->amplitude > 0.0)) out.push_back("A > 0 violated (A = " + fmt(p->amplitude) + ")");
        ks.push_back(p->k);
    } else {
        const auto& m = std::get<MultiPoint>(form);
        if (m.centres.empty()) out.push_back("J >= 1 violated (no blow-up points)");
        if (m.centres.size() != m.exponents.size()) {
            out.push_back("one exponent per point violated (" + std::to_string(m.centres.size()) +
                          " points, " + std::to_string(m.exponents.size()) + " exponents)");
        }
        if (!(m.scale > 0.0)) out.push_back("c > 0 violated (c = " + fmt(m.scale) + ")");
        ks = m.exponents;
    }
    if (!out.empty()) return out;

    if (!(rho > 0.0)) out.push_back("rho > 0 violated (rho = " + fmt(rho) + ")");
    if (!std::is_sorted(ks.begin(), ks.end())) out.push_back("k_1 <= ... <= k_J violated");
    const double k1 = *std::min_element(ks.begin(), ks.end());
    const double kJ = *std::max_element(ks.begin(), ks.end());
    if (!(k1 > 10.0)) out.push_back("k_1 > 10 violated (k_1 = " + fmt(k1) + ")");
    if (!(kJ > critical)) {
        out.push_back("k_J > N*alpha/2 violated (k_J = " + fmt(kJ) + ", N*alpha/2 = " +
                      fmt(critical) + ")");
    }
    for (std::size_t a = 0; a < point_count(); ++a) {
        for (std::size_t b = a + 1; b < point_count(); ++b) {
            const double d = norm_of(subtract(centre(a), centre(b)), params.dim);
            if (d < 2.0 * rho) {
                out.push_back("|x_j - x_l| >= 2*rho violated (|x_" + std::to_string(a + 1) +
                              " - x_" + std::to_string(b + 1) + "| = " + fmt(d) +
                              ", rho = " + fmt(rho) + ")");
            }
        }
    }
    if (!(nu() > critical)) {
        out.push_back("nu > N*alpha/2 violated (nu = " + fmt(nu()) + ")");
    }
    return out;
}

// ---------------------------------------------------------------- PhiJet

double PhiJet::laplacian() const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += d2[a][a];
    return s;
}

Coord PhiJet::grad_laplacian() const {
    Coord g{};
    for (int c = 0; c < dim; ++c) {
        for (int a = 0; a < dim; ++a) g[c] += d3[a][a][c];
    }
    return g;
}

double PhiJet::grad_sq() const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += d1[a] * d1[a];
    return s;
}

Coord PhiJet::grad_of_grad_sq() const {
    Coord g{};
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) g[a] += 2.0 * d2[a][b] * d1[b];
    }
    return g;
}

// ---------------------------------------------------------------- PhiFunction

PhiFunction::PhiFunction(ProfileSpec spec) : spec_(std::move(spec)) {
    const auto v = spec_.violations();
    if (!v.empty()) throw HypothesisError(v.front());
}

PhiFunction build_phi(const ProfileSpec& spec) { return PhiFunction(spec); }

double PhiFunction::value(const Coord& x) const {
    const int n = spec_.params.dim;
    if (const auto* p = std::get_if<PowerLaw>(&spec_.form)) {
        return p->amplitude * std::pow(norm_of(x, n), p->k);
    }
    const auto& m = std::get<MultiPoint>(spec_.form);
    double v = m.scale;
    for (std::size_t j = 0; j < m.centres.size(); ++j) {
        v *= std::pow(norm_of(subtract(x, m.centres[j]), n), m.exponents[j]);
    }
    return v;
}

PhiJet PhiFunction::jet(const Coord& x) const {
    const int n = spec_.params.dim;
    if (const auto* p = std::get_if<PowerLaw>(&spec_.form)) {
        PhiJet j = radial_power_jet(x, p->k, n);
        scale_jet(j, p->amplitude);
        return j;
    }
    const auto& m = std::get<MultiPoint>(spec_.form);
    PhiJet acc = radial_power_jet(subtract(x, m.centres[0]), m.exponents[0], n);
    for (std::size_t j = 1; j < m.centres.size(); ++j) {
        acc = multiply(acc, radial_power_jet(subtract(x, m.centres[j]), m.exponents[j], n));
    }
    scale_jet(acc, m.scale);
    return acc;
}

// ---------------------------------------------------------------- BlowupProfile

BlowupProfile::BlowupProfile(ProfileSpec spec) : phi_(std::move(spec)) {}

double BlowupProfile::value(double t, const Coord& x) const {
    if (!(t < 0.0)) throw std::invalid_argument("the profile U(t) is defined for t < 0 only");
    const double a = alpha();
    return std::pow(-a * t + phi_.value(x), -1.0 / a);
}

ProfileDerivatives BlowupProfile::derivatives(double t, const Coord& x) const {
    if (!(t < 0.0)) throw std::invalid_argument("the profile U(t) is defined for t < 0 only");
    const double a = alpha();
    const int n = spec().params.dim;
    const PhiJet jet = phi_.jet(x);
    const double base = -a * t + jet.value;
    const double u = std::pow(base, -1.0 / a);
    // U^(a+1) = U/base, U^(2a+1) = U/base^2, U^(3a+1) = U/base^3
    const double p1 = u / base;
    const double p2 = p1 / base;
    const double p3 = p2 / base;
    const double c1 = -1.0 / a;
    const double c2 = (a + 1.0) / (a * a);
    const double c3 = -(a + 1.0) * (2.0 * a + 1.0) / (a * a * a);

    ProfileDerivatives out;
    out.u = u;
    out.dt_u = p1;
    for (int d = 0; d < n; ++d) out.grad[d] = c1 * p1 * jet.d1[d];

    const double lap_phi = jet.laplacian();
    const double grad_sq = jet.grad_sq();
    const double t1 = c1 * p1 * lap_phi;
    const double t2 = c2 * p2 * grad_sq;
    out.laplacian = t1 + t2;
    out.laplacian_scale = std::max(std::abs(t1), std::abs(t2));

    const Coord glap = jet.grad_laplacian();
    const Coord ggsq = jet.grad_of_grad_sq();
    Coord ta{}, tb{}, tc{};
    for (int d = 0; d < n; ++d) {
        ta[d] = c1 * p1 * glap[d];
        tb[d] = c2 * p2 * (lap_phi * jet.d1[d] + ggsq[d]);
        tc[d] = c3 * p3 * grad_sq * jet.d1[d];
        out.grad_laplacian[d] = ta[d] + tb[d] + tc[d];
    }
    out.grad_laplacian_scale = std::max({norm_of(ta, n), norm_of(tb, n), norm_of(tc, n)});
    return out;
}

double BlowupProfile::limit_value(const Coord& x) const {
    return std::pow(phi_.value(x), -1.0 / alpha());
}

Coord BlowupProfile::limit_gradient(const Coord& x) const {
    const double a = alpha();
    const PhiJet jet = phi_.jet(x);
    const double f = std::pow(jet.value, -1.0 / a);
    Coord g{};
    for (int d = 0; d < jet.dim; ++d) g[d] = -f / (a * jet.value) * jet.d1[d];
    return g;
}

ComplexField eval_U(const BlowupProfile& profile, double t, const Grid& grid) {
    if (grid.dim != profile.spec().params.dim) {
        throw ShapeMismatch("grid dimension differs from the model dimension");
    }
    if (!(t < 0.0)) throw std::invalid_argument("the profile U(t) is defined for t < 0 only");
    ComplexField out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = profile.value(t, grid.coordinate(i));
    return out;
}

ProfileFields eval_U_derivatives(const BlowupProfile& profile, double t, const Grid& grid) {
    if (grid.dim != profile.spec().params.dim) {
        throw ShapeMismatch("grid dimension differs from the model dimension");
    }
    if (!(t < 0.0)) throw std::invalid_argument("the profile U(t) is defined for t < 0 only");
    ProfileFields out{ComplexField(grid), ComplexField(grid), {}, ComplexField(grid), {}};
    for (int d = 0; d < grid.dim; ++d) {
        out.grad.emplace_back(grid);
        out.grad_laplacian.emplace_back(grid);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = profile.derivatives(t, grid.coordinate(i));
        out.u[i] = p.u;
        out.dt_u[i] = p.dt_u;
        out.laplacian[i] = p.laplacian;
        for (int d = 0; d < grid.dim; ++d) {
            out.grad[d][i] = p.grad[d];
            out.grad_laplacian[d][i] = p.grad_laplacian[d];
        }
    }
    return out;
}

// ---------------------------------------------------------------- exponents

RateTargets theoretical_exponents(const ProfileSpec& spec) {
    const double a = spec.params.alpha;
    const double n = spec.params.dim;
    const double k1 = spec.k_min();
    const double kJ = spec.k_max();
    RateTargets r;
    r.l2_exponent = 1.0 / a - n / (2.0 * kJ);
    r.theta = spec.params.dim <= 2 ? (2.0 - n) / (2.0 * kJ) : (2.0 - n) / (2.0 * k1);
    r.grad_exponent = 1.0 / a + r.theta;
    r.linf_exponent = 1.0 / a;
    r.grad_linf_exponent = 1.0 / a + 1.0 / k1;
    r.laplacian_bound_exponent = 1.0 / a + (4.0 - n) / (2.0 * k1);
    r.grad_laplacian_bound_exponent = 1.0 / a + (6.0 - n) / (2.0 * k1);
    return r;
}

// ---------------------------------------------------------------- hypotheses

bool HypothesisReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const HypothesisCheck* HypothesisReport::first_failure() const {
    for (const auto& c : checks) {
        if (!c.passed) return &c;
    }
    return nullptr;
}

namespace {

std::vector<Coord> probe_directions(int dim) {
    std::vector<Coord> dirs;
    for (int d = 0; d < dim; ++d) {
        Coord e{};
        e[d] = 1.0;
        dirs.push_back(e);
        e[d] = -1.0;
        dirs.push_back(e);
    }
    if (dim >= 2) {
        Coord diag{}, alt{}, skew{};
        for (int d = 0; d < dim; ++d) {
            diag[d] = 1.0;
            alt[d] = d % 2 == 0 ? 1.0 : -1.0;
            skew[d] = d + 1.0;
        }
        for (Coord c : {diag, alt, skew}) {
            const double r = norm_of(c, dim);
            for (int d = 0; d < dim; ++d) c[d] /= r;
            dirs.push_back(c);
        }
    }
    return dirs;
}

// Largest |D^beta phi| over multi-indices of the given order.
double max_partial(const PhiJet& j, int order) {
    double m = 0.0;
    const int n = j.dim;
    switch (order) {
        case 0:
            return std::abs(j.value);
        case 1:
            for (int a = 0; a < n; ++a) m = std::max(m, std::abs(j.d1[a]));
            return m;
        case 2:
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b) m = std::max(m, std::abs(j.d2[a][b]));
            return m;
        default:
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    for (int c = b; c < n; ++c) m = std::max(m, std::abs(j.d3[a][b][c]));
            return m;
    }
}

// Every partial of the given order, in a fixed order.
std::vector<double> partials(const PhiJet& j, int order) {
    std::vector<double> out;
    const int n = j.dim;
    if (order == 0) {
        out.push_back(std::abs(j.value));
    } else if (order == 1) {
        for (int a = 0; a < n; ++a) out.push_back(std::abs(j.d1[a]));
    } else if (order == 2) {
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) out.push_back(std::abs(j.d2[a][b]));
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                for (int c = b; c < n; ++c) out.push_back(std::abs(j.d3[a][b][c]));
    }
    return out;
}

Coord along(const Coord& base, const Coord& dir, double r) {
    Coord x = base;
    for (int d = 0; d < kMaxDim; ++d) x[d] += r * dir[d];
    return x;
}

HypothesisCheck positivity_check(const ProfileSpec& spec, const PhiFunction& phi) {
    const int n = spec.params.dim;
    const int per_axis = n == 1 ? 4001 : n == 2 ? 201 : n == 3 ? 41 : 15;
    double half = 0.0;
    for (std::size_t j = 0; j < spec.point_count(); ++j) {
        const Coord c = spec.centre(j);
        for (int d = 0; d < n; ++d) half = std::max(half, std::abs(c[d]));
    }
    half += 2.0 * spec.rho;
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= per_axis;
    for (std::size_t flat = 0; flat < total; ++flat) {
        Coord x{};
        std::size_t rest = flat;
        for (int d = 0; d < n; ++d) {
            x[d] = -half + 2.0 * half * static_cast<double>(rest % per_axis) / (per_axis - 1);
            rest /= per_axis;
        }
        // Points where some factor |x - x_j|^k_j underflows are indistinguishable from x_j.
        bool resolvable = true;
        for (std::size_t j = 0; j < spec.point_count(); ++j) {
            const double r = norm_of(subtract(x, spec.centre(j)), n);
            resolvable = resolvable && spec.exponent(j) * std::log10(r) > -290.0;
        }
        if (!resolvable) continue;
        const double v = phi.value(x);
        if (!(v > 0.0)) {
            std::ostringstream os;
            os << "phi > 0 violated at a probe point (phi = " << fmt(v) << ")";
            return {"phi > 0 away from x_j", false, os.str()};
        }
    }
    return {"phi > 0 away from x_j", true,
            std::to_string(total) + " probe points in [-" + fmt(half) + ", " + fmt(half) + "]^N"};
}

}  // namespace

HypothesisReport check_hypotheses(const ProfileSpec& spec, double tolerance) {
    HypothesisReport report;
    const auto violations = spec.violations();
    if (!violations.empty()) {
        for (const auto& v : violations) {
            const auto cut = v.find(" violated");
            report.checks.push_back({v.substr(0, cut), false, v});
        }
        return report;
    }
    report.checks.push_back({"structural conditions", true,
                             "alpha, k_j ordering, k_1 > 10, k_J > N*alpha/2, separation, nu"});

    const PhiFunction phi(spec);
    const int n = spec.params.dim;
    const auto dirs = probe_directions(n);

    report.checks.push_back(positivity_check(spec, phi));

    // Local behaviour: |y|^(|beta| - k_j) |D^beta phi(x_j + y)| over |y| = rho 2^-m.
    bool local_ok = true;
    std::string local_detail;
    for (std::size_t j = 0; j < spec.point_count(); ++j) {
        const double kj = spec.exponent(j);
        const Coord xj = spec.centre(j);
        int m_max = 12;
        while (m_max > 2 && kj * std::log10(spec.rho * std::ldexp(1.0, -m_max)) < -280.0) --m_max;

        LocalBehaviour lb;
        lb.point = j;
        std::vector<double> eta_last;
        for (int order = 0; order <= 3; ++order) {
            // ratios[dir][m][beta]
            std::vector<std::vector<std::vector<double>>> ratios(dirs.size());
            double scale = 0.0;
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (std::size_t di = 0; di < dirs.size(); ++di) {
                for (int m = 1; m <= m_max; ++m) {
                    const double r = spec.rho * std::ldexp(1.0, -m);
                    const PhiJet jet = phi.jet(along(xj, dirs[di], r));
                    auto p = partials(jet, order);
                    const double w = std::pow(r, order - kj);
                    for (auto& v : p) v *= w;
                    ratios[di].push_back(p);
                }
                const auto& last = ratios[di].back();
                const double biggest = *std::max_element(last.begin(), last.end());
                scale = std::max(scale, biggest);
                lo = std::min(lo, biggest);
                hi = std::max(hi, biggest);
            }
            lb.ratio_min[order] = lo;
            lb.ratio_max[order] = hi;
            for (std::size_t di = 0; di < dirs.size(); ++di) {
                const auto& last = ratios[di][m_max - 1];
                const auto& prev = ratios[di][m_max - 2];
                for (std::size_t b = 0; b < last.size(); ++b) {
                    if (!std::isfinite(last[b]) ||
                        std::abs(last[b] - prev[b]) > tolerance * std::max(scale, 1e-300)) {
                        local_ok = false;
                        local_detail = "ratio of order " + std::to_string(order) + " near x_" +
                                       std::to_string(j + 1) + " does not settle as |y| -> 0";
                    }
                }
                if (order == 0) {
                    eta_last.push_back(last[0]);
                    for (const auto& row : ratios[di]) {
                        if (!(row[0] > 0.0)) {
                            local_ok = false;
                            local_detail = "phi/|y|^k_j not bounded below near x_" +
                                           std::to_string(j + 1);
                        }
                    }
                }
            }
        }
        const auto [mn, mx] = std::minmax_element(eta_last.begin(), eta_last.end());
        lb.eta0 = std::accumulate(eta_last.begin(), eta_last.end(), 0.0) / eta_last.size();
        lb.eta0_spread = (*mx - *mn) / lb.eta0;
        if (lb.eta0_spread > tolerance) {
            local_ok = false;
            local_detail = "eta_{" + std::to_string(j + 1) + ",0} depends on the direction";
        }
        report.local.push_back(lb);
    }
    if (local_ok) {
        std::ostringstream os;
        for (const auto& lb : report.local) {
            os << "eta_{" << lb.point + 1 << ",0} = " << fmt(lb.eta0) << "; ";
        }
        local_detail = os.str() + "orders 1-3 bounded";
    }
    report.checks.push_back({"local power behaviour near x_j", local_ok, local_detail});

    // Growth at infinity: |x|^-nu phi bounded below, |x|^-nu |D^beta phi| bounded.
    const double nu = spec.nu();
    double reach = 1.0;
    for (std::size_t j = 0; j < spec.point_count(); ++j) {
        reach = std::max(reach, norm_of(spec.centre(j), n) + 2.0 * spec.rho);
    }
    const double r0 = 2.0 * reach;
    const double r_cap = std::pow(10.0, 270.0 / nu);
    std::vector<double> radii;
    for (int m = 0; m <= 6 && r0 * std::ldexp(1.0, m) <= r_cap; ++m) {
        radii.push_back(r0 * std::ldexp(1.0, m));
    }
    bool growth_ok = radii.size() >= 2;
    std::string growth_detail = growth_ok ? "" : "probe radii overflow for nu = " + fmt(nu);
    double liminf = std::numeric_limits<double>::infinity();
    for (const auto& dir : dirs) {
        if (!growth_ok) break;
        for (int order = 0; order <= 3; ++order) {
            std::vector<double> r;
            for (double R : radii) {
                r.push_back(max_partial(phi.jet(along(Coord{}, dir, R)), order) *
                            std::pow(R, -nu));
            }
            const double last = r.back(), prev = r[r.size() - 2];
            if (!std::isfinite(last)) {
                growth_ok = false;
                growth_detail = "non-finite derivative at large |x|";
            } else if (order == 0) {
                liminf = std::min(liminf, last);
                // A decay faster than |x|^-1/2 per doubling means nu is overstated.
                if (!(last > 0.0) || std::log2(prev / last) > 0.5) {
                    growth_ok = false;
                    growth_detail = "liminf |x|^-nu phi > 0 violated";
                }
            } else if (prev > 0.0 && std::log2(last / prev) > 0.5) {
                growth_ok = false;
                growth_detail = "limsup |x|^-nu |D^beta phi| < infinity violated (order " +
                                std::to_string(order) + ")";
            }
        }
    }
    if (growth_ok) growth_detail = "min |x|^-nu phi at |x| = " + fmt(radii.back()) + ": " + fmt(liminf);
    report.checks.push_back({"growth at infinity", growth_ok, growth_detail});
    return report;
}

double validate_profile_on_grid(const BlowupProfile& profile, const Grid& grid, double t) {
    const auto& spec = profile.spec();
    if (grid.dim != spec.params.dim) {
        throw ConfigError("grid dimension " + std::to_string(grid.dim) +
                          " differs from model dimension " + std::to_string(spec.params.dim));
    }
    for (std::size_t j = 0; j < spec.point_count(); ++j) {
        const Coord c = spec.centre(j);
        for (int d = 0; d < grid.dim; ++d) {
            if (std::abs(c[d]) > 0.25 * grid.length) {
                throw ConfigError("blow-up point x_" + std::to_string(j + 1) +
                                  " lies closer than L/4 to the box boundary");
            }
        }
    }
    return boundary_magnitude(eval_U(profile, t, grid));
}

}  // namespace blowup
