#include "blowup/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "blowup/error.hpp"
#include "blowup/format.hpp"

namespace blowup {

namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

void require_same_grid(const ComplexField& a, const ComplexField& b) {
    if (!(a.grid == b.grid) || a.size() != b.size()) {
        throw ShapeMismatch("fields live on different grids");
    }
}

}  // namespace

// ---------------------------------------------------------------- Grid

Grid Grid::make(int dim, double length, int points) {
    Grid g{dim, length, points};
    g.validate();
    return g;
}

void Grid::validate() const {
    if (dim < 1 || dim > 3) {
        throw ConfigError("grid dimension must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ConfigError("grid length L must be positive");
    }
    if (points < 8 || !is_power_of_two(points)) {
        throw ConfigError("grid points M must be a power of two >= 8 (got " +
                          std::to_string(points) + ")");
    }
}

double Grid::cell_volume() const { return std::pow(spacing(), dim); }

std::size_t Grid::size() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points);
    return n;
}

std::array<int, 3> Grid::axis_indices(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = dim - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % points);
        flat /= points;
    }
    return idx;
}

Coord Grid::coordinate(std::size_t flat) const {
    Coord x{};
    const auto idx = axis_indices(flat);
    for (int d = 0; d < dim; ++d) x[d] = axis_coordinate(idx[d]);
    return x;
}

double Grid::axis_wavenumber(int i) const {
    const int m = i < points / 2 ? i : i - points;
    return 2.0 * std::numbers::pi / length * m;
}

// ---------------------------------------------------------------- ComplexField

ComplexField::ComplexField(const Grid& g) : grid(g), values(g.size()) {}

ComplexField::ComplexField(const Grid& g, std::vector<complex> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw ShapeMismatch("field has " + std::to_string(values.size()) + " values, grid needs " +
                            std::to_string(grid.size()));
    }
}

bool ComplexField::finite() const {
    return std::all_of(values.begin(), values.end(), [](complex z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

// ---------------------------------------------------------------- RegionMask

RegionMask RegionMask::full(const Grid& grid) {
    return RegionMask(grid, std::vector<std::uint8_t>(grid.size(), 1));
}

namespace {

double distance(const Coord& a, const Coord& b, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

}  // namespace

RegionMask RegionMask::exterior_of_balls(const Grid& grid, std::span<const Coord> centres,
                                         double radius) {
    return bounded_exterior(grid, centres, radius, std::numeric_limits<double>::infinity());
}

RegionMask RegionMask::bounded_exterior(const Grid& grid, std::span<const Coord> centres,
                                        double radius, double outer_radius) {
    std::vector<std::uint8_t> inside(grid.size(), 0);
    const Coord origin{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Coord x = grid.coordinate(i);
        bool keep = distance(x, origin, grid.dim) < outer_radius;
        for (const auto& c : centres) {
            if (!keep) break;
            keep = distance(x, c, grid.dim) > radius;
        }
        inside[i] = keep ? 1 : 0;
    }
    return RegionMask(grid, std::move(inside));
}

std::size_t RegionMask::count() const {
    return static_cast<std::size_t>(std::count(inside_.begin(), inside_.end(), 1));
}

// ---------------------------------------------------------------- SpectralWorkspace

struct SpectralWorkspace::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    std::vector<complex> scratch;
};

SpectralWorkspace::SpectralWorkspace(const Grid& grid) : grid_(grid), plans_(new Plans) {
    grid_.validate();
    const std::size_t n = grid_.size();
    plans_->scratch.resize(2 * n);
    auto* a = reinterpret_cast<fftw_complex*>(plans_->scratch.data());
    auto* b = reinterpret_cast<fftw_complex*>(plans_->scratch.data() + n);
    std::array<int, 3> dims{grid_.points, grid_.points, grid_.points};
    {
        std::lock_guard lock(planner_mutex());
        plans_->fwd = fftw_plan_dft(grid_.dim, dims.data(), a, b, FFTW_FORWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_->inv = fftw_plan_dft(grid_.dim, dims.data(), a, b, FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!plans_->fwd || !plans_->inv) throw Error("FFTW planning failed");

    spectrum_.resize(n);
    staging_.resize(n);
    xi_sq_.assign(n, 0.0);
    for (int d = 0; d < grid_.dim; ++d) xi_[d].assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = grid_.axis_indices(i);
        for (int d = 0; d < grid_.dim; ++d) {
            const double k = grid_.axis_wavenumber(idx[d]);
            xi_[d][i] = k;
            xi_sq_[i] += k * k;
        }
    }
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard lock(planner_mutex());
    if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
    if (plans_->inv) fftw_destroy_plan(plans_->inv);
}

void SpectralWorkspace::forward(std::span<const complex> in, std::span<complex> out) {
    if (in.size() != grid_.size() || out.size() != grid_.size()) {
        throw ShapeMismatch("transform size does not match the grid");
    }
    // Out-of-place complex transforms leave the input untouched.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<complex*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    if (in.data() == out.data()) {
        std::copy(in.begin(), in.end(), plans_->scratch.begin());
        src = reinterpret_cast<fftw_complex*>(plans_->scratch.data());
    }
    fftw_execute_dft(plans_->fwd, src, dst);
}

void SpectralWorkspace::inverse(std::span<const complex> in, std::span<complex> out) {
    if (in.size() != grid_.size() || out.size() != grid_.size()) {
        throw ShapeMismatch("transform size does not match the grid");
    }
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<complex*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    if (in.data() == out.data()) {
        std::copy(in.begin(), in.end(), plans_->scratch.begin());
        src = reinterpret_cast<fftw_complex*>(plans_->scratch.data());
    }
    fftw_execute_dft(plans_->inv, src, dst);
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (auto& z : out) z *= scale;
}

// ---------------------------------------------------------------- differentiation

ComplexField laplacian(const ComplexField& f, SpectralWorkspace& ws) {
    if (!(f.grid == ws.grid())) throw ShapeMismatch("workspace grid differs from field grid");
    auto& spec = ws.spectrum();
    ws.forward(f.values, spec);
    const auto& k2 = ws.xi_squared();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= -k2[i];
    ComplexField out(f.grid);
    ws.inverse(spec, out.values);
    return out;
}

void gradient(const ComplexField& f, SpectralWorkspace& ws, std::vector<ComplexField>& out) {
    if (!(f.grid == ws.grid())) throw ShapeMismatch("workspace grid differs from field grid");
    auto& spec = ws.spectrum();
    auto& tmp = ws.staging();
    ws.forward(f.values, spec);
    out.resize(f.grid.dim);
    for (int d = 0; d < f.grid.dim; ++d) {
        if (!(out[d].grid == f.grid) || out[d].size() != f.size()) out[d] = ComplexField(f.grid);
        const auto& k = ws.xi(d);
        for (std::size_t i = 0; i < spec.size(); ++i) tmp[i] = complex(0.0, k[i]) * spec[i];
        ws.inverse(tmp, out[d].values);
    }
}

std::vector<ComplexField> gradient(const ComplexField& f, SpectralWorkspace& ws) {
    std::vector<ComplexField> out;
    gradient(f, ws, out);
    return out;
}

// ---------------------------------------------------------------- norms

Norms norms(const ComplexField& f, std::span<const ComplexField> grad, const RegionMask* mask) {
    if (mask && !(mask->grid() == f.grid)) throw ShapeMismatch("mask grid differs from field grid");
    for (const auto& g : grad) require_same_grid(f, g);
    const double w = f.grid.cell_volume();
    double s0 = 0.0, s1 = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (mask && !mask->contains(i)) continue;
        const double a = std::norm(f[i]);
        s0 += a;
        sup = std::max(sup, std::sqrt(a));
        for (const auto& g : grad) s1 += std::norm(g[i]);
    }
    Norms n;
    n.l2 = std::sqrt(w * s0);
    n.grad_l2 = std::sqrt(w * s1);
    n.h1 = std::sqrt(w * (s0 + s1));
    n.linf = sup;
    return n;
}

Norms norms(const ComplexField& f, SpectralWorkspace& ws, const RegionMask* mask) {
    const auto grad = gradient(f, ws);
    return norms(f, grad, mask);
}

double lp_integral(const ComplexField& f, double p, const RegionMask* mask) {
    if (!(p >= 1.0)) throw std::invalid_argument("Lp norm needs p >= 1");
    if (mask && !(mask->grid() == f.grid)) throw ShapeMismatch("mask grid differs from field grid");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (mask && !mask->contains(i)) continue;
        s += std::pow(std::abs(f[i]), p);
    }
    return f.grid.cell_volume() * s;
}

double lp_norm(const ComplexField& f, double p, const RegionMask* mask) {
    return std::pow(lp_integral(f, p, mask), 1.0 / p);
}

double linf_norm(const ComplexField& f, const RegionMask* mask) {
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (mask && !mask->contains(i)) continue;
        sup = std::max(sup, std::abs(f[i]));
    }
    return sup;
}

double spectral_l2(const ComplexField& f, SpectralWorkspace& ws) {
    auto& spec = ws.spectrum();
    ws.forward(f.values, spec);
    double s = 0.0;
    for (const auto& z : spec) s += std::norm(z);
    return std::sqrt(f.grid.cell_volume() * s / static_cast<double>(f.size()));
}

double boundary_magnitude(const ComplexField& f) {
    double sup = 0.0;
    const int last = f.grid.points - 1;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = f.grid.axis_indices(i);
        bool on_face = false;
        for (int d = 0; d < f.grid.dim; ++d) on_face = on_face || idx[d] == 0 || idx[d] == last;
        if (on_face) sup = std::max(sup, std::abs(f[i]));
    }
    return sup;
}

// ---------------------------------------------------------------- elementwise

ComplexField inject(const Grid& grid, const std::function<complex(const Coord&)>& fn) {
    ComplexField out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(grid.coordinate(i));
    return out;
}

ComplexField diff(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b);
    ComplexField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

ComplexField axpy(complex a, const ComplexField& x, const ComplexField& y) {
    require_same_grid(x, y);
    ComplexField out(x.grid);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
}

// ---------------------------------------------------------------- Gagliardo-Nirenberg

double gn_ratio(const ComplexField& e, SpectralWorkspace& ws, double alpha, GnVariant variant) {
    const auto n = norms(e, ws);
    const double dim = e.grid.dim;
    const double grad_exp = 0.5 * dim * (alpha - 2.0);
    double lhs = 0.0;
    double l2_exp = 0.0;
    switch (variant) {
        case GnVariant::LAlpha:
            lhs = lp_integral(e, alpha);
            l2_exp = 0.5 * (2.0 * dim - alpha * (dim - 2.0));
            break;
        case GnVariant::L2AlphaMinus2:
            lhs = std::pow(lp_norm(e, 2.0 * alpha - 2.0), alpha - 1.0);
            l2_exp = 0.5 * (2.0 * (dim - 1.0) - alpha * (dim - 2.0));
            break;
    }
    const double rhs = std::pow(n.grad_l2, grad_exp) * std::pow(n.l2, l2_exp);
    return rhs / lhs;
}

// ---------------------------------------------------------------- CSV

void write_csv(const ComplexField& f, std::ostream& os) {
    static const char* axis[] = {"x", "y", "z"};
    for (int d = 0; d < f.grid.dim; ++d) os << axis[d] << ',';
    os << "re,im,abs\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Coord x = f.grid.coordinate(i);
        for (int d = 0; d < f.grid.dim; ++d) os << format_double(x[d]) << ',';
        os << format_double(f[i].real()) << ',' << format_double(f[i].imag()) << ','
           << format_double(std::abs(f[i])) << '\n';
    }
}

}  // namespace blowup
