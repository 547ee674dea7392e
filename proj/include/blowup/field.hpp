#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "blowup/model.hpp"

namespace blowup {

inline constexpr int kMaxDim = 4;

/// Point of R^N, zero padded beyond the active dimension.
using Coord = std::array<double, kMaxDim>;

/// Periodic collocation grid on the box [-L/2, L/2)^N with M points per axis.
///
/// Point i on an axis sits at -L/2 + i*h, so the origin is a grid point.
/// Frequencies follow the FFT ordering of (2*pi/L) * {-M/2, ..., M/2-1}.
struct Grid {
    int dim = 1;
    double length = 40.0;
    int points = 1024;

    static Grid make(int dim, double length, int points);
    void validate() const;

    double spacing() const { return length / points; }
    double cell_volume() const;
    std::size_t size() const;
    Coord coordinate(std::size_t flat) const;
    std::array<int, 3> axis_indices(std::size_t flat) const;
    double axis_coordinate(int i) const { return -0.5 * length + i * spacing(); }
    double axis_wavenumber(int i) const;

    bool operator==(const Grid&) const = default;
};

struct ComplexField {
    Grid grid;
    std::vector<complex> values;

    ComplexField() = default;
    explicit ComplexField(const Grid& g);
    ComplexField(const Grid& g, std::vector<complex> v);

    std::size_t size() const { return values.size(); }
    complex& operator[](std::size_t i) { return values[i]; }
    const complex& operator[](std::size_t i) const { return values[i]; }
    bool finite() const;
};

/// Subset of grid points, e.g. the exterior of balls around blow-up points.
class RegionMask {
public:
    static RegionMask full(const Grid& grid);
    /// Points with |x - c| > radius for every centre c.
    static RegionMask exterior_of_balls(const Grid& grid, std::span<const Coord> centres,
                                        double radius);
    /// {|x| < outer_radius and |x - c| > radius for every centre c}.
    static RegionMask bounded_exterior(const Grid& grid, std::span<const Coord> centres,
                                       double radius, double outer_radius);

    const Grid& grid() const { return grid_; }
    bool contains(std::size_t flat) const { return inside_[flat] != 0; }
    std::size_t count() const;

private:
    RegionMask(const Grid& g, std::vector<std::uint8_t> inside)
        : grid_(g), inside_(std::move(inside)) {}
    Grid grid_;
    std::vector<std::uint8_t> inside_;
};

/// FFT plans and scratch space for one grid. Not shareable between threads;
/// each worker owns its own workspace.
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const Grid& grid);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const Grid& grid() const { return grid_; }

    /// Unnormalised forward transform.
    void forward(std::span<const complex> in, std::span<complex> out);
    /// Inverse transform including the 1/M^N factor.
    void inverse(std::span<const complex> in, std::span<complex> out);

    /// |xi|^2 for every spectral index (FFT ordering).
    const std::vector<double>& xi_squared() const { return xi_sq_; }
    /// xi_axis for every spectral index.
    const std::vector<double>& xi(int axis) const { return xi_[axis]; }

    /// Grid-sized scratch arrays owned by the workspace; any call on the
    /// workspace may overwrite them.
    std::vector<complex>& spectrum() { return spectrum_; }
    std::vector<complex>& staging() { return staging_; }

private:
    Grid grid_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
    std::vector<double> xi_sq_;
    std::array<std::vector<double>, 3> xi_;
    std::vector<complex> spectrum_;
    std::vector<complex> staging_;
};

ComplexField laplacian(const ComplexField& f, SpectralWorkspace& ws);
std::vector<ComplexField> gradient(const ComplexField& f, SpectralWorkspace& ws);
/// Same, reusing the storage already held by `out`.
void gradient(const ComplexField& f, SpectralWorkspace& ws, std::vector<ComplexField>& out);

struct Norms {
    double l2 = 0.0;
    double grad_l2 = 0.0;
    double h1 = 0.0;
    double linf = 0.0;
};

/// L2, H1 and sup norms with trapezoidal weights. With a mask, the gradient is
/// taken spectrally on the whole grid and then restricted.
Norms norms(const ComplexField& f, SpectralWorkspace& ws, const RegionMask* mask = nullptr);

/// Same as norms() but for an already computed gradient (e.g. a closed form).
Norms norms(const ComplexField& f, std::span<const ComplexField> grad,
            const RegionMask* mask = nullptr);

/// (h^N sum |u|^p)^(1/p). Throws std::invalid_argument for p < 1.
double lp_norm(const ComplexField& f, double p, const RegionMask* mask = nullptr);
/// h^N sum |u|^p, i.e. ||u||_p^p.
double lp_integral(const ComplexField& f, double p, const RegionMask* mask = nullptr);
double linf_norm(const ComplexField& f, const RegionMask* mask = nullptr);
/// L2 norm evaluated from the transform (Parseval).
double spectral_l2(const ComplexField& f, SpectralWorkspace& ws);

/// Largest modulus over the faces of the box; a proxy for wrap-around error.
double boundary_magnitude(const ComplexField& f);

ComplexField inject(const Grid& grid, const std::function<complex(const Coord&)>& fn);
/// a - b
ComplexField diff(const ComplexField& a, const ComplexField& b);
/// a*x + y
ComplexField axpy(complex a, const ComplexField& x, const ComplexField& y);

enum class GnVariant {
    LAlpha,          // ||e||_a^a vs ||grad e||^(N(a-2)/2) ||e||^((2N - a(N-2))/2)
    L2AlphaMinus2,   // ||e||_{2a-2}^(a-1) vs ||grad e||^(N(a-2)/2) ||e||^((2(N-1) - a(N-2))/2)
};

/// Ratio right-hand side / left-hand side of a Gagliardo-Nirenberg bound.
/// Both sides are homogeneous of the same degree, so the ratio is invariant
/// under e -> lambda e.
double gn_ratio(const ComplexField& e, SpectralWorkspace& ws, double alpha, GnVariant variant);

/// CSV snapshot: coordinates, real part, imaginary part, modulus.
void write_csv(const ComplexField& f, std::ostream& os);

}  // namespace blowup
