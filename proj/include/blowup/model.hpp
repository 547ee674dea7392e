#pragma once

#include <complex>

namespace blowup {

using complex = std::complex<double>;

/// Spatial dimension and power of the nonlinearity g(z) = |z|^alpha z.
///
/// Admissible pairs satisfy (N-2)*alpha <= 4 and alpha >= 2, which leaves
/// N in 1..4 and forces alpha = 2 when N = 4.
struct ModelParams {
    int dim = 1;
    double alpha = 2.0;

    /// Builds validated parameters; throws ConfigError naming the violated bound.
    static ModelParams make(int dim, double alpha);

    void validate() const;
    bool operator==(const ModelParams&) const = default;
};

/// g(z) = |z|^alpha z, with g(0) = 0.
complex nonlinearity(const ModelParams& params, complex z);

struct Wirtinger {
    complex dz;     // (alpha+2)/2 |z|^alpha, real valued
    complex dzbar;  // alpha/2 |z|^(alpha-2) z^2
};

Wirtinger wirtinger_derivatives(const ModelParams& params, complex z);

/// Re[(g(z1) - g(z2)) conj(z1 - z2)]; nonnegative for every pair.
double monotonicity_gap(const ModelParams& params, complex z1, complex z2);

}  // namespace blowup
