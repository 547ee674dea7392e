#include "blowup/model.hpp"

#include <cmath>
#include <string>

#include "blowup/error.hpp"

namespace blowup {

ModelParams ModelParams::make(int dim, double alpha) {
    ModelParams p{dim, alpha};
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (dim < 1 || dim > 4) {
        throw ConfigError("dimension N must lie in 1..4 (got " + std::to_string(dim) + ")");
    }
    if (!std::isfinite(alpha) || alpha < 2.0) {
        throw ConfigError("alpha >= 2 violated (alpha = " + std::to_string(alpha) + ")");
    }
    if ((dim - 2) * alpha > 4.0) {
        throw ConfigError("(N-2)*alpha <= 4 violated (N = " + std::to_string(dim) +
                          ", alpha = " + std::to_string(alpha) + ")");
    }
}

complex nonlinearity(const ModelParams& params, complex z) {
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    return std::pow(r, params.alpha) * z;
}

Wirtinger wirtinger_derivatives(const ModelParams& params, complex z) {
    const double r = std::abs(z);
    if (r == 0.0) return {{0.0, 0.0}, {0.0, 0.0}};
    const double a = params.alpha;
    // |z|^(a-2) z^2 = |z|^a (z/|z|)^2 avoids r^(a-2) for tiny r.
    const complex unit = z / r;
    const double ra = std::pow(r, a);
    return {complex(0.5 * (a + 2.0) * ra, 0.0), 0.5 * a * ra * unit * unit};
}

double monotonicity_gap(const ModelParams& params, complex z1, complex z2) {
    const complex dg = nonlinearity(params, z1) - nonlinearity(params, z2);
    return std::real(dg * std::conj(z1 - z2));
}

}  // namespace blowup
