#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/model.hpp"

namespace blowup {

/// phi(x) = A |x|^k
struct PowerLaw {
    double amplitude = 1.0;
    double k = 12.0;
    bool operator==(const PowerLaw&) const = default;
};

/// phi(x) = c * prod_j |x - x_j|^(k_j)
struct MultiPoint {
    std::vector<Coord> centres;
    std::vector<double> exponents;
    double scale = 1.0;
    bool operator==(const MultiPoint&) const = default;
};

/// Description of the spatial profile phi entering U(t,x) = (-alpha t + phi(x))^(-1/alpha).
struct ProfileSpec {
    ModelParams params;
    std::variant<PowerLaw, MultiPoint> form;
    /// Minimal half-separation of the blow-up points; also sets the probe radii
    /// of the local hypothesis check.
    double rho = 1.0;

    static ProfileSpec power_law(const ModelParams& params, double amplitude, double k,
                                 double rho = 1.0);
    /// rho defaults to half the smallest pairwise distance (1 for a single point).
    static ProfileSpec multi_point(const ModelParams& params, std::vector<Coord> centres,
                                   std::vector<double> exponents, double scale = 1.0,
                                   std::optional<double> rho = std::nullopt);

    std::size_t point_count() const;
    Coord centre(std::size_t j) const;
    double exponent(std::size_t j) const;
    double k_min() const;  // k_1
    double k_max() const;  // k_J
    /// Growth exponent at infinity: the sum of the k_j.
    double nu() const;

    /// Structural conditions in a fixed order; empty when all hold.
    /// Each entry reads "<condition> violated (...)".
    std::vector<std::string> violations() const;

    bool operator==(const ProfileSpec&) const = default;
};

/// Value and all partial derivatives of phi up to order three at one point.
struct PhiJet {
    int dim = 1;
    double value = 0.0;
    std::array<double, kMaxDim> d1{};
    std::array<std::array<double, kMaxDim>, kMaxDim> d2{};
    std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxDim> d3{};

    double laplacian() const;
    Coord grad_laplacian() const;
    double grad_sq() const;
    /// grad |grad phi|^2 = 2 Hess(phi) grad(phi)
    Coord grad_of_grad_sq() const;
};

/// Immutable, evaluatable phi built from a validated spec.
class PhiFunction {
public:
    /// Throws HypothesisError naming the first violated structural condition.
    explicit PhiFunction(ProfileSpec spec);

    const ProfileSpec& spec() const { return spec_; }
    double value(const Coord& x) const;
    PhiJet jet(const Coord& x) const;

private:
    ProfileSpec spec_;
};

PhiFunction build_phi(const ProfileSpec& spec);

/// Closed-form U and its derivatives at one point.
struct ProfileDerivatives {
    double u = 0.0;
    double dt_u = 0.0;  // U^(alpha+1)
    Coord grad{};
    double laplacian = 0.0;
    Coord grad_laplacian{};
    /// Largest individual term of the laplacian / grad-laplacian formulas.
    /// Used as the error scale where those quantities cancel to zero.
    double laplacian_scale = 0.0;
    double grad_laplacian_scale = 0.0;
};

/// The explicit blow-up profile U(t,x) = (-alpha t + phi(x))^(-1/alpha), t < 0.
class BlowupProfile {
public:
    explicit BlowupProfile(ProfileSpec spec);

    const ProfileSpec& spec() const { return phi_.spec(); }
    const PhiFunction& phi() const { return phi_; }
    double alpha() const { return phi_.spec().params.alpha; }

    /// Throws std::invalid_argument for t >= 0.
    double value(double t, const Coord& x) const;
    ProfileDerivatives derivatives(double t, const Coord& x) const;

    /// phi(x)^(-1/alpha), the pointwise limit as t -> 0 away from the x_j.
    double limit_value(const Coord& x) const;
    Coord limit_gradient(const Coord& x) const;

private:
    PhiFunction phi_;
};

ComplexField eval_U(const BlowupProfile& profile, double t, const Grid& grid);

struct ProfileFields {
    ComplexField u;
    ComplexField dt_u;
    std::vector<ComplexField> grad;
    ComplexField laplacian;
    std::vector<ComplexField> grad_laplacian;
};

ProfileFields eval_U_derivatives(const BlowupProfile& profile, double t, const Grid& grid);

/// Exponents e with norm ~ (-t)^(-e) as t -> 0.
struct RateTargets {
    double l2_exponent = 0.0;
    double theta = 0.0;
    double grad_exponent = 0.0;
    double linf_exponent = 0.0;
    double grad_linf_exponent = 0.0;
    double laplacian_bound_exponent = 0.0;
    double grad_laplacian_bound_exponent = 0.0;
};

RateTargets theoretical_exponents(const ProfileSpec& spec);

struct HypothesisCheck {
    std::string label;
    bool passed = true;
    std::string detail;
};

/// Measured |y|^(|beta| - k_j) |D^beta phi(x_j + y)| near one blow-up point.
struct LocalBehaviour {
    std::size_t point = 0;
    double eta0 = 0.0;                  // limit for beta = 0
    double eta0_spread = 0.0;           // relative spread of that limit over directions
    std::array<double, 4> ratio_min{};  // per |beta| at the smallest probe radius
    std::array<double, 4> ratio_max{};
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    std::vector<LocalBehaviour> local;

    bool passed() const;
    const HypothesisCheck* first_failure() const;
};

/// Validates the structural conditions, then samples positivity, local
/// power behaviour near each x_j and growth at infinity.
HypothesisReport check_hypotheses(const ProfileSpec& spec, double tolerance = 1e-2);

/// Placement and box-size validation of a profile on a grid: every x_j at
/// least L/4 from the boundary. Returns the largest |U(t)| on the box faces.
double validate_profile_on_grid(const BlowupProfile& profile, const Grid& grid, double t);

}  // namespace blowup
