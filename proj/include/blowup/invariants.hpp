#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/model.hpp"

namespace blowup {

/// Deterministic 64-bit generator (splitmix64) so corpora are identical on
/// every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Modulus log-uniform in [r_lo, r_hi], argument uniform.
    complex polar_log_uniform(double r_lo, double r_hi);

private:
    std::uint64_t state_;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::size_t samples = 0;
    std::string detail;
};

/// Smallest monotonicity gap over `pairs` random pairs with |z| <= 10.
SuiteResult monotonicity_suite(const ModelParams& params, std::uint64_t seed, std::size_t pairs);

/// |D g(u+v) - D g(u) - D g(v)| / (|u|^(alpha-1)|v| + |v|^(alpha-1)|u|) for
/// D = d/dz or d/dzbar. The constant is the largest ratio on the corpus of
/// seed_a; the corpus of seed_b must stay below 1.1 times that constant.
SuiteResult remainder_suite(const ModelParams& params, bool conjugate, std::uint64_t seed_a,
                            std::uint64_t seed_b, std::size_t pairs);

/// Largest ratio of the remainder to its bound over one corpus.
double remainder_constant(const ModelParams& params, bool conjugate, std::uint64_t seed,
                          std::size_t pairs);

/// Gagliardo-Nirenberg ratio of random band-limited fields under e -> lambda e;
/// passes when the relative variation over lambda is below 1e-10.
SuiteResult gn_scaling_suite(const Grid& grid, double alpha, GnVariant variant, std::uint64_t seed,
                             std::size_t fields);

/// Random band-limited field with modes |m| <= max_mode per axis.
ComplexField random_band_limited(const Grid& grid, int max_mode, Rng& rng);

/// First-order expansion g(z+h) - g(z) = dz h + dzbar conj(h) with |h| = 1e-6;
/// the relative error must stay below 1e-4.
SuiteResult wirtinger_suite(const ModelParams& params, std::uint64_t seed, std::size_t samples);

struct InvariantOptions {
    std::uint64_t seed = 1729;
    std::size_t pairs = 100000;
    std::vector<double> alphas{2.0, 2.5, 3.0};
};

/// All model and field property suites in a fixed order.
std::vector<SuiteResult> run_invariant_suites(const InvariantOptions& options);

}  // namespace blowup
