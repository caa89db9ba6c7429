#ifndef OPLOG_LINALG_HPP
#define OPLOG_LINALG_HPP

// Dense complex linear algebra: pivoted LU solves, eigenvalues via
// Hessenberg reduction + shifted QR, a power-iteration 2-norm estimate,
// and the scaling-and-squaring matrix exponential. Everything here is
// deterministic for fixed inputs; the only random ingredient (the norm
// estimator's start vector) uses a fixed documented seed.

#include <cstdint>
#include <vector>

#include "oplog/complex_matrix.hpp"

namespace oplog {

// One singularity notion across the library: a pivot counts as zero when its
// modulus falls below kPivotRel * max|A_ij| of the matrix being factored.
inline constexpr double kPivotRel = 1e-14;

// Seed of the norm estimator's start vector (splitmix64 stream).
inline constexpr std::uint64_t kNormSeed = 0x9E3779B97F4A7C15ull;

// Tiny portable generator so results do not depend on the standard library's
// distribution implementations.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // uniform in [-1, 1)
    double symmetric() { return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0; }
    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Pivoted LU factorization, reusable across several right-hand sides.
class LuFactors {
public:
    // throws SingularMatrix when a pivot falls below the relative threshold
    explicit LuFactors(const ComplexMatrix& a);

    std::size_t dim() const noexcept { return lu_.dim(); }
    // smallest pivot modulus encountered (diagnostic; valid even on success)
    double min_pivot() const noexcept { return min_pivot_; }

    ComplexMatrix solve(const ComplexMatrix& b) const;
    std::vector<cplx> solve(const std::vector<cplx>& b) const;
    ComplexMatrix inverse() const;

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    double min_pivot_ = 0.0;
};

// X with A X = B (partial pivoting).
ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b);

struct Spectrum {
    std::vector<cplx> eigenvalues;  // length = dim, with multiplicity
    double radius = 0.0;            // max modulus
};

// All eigenvalues via Hessenberg + Wilkinson-shifted QR. Precondition:
// dim <= 256. Throws NoConvergence past 100*dim sweeps.
Spectrum eigenvalues(const ComplexMatrix& a);

// sigma_max estimate by power iteration on A^H A, fixed seed, <= 500 sweeps.
double operator_norm_estimate(const ComplexMatrix& a);

// exp(A) by scaling and squaring with diagonal Pade [6/6].
// Throws Overflow when the 2-norm exceeds 700.
ComplexMatrix matrix_exp(const ComplexMatrix& a);

// ||AB - BA||_2 / (||A||_2 ||B||_2 + 1e-300)
double commutator_residual(const ComplexMatrix& a, const ComplexMatrix& b);

// ||A||_2 * ||A^{-1}||_2 via the norm estimator; throws SingularMatrix if A
// cannot be factored.
double condition_estimate(const ComplexMatrix& a);

}  // namespace oplog

#endif
