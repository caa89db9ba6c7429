#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oplog/complex_matrix.hpp"
#include "oplog/errors.hpp"
#include "oplog/linalg.hpp"

using namespace oplog;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = rng.symmetric();
            const double im = rng.symmetric();
            m(i, j) = cplx(re, im);
        }
    return m;
}

double rel_fro(const ComplexMatrix& got, const ComplexMatrix& want) {
    return (got - want).frobenius_norm() / std::max(want.frobenius_norm(), 1e-300);
}

// multiset distance between two eigenvalue lists
double eig_match(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0.0;
    for (const cplx& v : a) {
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (std::abs(b[i] - v) < bd) {
                bd = std::abs(b[i] - v);
                best = i;
            }
        worst = std::max(worst, bd);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

}  // namespace

TEST_CASE("lu solves diagonal and random systems") {
    const ComplexMatrix d = ComplexMatrix::diagonal({cplx(2, 0), cplx(4, 0)});
    const ComplexMatrix inv = LuFactors(d).inverse();
    CHECK(std::abs(inv(0, 0) - cplx(0.5, 0)) <= 1e-15);
    CHECK(std::abs(inv(1, 1) - cplx(0.25, 0)) <= 1e-15);
    CHECK(std::abs(inv(0, 1)) <= 1e-15);

    const ComplexMatrix a = random_matrix(12, 0xAB01);
    const ComplexMatrix b = random_matrix(12, 0xAB02);
    const ComplexMatrix x = lu_solve(a, b);
    CHECK(rel_fro(a * x, b) <= 1e-11);

    // vector right-hand side against the matrix path
    std::vector<cplx> rhs(12);
    for (std::size_t i = 0; i < 12; ++i) rhs[i] = b(i, 0);
    const std::vector<cplx> xv = LuFactors(a).solve(rhs);
    double dev = 0.0;
    for (std::size_t i = 0; i < 12; ++i) dev = std::max(dev, std::abs(xv[i] - x(i, 0)));
    CHECK(dev <= 1e-12);
}

TEST_CASE("exactly singular matrices are refused with a pivot diagnostic") {
    ComplexMatrix s(3);
    s(0, 0) = cplx(1, 0);
    s(0, 1) = cplx(2, 0);
    s(0, 2) = cplx(3, 0);
    for (std::size_t j = 0; j < 3; ++j) {
        s(1, j) = s(0, j);  // duplicated row
        s(2, j) = cplx(0.5, 0.25) * s(0, j);
    }
    CHECK_THROWS_AS(LuFactors{s}, SingularMatrix);
    try {
        LuFactors f(s);
    } catch (const SingularMatrix& e) {
        CHECK(e.pivot() >= 0.0);
        CHECK(std::string(e.name()) == "SingularMatrix");
    }

    const LuFactors ok(random_matrix(6, 0xAB03));
    CHECK(ok.min_pivot() > 0.0);
}

TEST_CASE("eigenvalues: frozen low-dimensional oracles") {
    // companion matrix of x^2 - x - 1: the golden ratio pair
    const ComplexMatrix fib = ComplexMatrix::from_rows({{1.0, 1.0}, {1.0, 0.0}});
    const double phi = 1.6180339887498949;
    const double psi = -0.61803398874989485;
    CHECK(eig_match(eigenvalues(fib).eigenvalues, {cplx(phi, 0), cplx(psi, 0)}) <= 1e-12);

    // symmetric tridiagonal with characteristic cubic (x-3)(x^2-6x+6)
    const ComplexMatrix tri = ComplexMatrix::from_rows(
        {{2.0, 1.0, 0.0}, {1.0, 3.0, 1.0}, {0.0, 1.0, 4.0}});
    const double r3 = std::sqrt(3.0);
    CHECK(eig_match(eigenvalues(tri).eigenvalues,
                    {cplx(3.0, 0), cplx(3.0 + r3, 0), cplx(3.0 - r3, 0)}) <= 1e-10);

    // triangular: eigenvalues are the diagonal
    const ComplexMatrix up =
        ComplexMatrix::from_rows({{cplx(1, 2), cplx(3, 0)}, {cplx(0, 0), cplx(4, -1)}});
    CHECK(eig_match(eigenvalues(up).eigenvalues, {cplx(1, 2), cplx(4, -1)}) <= 1e-12);

    // nilpotent: a defective double eigenvalue at zero
    const ComplexMatrix nil = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    const Spectrum sn = eigenvalues(nil);
    CHECK(sn.radius <= 1e-8);

    const ComplexMatrix one = ComplexMatrix::from_rows({{cplx(2.5, -1.0)}});
    CHECK(std::abs(eigenvalues(one).eigenvalues[0] - cplx(2.5, -1.0)) <= 1e-15);
}

TEST_CASE("eigenvalues are similarity invariant and bounded by the norm") {
    const ComplexMatrix a = random_matrix(10, 0xAB04);
    ComplexMatrix p = random_matrix(10, 0xAB05);
    p *= cplx(0.2, 0.0);
    p.shift_diagonal(1.0);
    const ComplexMatrix sim = lu_solve(p, a * p);
    const Spectrum sa = eigenvalues(a);
    CHECK(eig_match(sa.eigenvalues, eigenvalues(sim).eigenvalues) /
              (1.0 + sa.radius) <=
          1e-6);
    CHECK(sa.radius <= operator_norm_estimate(a) + 1e-9);

    ComplexMatrix big(300);
    CHECK_THROWS_AS(eigenvalues(big), std::invalid_argument);
}

TEST_CASE("operator norm estimate on known matrices") {
    CHECK(operator_norm_estimate(ComplexMatrix(5)) == 0.0);
    CHECK(std::abs(operator_norm_estimate(ComplexMatrix::identity(7)) - 1.0) <= 1e-6);
    CHECK(std::abs(operator_norm_estimate(
                       ComplexMatrix::diagonal({cplx(3, 0), cplx(-1, 0)})) -
                   3.0) <= 1e-5);
    const ComplexMatrix shear = ComplexMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}});
    CHECK(std::abs(operator_norm_estimate(shear) - 2.0) <= 1e-5);
}

TEST_CASE("matrix exponential: frozen values and functional identities") {
    CHECK((matrix_exp(ComplexMatrix(4)) - ComplexMatrix::identity(4)).max_abs() <= 1e-15);

    const ComplexMatrix lg =
        ComplexMatrix::diagonal({cplx(std::log(2.0), 0), cplx(std::log(3.0), 0)});
    const ComplexMatrix want = ComplexMatrix::diagonal({cplx(2, 0), cplx(3, 0)});
    CHECK(rel_fro(matrix_exp(lg), want) <= 1e-14);

    // Jordan block at 1: exp = e * [[1,1],[0,1]]
    const ComplexMatrix jb = ComplexMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
    const double e1 = 2.7182818284590452;
    const ComplexMatrix ej =
        ComplexMatrix::from_rows({{cplx(e1, 0), cplx(e1, 0)}, {cplx(0, 0), cplx(e1, 0)}});
    CHECK(rel_fro(matrix_exp(jb), ej) <= 1e-13);

    const ComplexMatrix a = random_matrix(6, 0xAB06);
    const ComplexMatrix e = matrix_exp(a);
    ComplexMatrix neg = a;
    neg *= cplx(-1.0, 0.0);
    CHECK(rel_fro(e * matrix_exp(neg), ComplexMatrix::identity(6)) <= 1e-12);

    ComplexMatrix twice = a;
    twice *= cplx(2.0, 0.0);
    CHECK(rel_fro(e * e, matrix_exp(twice)) <= 1e-10);
}

TEST_CASE("matrix exponential refuses norms past the overflow gate") {
    const ComplexMatrix hot = ComplexMatrix::diagonal({cplx(800.0, 0.0)});
    CHECK_THROWS_AS(matrix_exp(hot), Overflow);
    // large but representable stays fine
    const ComplexMatrix warm = ComplexMatrix::diagonal({cplx(600.0, 0.0)});
    CHECK(std::isfinite(matrix_exp(warm)(0, 0).real()));
}

TEST_CASE("commutator residual and condition estimate") {
    const ComplexMatrix a = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    const ComplexMatrix b = ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}});
    CHECK(std::abs(commutator_residual(a, b) - 1.0) <= 1e-5);

    const ComplexMatrix c = random_matrix(5, 0xAB07);
    CHECK(commutator_residual(c, c * c) <= 1e-13);

    CHECK(std::abs(condition_estimate(ComplexMatrix::diagonal({cplx(4, 0), cplx(2, 0)})) -
                   2.0) <= 1e-4);
    ComplexMatrix sing(2);
    sing(0, 0) = cplx(1, 0);
    CHECK_THROWS_AS(condition_estimate(sing), SingularMatrix);
}
