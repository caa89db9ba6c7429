#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oplog/errors.hpp"
#include "oplog/linalg.hpp"
#include "oplog/swap.hpp"

using namespace oplog;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec transport_spec(std::size_t n) {
    ProblemSpec sp;
    sp.kind = ProblemKind::transport;
    sp.n0 = sp.n1 = n;
    return sp;
}

ProblemSpec heat_spec(std::size_t n) {
    ProblemSpec sp;
    sp.kind = ProblemKind::heat;
    sp.n0 = sp.n1 = n;
    return sp;
}

// largest relative defect of v as an eigenvector of k with eigenvalue lambda
double eigen_defect(const ComplexMatrix& k, const std::vector<cplx>& v, cplx lambda) {
    const std::vector<cplx> w = k.apply(v);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        worst = std::max(worst, std::abs(w[i] - lambda * v[i]));
    return worst / std::max(std::abs(lambda), 1.0);
}

std::vector<cplx> fourier_vector(std::size_t n, int k) {
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * k * static_cast<double>(j) / static_cast<double>(n);
        v[j] = cplx(std::cos(th), std::sin(th));
    }
    return v;
}

}  // namespace

TEST_CASE("initial profiles: values, periodicity, symmetry") {
    ProblemSpec sp = transport_spec(16);
    sp.width = 0.25;
    const cplx g = profile_value(sp, 0.2);
    // nearest periodic images sit 51 widths out; only the direct term survives
    CHECK(std::abs(g - cplx(std::exp(-0.64), 0)) <= 1e-15);
    CHECK(std::abs(profile_value(sp, 0.37 + 2.0 * sp.L) - profile_value(sp, 0.37)) <= 1e-14);
    CHECK(std::abs(profile_value(sp, -0.3) - profile_value(sp, 0.3)) <= 1e-15);

    sp.profile = ProfileKind::fourier_mode;
    sp.mode = 2;
    const cplx f = profile_value(sp, 0.25);
    CHECK(std::abs(f - cplx(0, 1)) <= 1e-15);
    CHECK(std::abs(profile_value(sp, -0.6 + 2.0 * sp.L) - profile_value(sp, -0.6)) <= 1e-14);
}

TEST_CASE("problem validation") {
    ProblemSpec sp = transport_spec(4);
    CHECK_THROWS_AS(discretize(sp, 0), std::invalid_argument);
    sp = transport_spec(16);
    sp.c = 0.0;
    CHECK_THROWS_AS(discretize(sp, 0), std::invalid_argument);
    sp = heat_spec(16);
    sp.nu = 0.0;
    CHECK_THROWS_AS(discretize(sp, 0), std::invalid_argument);
    sp = transport_spec(16);
    sp.T = 0.0;
    CHECK_THROWS_AS(discretize(sp, 0), std::invalid_argument);
    sp = transport_spec(16);
    sp.width = 0.0;
    CHECK_THROWS_AS(discretize(sp, 0), std::invalid_argument);

    CHECK_THROWS_AS(discretize(transport_spec(16), 2), UnsupportedDirection);
    CHECK_THROWS_AS(illposedness_indicator(transport_spec(16), -1), UnsupportedDirection);
}

TEST_CASE("discrete generators act by their symbols") {
    ProblemSpec sp = transport_spec(16);
    sp.c = 1.3;
    sp.n1 = 64;

    const GeneratorFamily g0 = discretize(sp, 0);
    CHECK(g0.dim == 64);
    CHECK(g0.autonomous);
    {
        const double h1 = 2.0 * sp.L / 64.0;
        const double th = 2.0 * kPi * 3.0 / 64.0;
        const cplx lambda(0.0, sp.c * std::sin(th) / h1);
        CHECK(eigen_defect(g0.eval(g0.lo), fourier_vector(64, 3), lambda) <= 1e-12);
    }

    const GeneratorFamily g1 = discretize(sp, 1);
    CHECK(g1.dim == 16);
    {
        const double h0 = 2.0 * sp.T / 16.0;
        const double th = 2.0 * kPi * 5.0 / 16.0;
        const cplx lambda(0.0, std::sin(th) / (sp.c * h0));
        CHECK(eigen_defect(g1.eval(g1.lo), fourier_vector(16, 5), lambda) <= 1e-12);
    }

    ProblemSpec hp = heat_spec(16);
    hp.nu = 0.05;
    hp.n1 = 64;
    {
        const GeneratorFamily h0d = discretize(hp, 0);
        const double h1 = 2.0 * hp.L / 64.0;
        const double half = kPi * 3.0 / 64.0;
        const cplx lambda(-4.0 * hp.nu * std::sin(half) * std::sin(half) / (h1 * h1), 0.0);
        CHECK(eigen_defect(h0d.eval(h0d.lo), fourier_vector(64, 3), lambda) <= 1e-12);
    }
}

TEST_CASE("sideways heat system carries square-root eigenvalue pairs") {
    ProblemSpec hp = heat_spec(16);
    const GeneratorFamily gen = discretize(hp, 1);
    REQUIRE(gen.dim == 32);
    const ComplexMatrix k = gen.eval(gen.lo);

    const double h0 = 2.0 * hp.T / 16.0;
    const double s = std::sin(2.0 * kPi * 4.0 / 16.0) / h0;  // peak temporal frequency
    const cplx lambda = std::sqrt(cplx(0.0, s / hp.nu));
    CHECK(std::abs(lambda.real() - std::sqrt(s / (2.0 * hp.nu))) <= 1e-12);

    const std::vector<cplx> base = fourier_vector(16, 4);
    std::vector<cplx> v(32);
    for (std::size_t i = 0; i < 16; ++i) {
        v[i] = base[i];
        v[16 + i] = lambda * base[i];
    }
    CHECK(eigen_defect(k, v, lambda) <= 1e-10);
}

TEST_CASE("well-posedness screening separates the directions") {
    const ProblemSpec tp = transport_spec(16);
    for (int dir : {0, 1}) {
        const DirectionReport rep = illposedness_indicator(tp, dir);
        CHECK(rep.wellposed);
        CHECK(std::abs(rep.spectral_abscissa) <= 1e-8);
        REQUIRE(rep.abscissa_trend.size() == 3);
        for (const auto& [sz, a] : rep.abscissa_trend) CHECK(std::abs(a) <= 1e-8);
    }

    const ProblemSpec hp = heat_spec(16);
    const DirectionReport r0 = illposedness_indicator(hp, 0);
    CHECK(r0.wellposed);
    CHECK(r0.spectral_abscissa <= 1e-8);

    const DirectionReport r1 = illposedness_indicator(hp, 1);
    CHECK_FALSE(r1.wellposed);
    REQUIRE(r1.abscissa_trend.size() == 3);
    std::size_t expect = 16;
    for (const auto& [sz, a] : r1.abscissa_trend) {
        CHECK(sz == expect);
        const double model = std::sqrt(static_cast<double>(sz) / (4.0 * hp.T * hp.nu));
        CHECK(std::abs(a - model) / model <= 1e-8);
        expect *= 2;
    }
    CHECK(r1.abscissa_trend[0].second < r1.abscissa_trend[1].second);
    CHECK(r1.abscissa_trend[1].second < r1.abscissa_trend[2].second);
    CHECK(std::abs(r1.growth_bound - r1.spectral_abscissa) == 0.0);
}

TEST_CASE("characteristics field") {
    ProblemSpec sp = transport_spec(16);
    sp.c = 0.8;
    sp.width = 0.25;
    const SpaceTimeField f = exact_field(sp);
    CHECK(f.provenance() == Provenance::exact);
    CHECK(f.axis0().n == 16);
    // g(x1 + c x0) at the lower-left corner: argument -1.8 wraps to 0.2
    CHECK(std::abs(f.at(0, 0) - cplx(std::exp(-0.64), 0)) <= 1e-14);

    ProblemSpec fm = transport_spec(16);
    fm.profile = ProfileKind::fourier_mode;
    fm.mode = 2;
    const SpaceTimeField g = exact_field(fm);
    CHECK(std::abs(g.at(8, 10) - cplx(0, 1)) <= 1e-14);

    CHECK_THROWS_AS(exact_field(heat_spec(16)), std::invalid_argument);
}

TEST_CASE("both slicings reproduce the transport solution") {
    ProblemSpec sp = transport_spec(32);
    const SpaceTimeField fx = exact_field(sp);
    const SpaceTimeField f0 = solve_direction(sp, 0);
    const SpaceTimeField f1 = solve_direction(sp, 1);
    CHECK(f0.provenance() == Provenance::evolved_in_x0);
    CHECK(f1.provenance() == Provenance::evolved_in_x1);
    // coarse-grid smoke bounds; the convergence test below pins the rate
    CHECK(compare_directions(fx, f0) <= 0.1);
    CHECK(compare_directions(fx, f1) <= 0.1);
    CHECK(compare_directions(f0, f1) <= 0.1);

    // the skew generator makes every one-step map an isometry
    double base = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < 32; ++j) sq += std::norm(f0.at(i, j));
        if (i == 0)
            base = std::sqrt(sq);
        else
            dev = std::max(dev, std::abs(std::sqrt(sq) - base) / base);
    }
    CHECK(dev <= 1e-6);
}

TEST_CASE("cross-direction agreement tightens under refinement") {
    DirectionReport open;  // transport is screened well-posed; skip the recompute
    open.wellposed = true;
    std::vector<double> cross;
    for (std::size_t n : {std::size_t{64}, std::size_t{128}}) {
        const ProblemSpec sp = transport_spec(n);
        const SpaceTimeField f0 = solve_direction(sp, 0, false, &open);
        const SpaceTimeField f1 = solve_direction(sp, 1, false, &open);
        cross.push_back(compare_directions(f0, f1));
    }
    CHECK(cross[1] <= 1e-2);
    CHECK(cross[0] >= 2.0 * cross[1]);
}

TEST_CASE("field comparison rejects mismatched grids") {
    const SpaceTimeField a = exact_field(transport_spec(16));
    const SpaceTimeField b = exact_field(transport_spec(32));
    CHECK_THROWS_AS(compare_directions(a, b), GridMismatch);
}

TEST_CASE("transpose swaps axes and values") {
    SpaceTimeField f(GridAxis{-1.0, 1.0, 5}, GridAxis{0.0, 3.0, 7}, Provenance::evolved_in_x0);
    SplitMix64 rng(0xABCD01);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 7; ++j) f.at(i, j) = cplx(rng.symmetric(), rng.symmetric());
    const SpaceTimeField t = f.transpose();
    CHECK(t.axis0().n == 7);
    CHECK(t.axis1().n == 5);
    CHECK(t.provenance() == f.provenance());
    const SpaceTimeField back = t.transpose();
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 7; ++j) {
            CHECK(t.at(j, i) == f.at(i, j));
            CHECK(back.at(i, j) == f.at(i, j));
        }
}

TEST_CASE("reslicing moduli: duality, flatness, roughness contrast") {
    SpaceTimeField f(GridAxis{-1.0, 1.0, 16}, GridAxis{0.0, 3.0, 24}, Provenance::exact);
    SplitMix64 rng(0xABCD02);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 24; ++j) f.at(i, j) = cplx(rng.symmetric(), rng.symmetric());
    const ResliceReport rf = reslice_discrete_trajectory(f);
    const ResliceReport rt = reslice_discrete_trajectory(f.transpose());
    CHECK(std::abs(rt.modulus_x0 - rf.modulus_x1) <= 1e-15 * (1.0 + rf.modulus_x1));
    CHECK(std::abs(rt.modulus_x1 - rf.modulus_x0) <= 1e-15 * (1.0 + rf.modulus_x0));

    SpaceTimeField c(GridAxis{-1.0, 1.0, 16}, GridAxis{-1.0, 1.0, 16}, Provenance::exact);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) c.at(i, j) = cplx(0.7, 0.0);
    const ResliceReport rc = reslice_discrete_trajectory(c);
    CHECK(rc.modulus_x0 == 0.0);
    CHECK(rc.modulus_x1 == 0.0);

    // rough along x0, smooth along x1: the moduli must separate sharply
    const GridAxis ax{-1.0, 1.0, 64};
    SpaceTimeField r(ax, ax, Provenance::exact);
    SplitMix64 noise(0xABCD03);
    for (std::size_t i = 0; i < 64; ++i) {
        const double xi = noise.symmetric();
        for (std::size_t j = 0; j < 64; ++j) {
            const double x1 = ax.point(j);
            r.at(i, j) = cplx(xi * std::exp(-(x1 / 0.25) * (x1 / 0.25)), 0.0);
        }
    }
    const ResliceReport rr = reslice_discrete_trajectory(r);
    CHECK(rr.modulus_x0 / std::max(rr.modulus_x1, 1e-300) >= 10.0);
}

TEST_CASE("ill-posed direction is refused without an override") {
    const ProblemSpec hp = heat_spec(16);
    try {
        solve_direction(hp, 1);
        FAIL("expected IllPosedDirection");
    } catch (const IllPosedDirection& e) {
        CHECK(std::string(e.name()) == "IllPosedDirection");
    }
    // the well-posed direction of the same problem still runs
    const SpaceTimeField f0 = solve_direction(hp, 0);
    CHECK(f0.is_finite());
}

TEST_CASE("forced ill-posed march blows up at a named coordinate") {
    ProblemSpec ov = heat_spec(64);
    ov.nu = 3.2e-4;
    ov.n1 = 512;
    DirectionReport screened;
    screened.wellposed = false;
    try {
        solve_direction(ov, 1, true, &screened);
        FAIL("expected Overflow");
    } catch (const Overflow& e) {
        CHECK(e.has_coordinate);
        CHECK(e.index1 >= 1);
        CHECK(e.index1 < 512);
        CHECK(e.x1 >= -ov.L);
        CHECK(e.x1 <= ov.L);
        CHECK(e.index0 < 64);
        CHECK(e.x0 >= -ov.T);
        CHECK(e.x0 < ov.T);
    }
}
