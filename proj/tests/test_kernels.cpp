#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "oplog/kernels.hpp"
#include "oplog/linalg.hpp"

using oplog::SplitMix64;
using oplog::kernels::cplx;

namespace {

// pins a backend for one scope and always restores automatic dispatch
struct ForcedBackend {
    explicit ForcedBackend(const oplog::kernels::Backend& b) {
        oplog::kernels::force_backend(b);
    }
    ~ForcedBackend() { oplog::kernels::reset_backend(); }
};

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(rng.symmetric(), rng.symmetric());
    return v;
}

void compare_backends(const oplog::kernels::Backend& a, const oplog::kernels::Backend& b,
                      std::size_t n) {
    const std::vector<cplx> x = random_vec(n, 0x1111 + n);
    const std::vector<cplx> y = random_vec(n, 0x2222 + n);
    const cplx alpha(0.3, -1.7);

    std::vector<cplx> ya = y, yb = y;
    a.axpy(ya.data(), x.data(), alpha, n);
    b.axpy(yb.data(), x.data(), alpha, n);
    std::vector<cplx> xa = x, xb = x;
    a.scal(xa.data(), alpha, n);
    b.scal(xb.data(), alpha, n);

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(ya[i] - yb[i]));
        worst = std::max(worst, std::abs(xa[i] - xb[i]));
    }
    CHECK(worst <= 1e-13);

    const double scale = static_cast<double>(n) + 1.0;
    CHECK(std::abs(a.dotu(x.data(), y.data(), n) - b.dotu(x.data(), y.data(), n)) <=
          1e-13 * scale);
    CHECK(std::abs(a.dotc(x.data(), y.data(), n) - b.dotc(x.data(), y.data(), n)) <=
          1e-13 * scale);
    CHECK(std::abs(a.sum_abs2(x.data(), n) - b.sum_abs2(x.data(), n)) <= 1e-13 * scale);
}

}  // namespace

TEST_CASE("scalar kernels match hand-computed values") {
    const oplog::kernels::Backend& k = oplog::kernels::scalar_backend();

    std::vector<cplx> y = {cplx(1, 0), cplx(0, 1)};
    const std::vector<cplx> x = {cplx(2, 0), cplx(0, 2)};
    k.axpy(y.data(), x.data(), cplx(0, 1), 2);  // y += i * x
    CHECK(std::abs(y[0] - cplx(1, 2)) <= 1e-15);
    CHECK(std::abs(y[1] - cplx(-2, 1)) <= 1e-15);

    std::vector<cplx> z = {cplx(3, -1)};
    k.scal(z.data(), cplx(2, 0), 1);
    CHECK(std::abs(z[0] - cplx(6, -2)) <= 1e-15);

    const std::vector<cplx> a = {cplx(1, 1), cplx(2, 0)};
    const std::vector<cplx> b = {cplx(0, 1), cplx(1, 1)};
    // unconjugated: (1+i)*i + 2*(1+i) = -1 + i + 2 + 2i = 1 + 3i
    CHECK(std::abs(k.dotu(a.data(), b.data(), 2) - cplx(1, 3)) <= 1e-15);
    // conjugated: (1-i)*i + 2*(1+i) = i + 1 + 2 + 2i = 3 + 3i
    CHECK(std::abs(k.dotc(a.data(), b.data(), 2) - cplx(3, 3)) <= 1e-15);
    CHECK(k.sum_abs2(a.data(), 2) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("active backend agrees with the scalar reference") {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{4},
                          std::size_t{7}, std::size_t{8}, std::size_t{9}, std::size_t{64},
                          std::size_t{257}, std::size_t{1024}})
        compare_backends(oplog::kernels::scalar_backend(), oplog::kernels::active(), n);
}

#if defined(OPLOG_BUILD_AVX2)
TEST_CASE("avx2 backend agrees with the scalar reference when supported") {
    if (!oplog::kernels::avx2_supported()) return;
    for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{5},
                          std::size_t{31}, std::size_t{32}, std::size_t{33},
                          std::size_t{513}})
        compare_backends(oplog::kernels::scalar_backend(), oplog::kernels::avx2_backend(), n);
}
#endif

TEST_CASE("forcing a backend changes dispatch and reset restores it") {
    const char* auto_name = oplog::kernels::active().name;
    {
        ForcedBackend guard(oplog::kernels::scalar_backend());
        CHECK(std::string(oplog::kernels::active().name) == "scalar");
    }
    CHECK(std::string(oplog::kernels::active().name) == auto_name);
}

TEST_CASE("empty and single-element spans are handled") {
    const oplog::kernels::Backend& k = oplog::kernels::active();
    std::vector<cplx> x = {cplx(1, 2)};
    k.axpy(x.data(), x.data(), cplx(0, 0), 0);  // n = 0 is a no-op
    CHECK(std::abs(x[0] - cplx(1, 2)) <= 1e-15);
    CHECK(k.sum_abs2(x.data(), 0) == 0.0);
    CHECK(k.sum_abs2(x.data(), 1) == doctest::Approx(5.0).epsilon(1e-15));
}
