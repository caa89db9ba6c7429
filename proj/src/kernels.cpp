#include "oplog/kernels.hpp"

#include <atomic>

namespace oplog::kernels {

namespace {

void axpy_scalar(cplx* y, const cplx* x, cplx a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(cplx* x, cplx a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

cplx dotu_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

double sum_abs2_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

const Backend kScalar = {
    "scalar", axpy_scalar, scal_scalar, dotu_scalar, dotc_scalar, sum_abs2_scalar,
};

const Backend* pick_auto() {
#if defined(OPLOG_BUILD_AVX2)
    if (avx2_supported()) return &avx2_backend();
#endif
#if defined(OPLOG_BUILD_NEON)
    return &neon_backend();
#endif
    return &kScalar;
}

std::atomic<const Backend*> g_forced{nullptr};

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const Backend& active() {
    const Backend* forced = g_forced.load(std::memory_order_relaxed);
    if (forced) return *forced;
    static const Backend* auto_pick = pick_auto();
    return *auto_pick;
}

void force_backend(const Backend& b) { g_forced.store(&b, std::memory_order_relaxed); }
void reset_backend() { g_forced.store(nullptr, std::memory_order_relaxed); }

}  // namespace oplog::kernels
