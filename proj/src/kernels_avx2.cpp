// AVX2+FMA variants of the complex kernels. One std::complex<double> is an
// interleaved (re, im) pair, so a 256-bit lane holds two complex numbers as
// [r0 i0 r1 i1]. Complex multiply uses the permute/fmaddsub idiom:
//   even lanes: ar*r - ai*i      (real part)
//   odd  lanes: ar*i + ai*r      (imaginary part)

#include "oplog/kernels.hpp"

#if defined(OPLOG_BUILD_AVX2)

#include <immintrin.h>

namespace oplog::kernels {

namespace {

void axpy_avx2(cplx* y, const cplx* x, cplx a, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    double* py = reinterpret_cast<double*>(y);
    const double* px = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        __m256d xv = _mm256_loadu_pd(px);                 // r0 i0 r1 i1
        __m256d xs = _mm256_permute_pd(xv, 0x5);          // i0 r0 i1 r1
        __m256d p = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
        _mm256_storeu_pd(py, _mm256_add_pd(_mm256_loadu_pd(py), p));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(cplx* x, cplx a, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    double* px = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, px += 4) {
        __m256d xv = _mm256_loadu_pd(px);
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        _mm256_storeu_pd(px, _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs)));
    }
    for (; i < n; ++i) x[i] *= a;
}

cplx dotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        __m256d xv = _mm256_loadu_pd(px);
        __m256d yv = _mm256_loadu_pd(py);
        __m256d yr = _mm256_movedup_pd(yv);               // yr0 yr0 yr1 yr1
        __m256d yi = _mm256_permute_pd(yv, 0xF);          // yi0 yi0 yi1 yi1
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        __m256d p = _mm256_fmaddsub_pd(xv, yr, _mm256_mul_pd(xs, yi));
        acc = _mm256_add_pd(acc, p);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);                       // [re, im]
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    cplx r{out[0], out[1]};
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        __m256d xv = _mm256_loadu_pd(px);
        __m256d yv = _mm256_loadu_pd(py);
        __m256d xr = _mm256_movedup_pd(xv);               // xr0 xr0 xr1 xr1
        __m256d xi = _mm256_permute_pd(xv, 0xF);          // xi0 xi0 xi1 xi1
        __m256d ys = _mm256_permute_pd(yv, 0x5);          // yi0 yr0 yi1 yr1
        // even: xr*yr + xi*yi, odd: xr*yi - xi*yr
        __m256d p = _mm256_fmsubadd_pd(xr, yv, _mm256_mul_pd(xi, ys));
        acc = _mm256_add_pd(acc, p);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    cplx r{out[0], out[1]};
    for (; i < n; ++i) r += std::conj(x[i]) * y[i];
    return r;
}

double sum_abs2_avx2(const cplx* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const double* px = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, px += 4) {
        __m256d xv = _mm256_loadu_pd(px);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    s = _mm_hadd_pd(s, s);
    double r = _mm_cvtsd_f64(s);
    for (; i < n; ++i) r += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return r;
}

const Backend kAvx2 = {
    "avx2", axpy_avx2, scal_avx2, dotu_avx2, dotc_avx2, sum_abs2_avx2,
};

}  // namespace

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Backend& avx2_backend() { return kAvx2; }

}  // namespace oplog::kernels

#endif  // OPLOG_BUILD_AVX2
