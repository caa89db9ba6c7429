// NEON variants for aarch64. float64x2_t holds one complex number as
// [re, im]; the complex product is assembled from a lane reversal plus a
// sign-flipped multiply-add.

#include "oplog/kernels.hpp"

#if defined(OPLOG_BUILD_NEON)

#include <arm_neon.h>

namespace oplog::kernels {

namespace {

const float64x2_t kSign = {-1.0, 1.0};

inline float64x2_t cmul(float64x2_t v, double ar, double ai) {
    // [ar*r, ar*i] + [-ai*i, ai*r]
    float64x2_t rev = vextq_f64(v, v, 1);
    float64x2_t t = vmulq_f64(vmulq_n_f64(rev, ai), kSign);
    return vfmaq_n_f64(t, v, ar);
}

void axpy_neon(cplx* y, const cplx* x, cplx a, std::size_t n) {
    double* py = reinterpret_cast<double*>(y);
    const double* px = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i, px += 2, py += 2) {
        float64x2_t p = cmul(vld1q_f64(px), a.real(), a.imag());
        vst1q_f64(py, vaddq_f64(vld1q_f64(py), p));
    }
}

void scal_neon(cplx* x, cplx a, std::size_t n) {
    double* px = reinterpret_cast<double*>(x);
    for (std::size_t i = 0; i < n; ++i, px += 2)
        vst1q_f64(px, cmul(vld1q_f64(px), a.real(), a.imag()));
}

cplx dotu_neon(const cplx* x, const cplx* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    for (std::size_t i = 0; i < n; ++i, px += 2, py += 2) {
        float64x2_t xv = vld1q_f64(px);
        float64x2_t yv = vld1q_f64(py);
        // [xr*yr - xi*yi, xr*yi + xi*yr]
        float64x2_t t = vmulq_f64(vmulq_n_f64(vextq_f64(yv, yv, 1), vgetq_lane_f64(xv, 1)), kSign);
        acc = vaddq_f64(acc, vfmaq_n_f64(t, yv, vgetq_lane_f64(xv, 0)));
    }
    return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

cplx dotc_neon(const cplx* x, const cplx* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    const float64x2_t sign = {1.0, -1.0};
    for (std::size_t i = 0; i < n; ++i, px += 2, py += 2) {
        float64x2_t xv = vld1q_f64(px);
        float64x2_t yv = vld1q_f64(py);
        // [xr*yr + xi*yi, xr*yi - xi*yr]
        float64x2_t t = vmulq_f64(vmulq_n_f64(vextq_f64(yv, yv, 1), vgetq_lane_f64(xv, 1)), sign);
        acc = vaddq_f64(acc, vfmaq_n_f64(t, yv, vgetq_lane_f64(xv, 0)));
    }
    return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

double sum_abs2_neon(const cplx* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const double* px = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i, px += 2) {
        float64x2_t xv = vld1q_f64(px);
        acc = vfmaq_f64(acc, xv, xv);
    }
    return vaddvq_f64(acc);
}

const Backend kNeon = {
    "neon", axpy_neon, scal_neon, dotu_neon, dotc_neon, sum_abs2_neon,
};

}  // namespace

const Backend& neon_backend() { return kNeon; }

}  // namespace oplog::kernels

#endif  // OPLOG_BUILD_NEON
