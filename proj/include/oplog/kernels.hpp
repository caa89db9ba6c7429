#ifndef OPLOG_KERNELS_HPP
#define OPLOG_KERNELS_HPP

// Complex double-precision inner-loop kernels (axpy / scal / dot / |x|^2).
// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
// variant and on aarch64 a NEON variant are compiled in separate translation
// units and selected once at runtime. All higher-level linear algebra routes
// its contiguous inner loops through this table, so the scalar and SIMD
// paths stay equivalence-testable against each other.

#include <complex>
#include <cstddef>

namespace oplog::kernels {

using cplx = std::complex<double>;

struct Backend {
    const char* name;
    // y[i] += a * x[i]
    void (*axpy)(cplx* y, const cplx* x, cplx a, std::size_t n);
    // x[i] *= a
    void (*scal)(cplx* x, cplx a, std::size_t n);
    // sum_i x[i] * y[i]   (unconjugated)
    cplx (*dotu)(const cplx* x, const cplx* y, std::size_t n);
    // sum_i conj(x[i]) * y[i]
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
    // sum_i |x[i]|^2
    double (*sum_abs2)(const cplx* x, std::size_t n);
};

const Backend& scalar_backend();

#if defined(OPLOG_BUILD_AVX2)
bool avx2_supported();
const Backend& avx2_backend();  // call only when avx2_supported()
#endif
#if defined(OPLOG_BUILD_NEON)
const Backend& neon_backend();
#endif

// Dispatched table: best variant the running CPU supports.
const Backend& active();

// Test hooks: pin a specific backend, or return to automatic selection.
void force_backend(const Backend& b);
void reset_backend();

inline void axpy(cplx* y, const cplx* x, cplx a, std::size_t n) { active().axpy(y, x, a, n); }
inline void scal(cplx* x, cplx a, std::size_t n) { active().scal(x, a, n); }
inline cplx dotu(const cplx* x, const cplx* y, std::size_t n) { return active().dotu(x, y, n); }
inline cplx dotc(const cplx* x, const cplx* y, std::size_t n) { return active().dotc(x, y, n); }
inline double sum_abs2(const cplx* x, std::size_t n) { return active().sum_abs2(x, n); }

}  // namespace oplog::kernels

#endif
