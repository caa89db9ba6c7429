#include "oplog/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oplog/errors.hpp"

namespace oplog {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

LuFactors::LuFactors(const ComplexMatrix& a) : lu_(a), perm_(a.dim()) {
    const std::size_t n = lu_.dim();
    if (n == 0) throw std::invalid_argument("LuFactors: empty matrix");
    const double thr = kPivotRel * a.max_abs();
    min_pivot_ = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double cand = std::abs(lu_(i, k));
            if (cand > best) {
                best = cand;
                p = i;
            }
        }
        if (best < thr || best == 0.0)
            throw SingularMatrix("LU pivot below threshold", best);
        perm_[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        min_pivot_ = std::min(min_pivot_, best);
        const cplx piv = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = lu_(i, k) / piv;
            lu_(i, k) = f;
            if (f != cplx{0.0, 0.0})
                kernels::axpy(lu_.row(i) + k + 1, lu_.row(k) + k + 1, -f, n - k - 1);
        }
    }
}

ComplexMatrix LuFactors::solve(const ComplexMatrix& b) const {
    const std::size_t n = dim();
    if (b.dim() != n) throw std::invalid_argument("LuFactors::solve: dim mismatch");
    ComplexMatrix x(b);
    for (std::size_t k = 0; k < n; ++k)
        if (perm_[k] != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(x(k, j), x(perm_[k], j));
    // L y = P b (unit lower triangular)
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = lu_(i, k);
            if (f != cplx{0.0, 0.0}) kernels::axpy(x.row(i), x.row(k), -f, n);
        }
    // U x = y
    for (std::size_t kk = n; kk-- > 0;) {
        kernels::scal(x.row(kk), 1.0 / lu_(kk, kk), n);
        for (std::size_t i = 0; i < kk; ++i) {
            const cplx f = lu_(i, kk);
            if (f != cplx{0.0, 0.0}) kernels::axpy(x.row(i), x.row(kk), -f, n);
        }
    }
    return x;
}

std::vector<cplx> LuFactors::solve(const std::vector<cplx>& b) const {
    const std::size_t n = dim();
    if (b.size() != n) throw std::invalid_argument("LuFactors::solve: size mismatch");
    std::vector<cplx> x(b);
    for (std::size_t k = 0; k < n; ++k)
        if (perm_[k] != k) std::swap(x[k], x[perm_[k]]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
    for (std::size_t kk = n; kk-- > 0;) {
        x[kk] /= lu_(kk, kk);
        for (std::size_t i = 0; i < kk; ++i) x[i] -= lu_(i, kk) * x[kk];
    }
    return x;
}

ComplexMatrix LuFactors::inverse() const { return solve(ComplexMatrix::identity(dim())); }

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("lu_solve: dim mismatch");
    return LuFactors(a).solve(b);
}

// ---------------------------------------------------------------------------
// Eigenvalues: balance -> Householder Hessenberg -> shifted QR
// ---------------------------------------------------------------------------

namespace {

// Parlett-Reinsch diagonal equilibration with radix-2 scale factors.
void balance(ComplexMatrix& h) {
    const std::size_t n = h.dim();
    bool again = true;
    for (int pass = 0; again && pass < 50; ++pass) {
        again = false;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(h(j, i));
                r += std::abs(h(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / 2.0;
            while (c < g) {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while (c > g) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                again = true;
                const double gi = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) h(i, j) *= gi;
                for (std::size_t j = 0; j < n; ++j) h(j, i) *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form, in place.
void hessenberg(ComplexMatrix& h) {
    const std::size_t n = h.dim();
    if (n < 3) return;
    std::vector<cplx> v(n), vc(n), acc(n), hv(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column tail
        double xnorm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = h(k + 1 + i, k);
            xnorm2 += std::norm(v[i]);
        }
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) continue;
        const cplx x0 = v[0];
        const cplx phase = (std::abs(x0) == 0.0) ? cplx{1.0, 0.0} : x0 / std::abs(x0);
        const cplx alpha = -phase * xnorm;
        v[0] -= alpha;
        double vnorm2 = xnorm2 - 2.0 * (std::conj(alpha) * x0).real() + std::norm(alpha);
        if (vnorm2 <= 0.0) continue;
        const double beta = 2.0 / vnorm2;
        for (std::size_t i = 0; i < m; ++i) vc[i] = std::conj(v[i]);

        // left: H <- H - beta v (v^H H) on rows k+1..n-1
        std::fill(acc.begin(), acc.end(), cplx{0.0, 0.0});
        for (std::size_t i = 0; i < m; ++i)
            kernels::axpy(acc.data(), h.row(k + 1 + i), vc[i], n);
        for (std::size_t i = 0; i < m; ++i)
            kernels::axpy(h.row(k + 1 + i), acc.data(), -beta * v[i], n);

        // right: H <- H - beta (H v) v^H on columns k+1..n-1
        for (std::size_t i = 0; i < n; ++i)
            hv[i] = kernels::dotu(h.row(i) + k + 1, v.data(), m);
        for (std::size_t i = 0; i < n; ++i)
            kernels::axpy(h.row(i) + k + 1, vc.data(), -beta * hv[i], m);

        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

struct Givens {
    double c;
    cplx s;
};

// unitary [[c, s], [-conj(s), c]] with c real annihilating g against f
Givens make_givens(cplx f, cplx g) {
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) return {1.0, {0.0, 0.0}};
    if (af == 0.0) return {0.0, std::conj(g) / ag};
    const double r = std::hypot(af, ag);
    return {af / r, (f / af) * std::conj(g) / r};
}

std::pair<cplx, cplx> eig2x2(cplx a, cplx b, cplx c, cplx d) {
    const cplx m = 0.5 * (a + d);
    const cplx disc = std::sqrt(m * m - (a * d - b * c));
    const cplx l1 = (std::abs(m + disc) >= std::abs(m - disc)) ? m + disc : m - disc;
    if (std::abs(l1) == 0.0) return {m + disc, m - disc};
    return {l1, (a * d - b * c) / l1};
}

std::vector<cplx> qr_eigenvalues(ComplexMatrix& h) {
    const std::size_t n = h.dim();
    std::vector<cplx> eig(n);
    const std::size_t max_sweeps = 100 * n;
    std::size_t sweeps = 0;
    std::size_t hi = n - 1;
    std::size_t block_iter = 0;
    std::vector<Givens> rot(n);
    const double scale = std::max(h.frobenius_norm(), 1e-300);

    while (true) {
        // deflate negligible subdiagonals from the bottom
        std::size_t lo = hi;
        while (lo > 0) {
            double s = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (s == 0.0) s = scale;
            if (std::abs(h(lo, lo - 1)) <= kEps * s) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = h(hi, hi);
            block_iter = 0;
            if (hi == 0) break;
            --hi;
            continue;
        }
        if (lo + 1 == hi) {
            auto [l1, l2] = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            eig[hi] = l1;
            eig[lo] = l2;
            block_iter = 0;
            if (lo == 0) break;
            hi = lo - 1;
            continue;
        }

        if (++sweeps > max_sweeps)
            throw NoConvergence("QR eigenvalue iteration exceeded 100*n sweeps");

        cplx shift;
        if (++block_iter % 16 == 0) {
            // exceptional shift to break a stalled block
            shift = h(hi, hi) + 0.75 * (std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2)));
        } else {
            auto [l1, l2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            shift = (std::abs(l1 - h(hi, hi)) <= std::abs(l2 - h(hi, hi))) ? l1 : l2;
        }

        for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= shift;
        // QR by Givens sweeps on rows, then RQ on columns
        for (std::size_t k = lo; k < hi; ++k) {
            rot[k] = make_givens(h(k, k), h(k + 1, k));
            const Givens& g = rot[k];
            for (std::size_t j = k; j <= hi; ++j) {
                const cplx t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = g.c * t1 + g.s * t2;
                h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const Givens& g = rot[k];
            const std::size_t top = std::min(k + 1, hi);
            for (std::size_t i = lo; i <= top; ++i) {
                const cplx t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = g.c * t1 + std::conj(g.s) * t2;
                h(i, k + 1) = -g.s * t1 + g.c * t2;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h(i, i) += shift;
    }
    return eig;
}

}  // namespace

Spectrum eigenvalues(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    if (n > 256) throw std::invalid_argument("eigenvalues: dim > 256");
    Spectrum sp;
    if (n == 0) return sp;
    if (n == 1) {
        sp.eigenvalues = {a(0, 0)};
        sp.radius = std::abs(a(0, 0));
        return sp;
    }
    ComplexMatrix h(a);
    balance(h);
    hessenberg(h);
    sp.eigenvalues = qr_eigenvalues(h);
    for (const cplx& l : sp.eigenvalues) sp.radius = std::max(sp.radius, std::abs(l));
    return sp;
}

// ---------------------------------------------------------------------------
// 2-norm estimate and matrix exponential
// ---------------------------------------------------------------------------

double operator_norm_estimate(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    if (n == 0) return 0.0;
    if (kernels::sum_abs2(a.data(), a.size()) == 0.0) return 0.0;
    const ComplexMatrix ah = a.conj_transpose();

    SplitMix64 rng(kNormSeed);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {rng.symmetric(), rng.symmetric()};
    double nv = vec_norm(v);
    for (auto& x : v) x /= nv;

    double rho = 0.0, rho_prev = -1.0;
    int stagnant = 0;
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<cplx> w = a.apply(v);
        rho = kernels::sum_abs2(w.data(), n);
        if (rho == 0.0) {
            // start vector hit the kernel of A; draw a fresh one
            for (auto& x : v) x = {rng.symmetric(), rng.symmetric()};
            nv = vec_norm(v);
            for (auto& x : v) x /= nv;
            continue;
        }
        std::vector<cplx> u = ah.apply(w);
        const double nu = vec_norm(u);
        if (nu == 0.0) break;
        for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / nu;
        if (std::abs(rho - rho_prev) <= 1e-13 * rho) {
            if (++stagnant >= 3) break;
        } else {
            stagnant = 0;
        }
        rho_prev = rho;
    }
    return std::sqrt(rho) * (1.0 + 1e-7);
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    if (n == 0) return a;
    if (a.frobenius_norm() > 700.0 && operator_norm_estimate(a) > 700.0)
        throw Overflow("matrix_exp: operator norm exceeds 700");

    const double n1 = a.one_norm();
    int s = 0;
    if (n1 > 0.5) s = static_cast<int>(std::ceil(std::log2(n1 / 0.5)));
    ComplexMatrix b(a);
    if (s > 0) b *= std::ldexp(1.0, -s);

    // diagonal Pade [6/6]
    static const double c[7] = {1.0,        1.0 / 2.0,     5.0 / 44.0, 1.0 / 66.0,
                                1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
    const ComplexMatrix b2 = b * b;
    const ComplexMatrix b4 = b2 * b2;
    const ComplexMatrix b6 = b2 * b4;

    ComplexMatrix even = ComplexMatrix::identity(n);
    even *= c[0];
    {
        ComplexMatrix t(b2);
        t *= c[2];
        even += t;
        t = b4;
        t *= c[4];
        even += t;
        t = b6;
        t *= c[6];
        even += t;
    }
    ComplexMatrix oddcore = ComplexMatrix::identity(n);
    oddcore *= c[1];
    {
        ComplexMatrix t(b2);
        t *= c[3];
        oddcore += t;
        t = b4;
        t *= c[5];
        oddcore += t;
    }
    const ComplexMatrix odd = b * oddcore;

    const ComplexMatrix p = even + odd;
    const ComplexMatrix q = even - odd;
    ComplexMatrix x = lu_solve(q, p);
    for (int i = 0; i < s; ++i) x = x * x;
    return x;
}

double commutator_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("commutator_residual: dim mismatch");
    const double num = operator_norm_estimate(a * b - b * a);
    return num / (operator_norm_estimate(a) * operator_norm_estimate(b) + 1e-300);
}

double condition_estimate(const ComplexMatrix& a) {
    return operator_norm_estimate(a) * operator_norm_estimate(LuFactors(a).inverse());
}

}  // namespace oplog
