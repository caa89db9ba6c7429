#include "oplog/contour.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "oplog/errors.hpp"
#include "oplog/linalg.hpp"

namespace oplog {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::atomic<int> g_mutation_mode{-1};

// distance from z to the ray (-inf, 0]
double branch_cut_distance(cplx z) {
    if (z.real() > 0.0) return std::abs(z);
    return std::abs(z.imag());
}

void check_contour(const Contour& c) {
    if (!(c.radius > 0.0)) throw std::invalid_argument("contour: radius must be positive");
    if (c.nodes < 8 || c.nodes % 2 != 0)
        throw std::invalid_argument("contour: node count must be even and >= 8");
}

void check_certificate(const KappaCertificate& cert) {
    check_contour(cert.contour);
    if (cert.kappa == cplx{0.0, 0.0}) throw CertificateFailed("certificate: kappa is zero");
    if (branch_cut_distance(cert.contour.center) <= cert.contour.radius)
        throw CertificateFailed("certificate: contour touches the branch cut or the origin");
    if (!(cert.spectral_margin > 0.0))
        throw CertificateFailed("certificate: nonpositive spectral margin");
}

// largest distance from kappa to an eigenvalue of U + kappa*I, i.e. the
// spectral radius of U; falls back to the norm bound above the eigensolver's
// size limit
double spectral_extent(const ComplexMatrix& u, double norm_bound) {
    if (u.dim() > 256) return norm_bound;
    double ext = 0.0;
    for (const cplx& l : eigenvalues(u).eigenvalues) ext = std::max(ext, std::abs(l));
    return ext;
}

struct CalcPair {
    ComplexMatrix value;       // f-integral
    ComplexMatrix cauchy_one;  // same quadrature applied to f = 1
};

// Shares the per-node resolvent between the requested integrand and the
// constant function, whose integral must reproduce the identity.
CalcPair calculus_pair(const std::function<cplx(cplx)>& f, const ComplexMatrix& a,
                       const Contour& contour) {
    check_contour(contour);
    const std::size_t n = a.dim();
    const std::size_t q = contour.nodes;
    const double sign = quadrature_sign_mutated() ? -1.0 : 1.0;
    CalcPair out{ComplexMatrix(n), ComplexMatrix(n)};
    for (std::size_t j = 0; j < q; ++j) {
        const cplx lambda = contour.node(j);
        ComplexMatrix m(a);
        m *= -1.0;
        m.shift_diagonal(lambda);
        const ComplexMatrix res = LuFactors(m).inverse();
        // (1/2pi i) * lambda'_j * (2pi/N) collapses to offset_j / N
        const cplx w = sign * contour.offset(j) / static_cast<double>(q);
        kernels::axpy(out.value.data(), res.data(), w * f(lambda), n * n);
        kernels::axpy(out.cauchy_one.data(), res.data(), w, n * n);
    }
    return out;
}

double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm() / std::max(a.frobenius_norm(), 1.0);
}

void check_cauchy_probe(const ComplexMatrix& probe) {
    ComplexMatrix d(probe);
    d -= ComplexMatrix::identity(probe.dim());
    const double rel = d.frobenius_norm() / std::sqrt(static_cast<double>(probe.dim()));
    if (rel > 1e-6)
        throw CertificateFailed("certificate stale: Cauchy probe far from identity");
}

}  // namespace

cplx Contour::node(std::size_t j) const { return center + offset(j); }

cplx Contour::offset(std::size_t j) const {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(nodes);
    return radius * cplx{std::cos(theta), std::sin(theta)};
}

KappaCertificate choose_kappa(const ComplexMatrix& u) {
    if (!u.is_finite()) throw std::invalid_argument("choose_kappa: nonfinite input");
    const double r = operator_norm_estimate(u);
    KappaCertificate cert;
    cert.kappa = cplx{2.0 * r + 1.0, 0.0};
    cert.norm_bound = r;
    cert.contour = Contour{cert.kappa, r + 0.5, 64};
    cert.spectral_margin = cert.contour.radius - spectral_extent(u, r);
    if (!(cert.spectral_margin > 0.0))
        throw CertificateFailed("choose_kappa: spectrum reaches the contour");
    return cert;
}

KappaCertificate make_certificate(const ComplexMatrix& u, cplx kappa, std::size_t nodes) {
    if (!u.is_finite()) throw std::invalid_argument("make_certificate: nonfinite input");
    if (kappa == cplx{0.0, 0.0}) throw CertificateFailed("make_certificate: kappa is zero");
    const double r = operator_norm_estimate(u);
    const double ext = spectral_extent(u, r);
    const double cut = branch_cut_distance(kappa);
    if (cut <= ext)
        throw CertificateFailed("make_certificate: shift too small for the spectrum");
    KappaCertificate cert;
    cert.kappa = kappa;
    cert.norm_bound = r;
    cert.contour = Contour{kappa, std::min(ext + 0.5, 0.5 * (ext + cut)), nodes};
    cert.spectral_margin = cert.contour.radius - ext;
    check_certificate(cert);
    return cert;
}

ComplexMatrix holomorphic_calculus(const std::function<cplx(cplx)>& f, const ComplexMatrix& a,
                                   const Contour& contour) {
    return calculus_pair(f, a, contour).value;
}

namespace {

// Adaptive node doubling shared by the log and its derivative. step(N) must
// evaluate the quadrature at N nodes and return (result, Cauchy probe).
ComplexMatrix adapt_nodes(std::size_t n0,
                          const std::function<CalcPair(std::size_t)>& step,
                          const char* what) {
    std::size_t q = (n0 >= 1024) ? 512 : n0;
    CalcPair prev = step(q);
    while (q < 1024) {
        q = std::min<std::size_t>(q * 2, 1024);
        CalcPair cur = step(q);
        if (rel_diff(prev.value, cur.value) <= 1e-10) {
            check_cauchy_probe(cur.cauchy_one);
            return std::move(cur.value);
        }
        prev = std::move(cur);
    }
    throw NoConvergence(std::string(what) + ": quadrature not settled at 1024 nodes");
}

}  // namespace

ComplexMatrix shifted_log(const ComplexMatrix& u, const KappaCertificate& cert) {
    check_certificate(cert);
    ComplexMatrix a(u);
    a.shift_diagonal(cert.kappa);
    const auto logf = [](cplx z) { return std::log(z); };
    return adapt_nodes(cert.contour.nodes, [&](std::size_t q) {
        Contour c = cert.contour;
        c.nodes = q;
        return calculus_pair(logf, a, c);
    }, "shifted_log");
}

namespace {

CalcPair derivative_pair(const ComplexMatrix& a, const ComplexMatrix& du,
                         const KappaCertificate& cert, std::size_t q) {
    Contour c = cert.contour;
    c.nodes = q;
    const double sign = quadrature_sign_mutated() ? -1.0 : 1.0;
    const std::size_t n = a.dim();
    CalcPair out{ComplexMatrix(n), ComplexMatrix(n)};
    for (std::size_t j = 0; j < q; ++j) {
        const cplx lambda = c.node(j);
        ComplexMatrix m(a);
        m *= -1.0;
        m.shift_diagonal(lambda);
        const ComplexMatrix res = LuFactors(m).inverse();
        const ComplexMatrix term = res * (du * res);
        const cplx w = sign * c.offset(j) / static_cast<double>(q);
        kernels::axpy(out.value.data(), term.data(), w * std::log(lambda), n * n);
        kernels::axpy(out.cauchy_one.data(), res.data(), w, n * n);
    }
    return out;
}

}  // namespace

ComplexMatrix shifted_log_derivative(const ComplexMatrix& u, const ComplexMatrix& du,
                                     const KappaCertificate& cert) {
    if (u.dim() != du.dim())
        throw std::invalid_argument("shifted_log_derivative: dim mismatch");
    check_certificate(cert);
    ComplexMatrix a(u);
    a.shift_diagonal(cert.kappa);
    const auto step = [&](std::size_t q) { return derivative_pair(a, du, cert, q); };
    return adapt_nodes(cert.contour.nodes, step, "shifted_log_derivative");
}

ComplexMatrix shifted_log_derivative_fixed(const ComplexMatrix& u, const ComplexMatrix& du,
                                           const KappaCertificate& cert, std::size_t nodes) {
    if (u.dim() != du.dim())
        throw std::invalid_argument("shifted_log_derivative_fixed: dim mismatch");
    check_certificate(cert);
    if (nodes < 8 || nodes % 2 != 0)
        throw std::invalid_argument("shifted_log_derivative_fixed: need an even node count >= 8");
    ComplexMatrix a(u);
    a.shift_diagonal(cert.kappa);
    CalcPair pair = derivative_pair(a, du, cert, nodes);
    check_cauchy_probe(pair.cauchy_one);
    return std::move(pair.value);
}

void set_quadrature_sign_mutation(int mode) { g_mutation_mode.store(mode); }

bool quadrature_sign_mutated() {
    const int mode = g_mutation_mode.load();
    if (mode >= 0) return mode == 1;
    static const bool from_env = [] {
        const char* e = std::getenv("OPLOG_MUTATE_QUADRATURE_SIGN");
        return e != nullptr && e[0] == '1';
    }();
    return from_env;
}

}  // namespace oplog
