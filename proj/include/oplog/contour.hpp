#ifndef OPLOG_CONTOUR_HPP
#define OPLOG_CONTOUR_HPP

// Holomorphic functional calculus on circular contours: shift selection,
// certified contours, f(A) by trapezoid quadrature of the resolvent, the
// shifted principal logarithm Log(U + kappa*I), and its directional
// derivative along a perturbation of U.

#include <cstddef>
#include <functional>

#include "oplog/complex_matrix.hpp"

namespace oplog {

struct Contour {
    cplx center{0.0, 0.0};
    double radius = 0.0;
    std::size_t nodes = 64;

    cplx node(std::size_t j) const;     // center + radius * e^{i theta_j}
    cplx offset(std::size_t j) const;   // radius * e^{i theta_j}
};

// A shift kappa together with the contour and the spectral evidence that
// Log(U + kappa*I) is well defined on it.
struct KappaCertificate {
    cplx kappa{0.0, 0.0};
    double norm_bound = 0.0;      // 2-norm estimate of U
    Contour contour;
    double spectral_margin = 0.0; // min distance from eig(U + kappa*I) to the circle
};

// kappa = 2R+1 with R = operator_norm_estimate(U); circle(center kappa,
// radius R + 0.5, 64 nodes). Verified against the spectrum of U.
KappaCertificate choose_kappa(const ComplexMatrix& u);

// Certificate for a caller-supplied shift. The circle is centered at kappa
// with a radius between the spectral radius of U and the distance from kappa
// to the branch cut (-inf, 0]. Throws CertificateFailed when no such circle
// exists.
KappaCertificate make_certificate(const ComplexMatrix& u, cplx kappa, std::size_t nodes = 64);

// (1/2pi i) * sum_j f(lambda_j) (lambda_j I - A)^{-1} lambda'_j (2pi/N),
// trapezoid rule on the circle, fixed summation order.
ComplexMatrix holomorphic_calculus(const std::function<cplx(cplx)>& f, const ComplexMatrix& a,
                                   const Contour& contour);

// Log(U + kappa*I), principal branch, node count doubled from the
// certificate's until successive values agree to 1e-10 (cap 1024).
ComplexMatrix shifted_log(const ComplexMatrix& u, const KappaCertificate& cert);

// (1/2pi i) * sum_j Log(lambda_j) R_j dU R_j lambda'_j (2pi/N) with
// R_j = (lambda_j I - U - kappa I)^{-1}; same adaptive node policy.
ComplexMatrix shifted_log_derivative(const ComplexMatrix& u, const ComplexMatrix& du,
                                     const KappaCertificate& cert);

// single-quadrature variant at exactly `nodes` points (no adaptivity); the
// sum is linear in du to roundoff, which the adaptive form cannot promise
ComplexMatrix shifted_log_derivative_fixed(const ComplexMatrix& u, const ComplexMatrix& du,
                                           const KappaCertificate& cert, std::size_t nodes);

// Fault-injection hook for the self test: flips the sign of the quadrature
// weight so Cauchy reproduction must fail loudly. mode: -1 follow the
// OPLOG_MUTATE_QUADRATURE_SIGN environment variable, 0 off, 1 on.
void set_quadrature_sign_mutation(int mode);
bool quadrature_sign_mutated();

}  // namespace oplog

#endif
