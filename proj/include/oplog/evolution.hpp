#ifndef OPLOG_EVOLUTION_HPP
#define OPLOG_EVOLUTION_HPP

// Two-parameter evolution families built from generator families, the
// logarithmic representation of the generator in both its forms (the general
// forward identity and the inverse-based variant that needs an invertible
// propagator), and the regularized trajectory.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "oplog/complex_matrix.hpp"
#include "oplog/contour.hpp"
#include "oplog/errors.hpp"

namespace oplog {

struct GeneratorFamily {
    std::size_t dim = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::function<ComplexMatrix(double)> eval;
    bool commuting_flag = false;
    // constant in the evolution parameter; lets the builder reuse one step
    bool autonomous = false;
};

enum class Scheme { midpoint_exp, cf4 };

// U(t,s) stored as M composable one-step propagators on a uniform grid.
class PropagatorGrid {
public:
    const GeneratorFamily& generator() const { return gen_; }
    std::size_t steps() const { return m_; }
    double step_size() const { return h_; }
    double point(std::size_t j) const { return gen_.lo + static_cast<double>(j) * h_; }
    Scheme scheme() const { return scheme_; }
    // U(x_{j+1}, x_j)
    const ComplexMatrix& one_step(std::size_t j) const {
        return shared_ ? steps_[0] : steps_[j];
    }

private:
    friend PropagatorGrid build_family(const GeneratorFamily&, std::size_t, Scheme);
    GeneratorFamily gen_;
    std::size_t m_ = 0;
    double h_ = 0.0;
    Scheme scheme_ = Scheme::midpoint_exp;
    std::vector<ComplexMatrix> steps_;
    bool shared_ = false;
};

PropagatorGrid build_family(const GeneratorFamily& gen, std::size_t m, Scheme scheme);

// U(x_j, x_k): forward composition for j >= k; for j < k the inverse of the
// composed forward product, which throws BackwardNotAvailable at the pivot
// threshold.
ComplexMatrix propagator(const PropagatorGrid& grid, std::size_t j, std::size_t k);

// one-sided difference quotient (U(x_j + h_fd, x_j) - I)/h_fd;
// h_fd must be a positive integer multiple of the grid step
ComplexMatrix pre_generator_fd(const PropagatorGrid& grid, std::size_t j, double h_fd);

struct RepresentationReport {
    // relative size of D - F K with D the contour derivative of the shifted
    // log and F = I - kappa (U + kappa I)^{-1}
    double forward_residual = 0.0;
    double factor_condition = 0.0;
    double commutator = 0.0;
    std::optional<double> recovery_residual;   // |F^{-1} D - K| / |K|, when F invertible
    std::optional<double> eq5_agreement;       // vs (I + kappa U^{-1}) D, when U invertible
    std::optional<double> derivative_agreement;  // contour D vs finite-difference D
};

// Raised when the recovery factor F has a kernel (exactly when U does). The
// partial report still carries the forward residual and a finite condition
// estimate.
class RepresentationNotInvertible : public Error {
public:
    RepresentationNotInvertible(const std::string& what, RepresentationReport partial)
        : Error("RepresentationNotInvertible", what), report_(std::move(partial)) {}
    const RepresentationReport& report() const noexcept { return report_; }

private:
    RepresentationReport report_;
};

// Full report for U = propagator(j,k) with K evaluated at x_j; includes the
// finite-difference cross-check and the inverse-based agreement when the
// grid admits them.
RepresentationReport log_representation(const PropagatorGrid& grid, std::size_t j,
                                        std::size_t k, const KappaCertificate& cert);

// Standalone variant for a single matrix pair (no grid, so no
// finite-difference or inverse-based columns).
RepresentationReport log_representation(const ComplexMatrix& u, const ComplexMatrix& k,
                                        const KappaCertificate& cert);

// (I + kappa U(s,t)) d/dt Log(U(t,s) + kappa I), the representation that
// requires the backward propagator.
ComplexMatrix representation_eq5(const PropagatorGrid& grid, std::size_t j, std::size_t k,
                                 const KappaCertificate& cert);

// (exp(Log(U(x_j,x_k) + kappa I)) - kappa I) u0 for every j >= k.
std::vector<std::pair<double, std::vector<cplx>>> regularized_trajectory(
    const PropagatorGrid& grid, std::size_t k, const KappaCertificate& cert,
    const std::vector<cplx>& u0);

// Certificate sized for the whole sweep U(x_j, x_k), j = k..M: the shift is
// taken from the largest norm estimate along the sweep, so one contour serves
// every propagator the trajectory and the representation reports touch.
KappaCertificate sweep_certificate(const PropagatorGrid& grid, std::size_t k,
                                   std::size_t nodes = 64);

}  // namespace oplog

#endif
