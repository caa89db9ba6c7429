#include "oplog/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "oplog/linalg.hpp"

namespace oplog {

namespace {

ComplexMatrix checked_eval(const GeneratorFamily& gen, double x) {
    ComplexMatrix k = gen.eval(x);
    if (k.dim() != gen.dim || !k.is_finite())
        throw std::invalid_argument("generator family produced a bad matrix");
    return k;
}

}  // namespace

PropagatorGrid build_family(const GeneratorFamily& gen, std::size_t m, Scheme scheme) {
    if (gen.dim == 0 || !gen.eval) throw std::invalid_argument("build_family: empty family");
    if (!(gen.hi > gen.lo)) throw std::invalid_argument("build_family: empty domain");
    if (m < 2) throw std::invalid_argument("build_family: need at least 2 steps");

    PropagatorGrid grid;
    grid.gen_ = gen;
    grid.m_ = m;
    grid.h_ = (gen.hi - gen.lo) / static_cast<double>(m);
    grid.scheme_ = scheme;
    const double h = grid.h_;

    // Gauss nodes and exponent weights of the two-exponential fourth-order
    // commutator-free scheme; the left factor weights the later node.
    const double root3 = std::sqrt(3.0);
    const double c1 = 0.5 - root3 / 6.0;
    const double c2 = 0.5 + root3 / 6.0;
    const double a1 = (3.0 - 2.0 * root3) / 12.0;
    const double a2 = (3.0 + 2.0 * root3) / 12.0;

    const auto step_at = [&](double x) {
        if (scheme == Scheme::midpoint_exp) {
            ComplexMatrix k = checked_eval(gen, x + 0.5 * h);
            k *= h;
            return matrix_exp(k);
        }
        const ComplexMatrix k1 = checked_eval(gen, x + c1 * h);
        const ComplexMatrix k2 = checked_eval(gen, x + c2 * h);
        ComplexMatrix left(k1);
        left *= a1;
        ComplexMatrix right(k1);
        right *= a2;
        {
            ComplexMatrix t(k2);
            t *= a2;
            left += t;
        }
        {
            ComplexMatrix t(k2);
            t *= a1;
            right += t;
        }
        left *= h;
        right *= h;
        return matrix_exp(left) * matrix_exp(right);
    };

    if (gen.autonomous) {
        grid.shared_ = true;
        grid.steps_.push_back(step_at(gen.lo));
    } else {
        grid.steps_.reserve(m);
        for (std::size_t j = 0; j < m; ++j)
            grid.steps_.push_back(step_at(gen.lo + static_cast<double>(j) * h));
    }
    return grid;
}

ComplexMatrix propagator(const PropagatorGrid& grid, std::size_t j, std::size_t k) {
    const std::size_t m = grid.steps();
    if (j > m || k > m) throw OutOfDomain("propagator: index beyond the grid");
    if (j == k) return ComplexMatrix::identity(grid.generator().dim);
    if (j > k) {
        ComplexMatrix acc = grid.one_step(k);
        for (std::size_t s = k + 1; s < j; ++s) acc = grid.one_step(s) * acc;
        return acc;
    }
    const ComplexMatrix fwd = propagator(grid, k, j);
    try {
        return LuFactors(fwd).inverse();
    } catch (const SingularMatrix& e) {
        throw BackwardNotAvailable(std::string("backward propagator singular: ") + e.what());
    }
}

ComplexMatrix pre_generator_fd(const PropagatorGrid& grid, std::size_t j, double h_fd) {
    const double h = grid.step_size();
    if (!(h_fd > 0.0)) throw OutOfDomain("pre_generator_fd: h_fd must be positive");
    const double ratio = h_fd / h;
    const auto off = static_cast<std::size_t>(std::llround(ratio));
    if (off == 0 || std::abs(ratio - static_cast<double>(off)) > 1e-9 * ratio)
        throw OutOfDomain("pre_generator_fd: h_fd is not a grid-step multiple");
    if (j + off > grid.steps())
        throw OutOfDomain("pre_generator_fd: stencil leaves the grid");
    ComplexMatrix q = propagator(grid, j + off, j);
    q.shift_diagonal(-1.0);
    q *= 1.0 / h_fd;
    return q;
}

namespace {

// Finite-difference value of d/dt Log(U(t, x_k) + kappa I) at t = x_j,
// Richardson-extrapolated central stencil when the grid has room, one-sided
// second-order at the ends, absent on grids too short for either.
std::optional<ComplexMatrix> fd_log_derivative(const PropagatorGrid& grid, std::size_t j,
                                               std::size_t k, const KappaCertificate& cert) {
    const double h = grid.step_size();
    const std::size_t m = grid.steps();
    const auto lg = [&](std::size_t idx) {
        return shifted_log(propagator(grid, idx, k), cert);
    };
    if (j >= k + 2 && j + 2 <= m) {
        ComplexMatrix d1 = lg(j + 1) - lg(j - 1);
        d1 *= 1.0 / (2.0 * h);
        ComplexMatrix d2 = lg(j + 2) - lg(j - 2);
        d2 *= 1.0 / (4.0 * h);
        d1 *= 4.0 / 3.0;
        d2 *= 1.0 / 3.0;
        return d1 - d2;
    }
    if (j >= k + 1 && j + 1 <= m) {
        ComplexMatrix d = lg(j + 1) - lg(j - 1);
        d *= 1.0 / (2.0 * h);
        return d;
    }
    if (j == k && j + 2 <= m) {
        ComplexMatrix d = lg(j);
        d *= -3.0;
        ComplexMatrix t = lg(j + 1);
        t *= 4.0;
        d += t;
        d -= lg(j + 2);
        d *= 1.0 / (2.0 * h);
        return d;
    }
    if (j == m && j >= k + 2) {
        ComplexMatrix d = lg(j);
        d *= 3.0;
        ComplexMatrix t = lg(j - 1);
        t *= 4.0;
        d -= t;
        d += lg(j - 2);
        d *= 1.0 / (2.0 * h);
        return d;
    }
    return std::nullopt;
}

RepresentationReport assemble_report(const ComplexMatrix& u, const ComplexMatrix& kmat,
                                     const KappaCertificate& cert,
                                     const std::optional<ComplexMatrix>& d_fd) {
    const ComplexMatrix d = shifted_log_derivative(u, kmat * u, cert);

    ComplexMatrix shifted(u);
    shifted.shift_diagonal(cert.kappa);
    const ComplexMatrix shifted_inv = LuFactors(shifted).inverse();
    ComplexMatrix f(shifted_inv);
    f *= -cert.kappa;
    f.shift_diagonal(1.0);  // F = I - kappa (U + kappa I)^{-1}

    const double knorm = std::max(operator_norm_estimate(kmat), 1e-300);
    RepresentationReport rep;
    rep.forward_residual = operator_norm_estimate(d - f * kmat) / knorm;
    rep.commutator = commutator_residual(u, kmat);
    if (d_fd) rep.derivative_agreement = operator_norm_estimate(d - *d_fd) / knorm;

    double failing_pivot = -1.0;
    std::optional<LuFactors> luf;
    try {
        luf.emplace(f);
    } catch (const SingularMatrix& e) {
        failing_pivot = e.pivot();
    }
    if (!luf) {
        rep.factor_condition =
            operator_norm_estimate(f) / std::max(failing_pivot, 1e-300);
        throw RepresentationNotInvertible(
            "recovery factor singular at the pivot threshold", rep);
    }
    rep.factor_condition = operator_norm_estimate(f) * operator_norm_estimate(luf->inverse());
    if (rep.factor_condition < 1e12) {
        const ComplexMatrix rec = luf->solve(d);
        rep.recovery_residual = operator_norm_estimate(rec - kmat) / knorm;
        // inverse-based form (I + kappa U^{-1}) D, available only when U
        // itself admits a backward solve
        try {
            ComplexMatrix back = LuFactors(u).inverse();
            back *= cert.kappa;
            back.shift_diagonal(1.0);
            rep.eq5_agreement = operator_norm_estimate(back * d - rec) / knorm;
        } catch (const SingularMatrix&) {
            // eq5_agreement stays absent
        }
    }
    return rep;
}

}  // namespace

RepresentationReport log_representation(const PropagatorGrid& grid, std::size_t j,
                                        std::size_t k, const KappaCertificate& cert) {
    if (j < k) throw OutOfDomain("log_representation: j < k");
    const ComplexMatrix u = propagator(grid, j, k);
    const ComplexMatrix kj = checked_eval(grid.generator(), grid.point(j));
    return assemble_report(u, kj, cert, fd_log_derivative(grid, j, k, cert));
}

RepresentationReport log_representation(const ComplexMatrix& u, const ComplexMatrix& k,
                                        const KappaCertificate& cert) {
    if (u.dim() != k.dim()) throw std::invalid_argument("log_representation: dim mismatch");
    return assemble_report(u, k, cert, std::nullopt);
}

ComplexMatrix representation_eq5(const PropagatorGrid& grid, std::size_t j, std::size_t k,
                                 const KappaCertificate& cert) {
    if (j < k) throw OutOfDomain("representation_eq5: j < k");
    const ComplexMatrix u = propagator(grid, j, k);
    ComplexMatrix back = propagator(grid, k, j);  // throws BackwardNotAvailable
    const ComplexMatrix kj = checked_eval(grid.generator(), grid.point(j));
    const ComplexMatrix d = shifted_log_derivative(u, kj * u, cert);
    back *= cert.kappa;
    back.shift_diagonal(1.0);
    return back * d;
}

std::vector<std::pair<double, std::vector<cplx>>> regularized_trajectory(
    const PropagatorGrid& grid, std::size_t k, const KappaCertificate& cert,
    const std::vector<cplx>& u0) {
    if (k > grid.steps()) throw OutOfDomain("regularized_trajectory: start beyond the grid");
    if (u0.size() != grid.generator().dim)
        throw std::invalid_argument("regularized_trajectory: state size mismatch");
    std::vector<std::pair<double, std::vector<cplx>>> out;
    out.reserve(grid.steps() - k + 1);
    for (std::size_t j = k; j <= grid.steps(); ++j) {
        const ComplexMatrix u = propagator(grid, j, k);
        ComplexMatrix e;
        try {
            e = matrix_exp(shifted_log(u, cert));
        } catch (const CertificateFailed& ex) {
            throw CertificateFailed(ex.what(), static_cast<long>(j));
        }
        e.shift_diagonal(-cert.kappa);
        out.emplace_back(grid.point(j), e.apply(u0));
    }
    return out;
}

KappaCertificate sweep_certificate(const PropagatorGrid& grid, std::size_t k,
                                   std::size_t nodes) {
    if (k > grid.steps()) throw OutOfDomain("sweep_certificate: start beyond the grid");
    const std::size_t n = grid.generator().dim;
    ComplexMatrix acc = ComplexMatrix::identity(n);
    double r = operator_norm_estimate(acc);
    for (std::size_t j = k; j < grid.steps(); ++j) {
        acc = grid.one_step(j) * acc;
        r = std::max(r, operator_norm_estimate(acc));
    }
    KappaCertificate cert;
    cert.kappa = cplx{2.0 * r + 1.0, 0.0};
    cert.norm_bound = r;
    cert.contour = Contour{cert.kappa, r + 0.5, nodes};
    // every |eig(U)| is below the norm bound, so the circle keeps at least
    // this much clearance
    cert.spectral_margin = 0.5;
    return cert;
}

}  // namespace oplog
