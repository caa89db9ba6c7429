#include "oplog/swap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "oplog/errors.hpp"
#include "oplog/linalg.hpp"

namespace oplog {

namespace {

constexpr double kPi = 3.14159265358979323846;
// a slice whose norm passes this is treated as blown up
constexpr double kBlowupNorm = 1e150;

void check_spec(const ProblemSpec& spec) {
    if (spec.n0 < 8 || spec.n1 < 8)
        throw std::invalid_argument("problem spec: need at least 8 points per axis");
    if (!(spec.T > 0.0) || !(spec.L > 0.0))
        throw std::invalid_argument("problem spec: domain half-widths must be positive");
    if (spec.kind == ProblemKind::transport && spec.c == 0.0)
        throw std::invalid_argument("problem spec: transport speed must be nonzero");
    if (spec.kind == ProblemKind::heat && !(spec.nu > 0.0))
        throw std::invalid_argument("problem spec: diffusivity must be positive");
    if (spec.profile == ProfileKind::gaussian && !(spec.width > 0.0))
        throw std::invalid_argument("problem spec: gaussian width must be positive");
}

// periodic central first difference, n points, spacing h
ComplexMatrix central_diff(std::size_t n, double h) {
    ComplexMatrix d(n);
    const double w = 1.0 / (2.0 * h);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, (i + 1) % n) += w;
        d(i, (i + n - 1) % n) -= w;
    }
    return d;
}

// periodic second difference
ComplexMatrix second_diff(std::size_t n, double h) {
    ComplexMatrix d(n);
    const double w = 1.0 / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) -= 2.0 * w;
        d(i, (i + 1) % n) += w;
        d(i, (i + n - 1) % n) += w;
    }
    return d;
}

GridAxis axis0_of(const ProblemSpec& spec) { return {-spec.T, spec.T, spec.n0}; }
GridAxis axis1_of(const ProblemSpec& spec) { return {-spec.L, spec.L, spec.n1}; }

GeneratorFamily constant_family(ComplexMatrix k, double lo, double hi) {
    GeneratorFamily gen;
    gen.dim = k.dim();
    gen.lo = lo;
    gen.hi = hi;
    gen.commuting_flag = true;
    gen.autonomous = true;
    gen.eval = [mat = std::move(k)](double) { return mat; };
    return gen;
}

double max_real_eig(const ComplexMatrix& k) {
    double a = -std::numeric_limits<double>::infinity();
    for (const cplx& l : eigenvalues(k).eigenvalues) a = std::max(a, l.real());
    return a;
}

}  // namespace

bool SpaceTimeField::is_finite() const { return vec_is_finite(values_); }

SpaceTimeField SpaceTimeField::transpose() const {
    SpaceTimeField t(axis1_, axis0_, provenance_);
    for (std::size_t i = 0; i < axis0_.n; ++i)
        for (std::size_t j = 0; j < axis1_.n; ++j) t.at(j, i) = at(i, j);
    return t;
}

cplx profile_value(const ProblemSpec& spec, double xi) {
    const double span = 2.0 * spec.L;
    const double wrapped = xi - span * std::floor((xi + spec.L) / span);
    if (spec.profile == ProfileKind::fourier_mode) {
        const double phase = kPi * static_cast<double>(spec.mode) * wrapped / spec.L;
        return {std::cos(phase), std::sin(phase)};
    }
    // periodized gaussian; three images per side push the seam defect to
    // the order of exp(-(4L/width)^2)
    double s = 0.0;
    for (int m = -3; m <= 3; ++m) {
        const double z = (wrapped + span * static_cast<double>(m)) / spec.width;
        s += std::exp(-z * z);
    }
    return {s, 0.0};
}

GeneratorFamily discretize(const ProblemSpec& spec, int direction) {
    check_spec(spec);
    if (direction != 0 && direction != 1)
        throw UnsupportedDirection("discretize: direction must be 0 or 1");
    const GridAxis a0 = axis0_of(spec);
    const GridAxis a1 = axis1_of(spec);
    if (direction == 0) {
        // evolution in x0 over the x1 function space; the march covers the
        // n0 stored slices, hence n0 - 1 steps
        const double lo = a0.lo;
        const double hi = a0.lo + static_cast<double>(spec.n0 - 1) * a0.step();
        ComplexMatrix k = (spec.kind == ProblemKind::transport)
                              ? central_diff(spec.n1, a1.step())
                              : second_diff(spec.n1, a1.step());
        k *= (spec.kind == ProblemKind::transport) ? cplx{spec.c, 0.0} : cplx{spec.nu, 0.0};
        return constant_family(std::move(k), lo, hi);
    }
    const double lo = a1.lo;
    const double hi = a1.lo + static_cast<double>(spec.n1 - 1) * a1.step();
    if (spec.kind == ProblemKind::transport) {
        ComplexMatrix k = central_diff(spec.n0, a0.step());
        k *= cplx{1.0 / spec.c, 0.0};
        return constant_family(std::move(k), lo, hi);
    }
    // sideways heat equation as a first-order system in x on (u, du/dx)
    const ComplexMatrix dt = central_diff(spec.n0, a0.step());
    const std::size_t n = spec.n0;
    ComplexMatrix k(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, n + i) = 1.0;
        for (std::size_t j = 0; j < n; ++j) k(n + i, j) = dt(i, j) / spec.nu;
    }
    return constant_family(std::move(k), lo, hi);
}

DirectionReport illposedness_indicator(const ProblemSpec& spec, int direction) {
    check_spec(spec);
    if (direction != 0 && direction != 1)
        throw UnsupportedDirection("illposedness_indicator: direction must be 0 or 1");
    const bool block = (direction == 1 && spec.kind == ProblemKind::heat);
    // keep 4m (respectively 2*4m for the block system) within the
    // eigensolver's size cap
    const std::size_t cap = block ? 32 : 64;
    const std::size_t base = (direction == 0) ? spec.n1 : spec.n0;
    const std::size_t m = std::max<std::size_t>(8, std::min(base, cap));

    DirectionReport rep;
    for (std::size_t s : {m, 2 * m, 4 * m}) {
        ProblemSpec probe = spec;
        (direction == 0 ? probe.n1 : probe.n0) = s;
        const GeneratorFamily gen = discretize(probe, direction);
        rep.abscissa_trend.emplace_back(s, max_real_eig(gen.eval(gen.lo)));
    }
    const double first = rep.abscissa_trend.front().second;
    const double last = rep.abscissa_trend.back().second;
    rep.wellposed = (last - first) <= 0.1 * std::abs(first) + 1.0;

    const GeneratorFamily own = discretize(spec, direction);
    rep.spectral_abscissa =
        (own.dim <= 256) ? max_real_eig(own.eval(own.lo)) : last;
    rep.growth_bound = rep.spectral_abscissa;
    return rep;
}

SpaceTimeField exact_field(const ProblemSpec& spec) {
    check_spec(spec);
    if (spec.kind != ProblemKind::transport)
        throw std::invalid_argument("exact_field: closed form available for transport only");
    const GridAxis a0 = axis0_of(spec);
    const GridAxis a1 = axis1_of(spec);
    SpaceTimeField f(a0, a1, Provenance::exact);
    for (std::size_t i = 0; i < a0.n; ++i)
        for (std::size_t j = 0; j < a1.n; ++j)
            f.at(i, j) = profile_value(spec, a1.point(j) + spec.c * a0.point(i));
    return f;
}

namespace {

// marches the state across the rectangle; writer(step_index, state) stores
// each slice, starting with the initial one at index 0
template <typename Writer>
void march(const PropagatorGrid& grid, std::vector<cplx> state, const GridAxis& sweep_axis,
           const GridAxis& cross_axis, Writer&& write) {
    write(0, state);
    for (std::size_t s = 0; s < grid.steps(); ++s) {
        state = grid.one_step(s).apply(state);
        const double norm = vec_norm(state);
        if (!vec_is_finite(state) || norm > kBlowupNorm) {
            Overflow err("evolution blew up during the sweep");
            err.has_coordinate = true;
            err.index1 = s + 1;
            err.x1 = sweep_axis.point(s + 1);
            std::size_t worst = 0;
            double best = -1.0;
            for (std::size_t i = 0; i < state.size(); ++i) {
                const double v = std::abs(state[i]);
                if (std::isnan(v) || v > best) {
                    best = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
                    worst = i;
                }
            }
            err.index0 = worst % cross_axis.n;
            err.x0 = cross_axis.point(err.index0);
            throw err;
        }
        write(s + 1, state);
    }
}

}  // namespace

SpaceTimeField solve_direction(const ProblemSpec& spec, int direction, bool override_illposed,
                               const DirectionReport* report) {
    check_spec(spec);
    DirectionReport local;
    if (report == nullptr) {
        local = illposedness_indicator(spec, direction);
        report = &local;
    }
    if (!report->wellposed && !override_illposed)
        throw IllPosedDirection("direction " + std::to_string(direction) +
                                " failed the abscissa refinement test");

    const GridAxis a0 = axis0_of(spec);
    const GridAxis a1 = axis1_of(spec);
    const GeneratorFamily gen = discretize(spec, direction);

    if (direction == 0) {
        const PropagatorGrid grid = build_family(gen, spec.n0 - 1, Scheme::midpoint_exp);
        std::vector<cplx> state(spec.n1);
        for (std::size_t j = 0; j < spec.n1; ++j) {
            const double x1 = a1.point(j);
            state[j] = (spec.kind == ProblemKind::transport)
                           ? profile_value(spec, x1 + spec.c * a0.lo)
                           : profile_value(spec, x1);
        }
        SpaceTimeField f(a0, a1, Provenance::evolved_in_x0);
        march(grid, std::move(state), a0, a1, [&](std::size_t i, const std::vector<cplx>& row) {
            for (std::size_t j = 0; j < spec.n1; ++j) f.at(i, j) = row[j];
        });
        return f;
    }

    const PropagatorGrid grid = build_family(gen, spec.n1 - 1, Scheme::midpoint_exp);
    std::vector<cplx> state(gen.dim);
    if (spec.kind == ProblemKind::transport) {
        for (std::size_t i = 0; i < spec.n0; ++i)
            state[i] = profile_value(spec, a1.lo + spec.c * a0.point(i));
    } else {
        // trace of the direction-0 solution on the x1 = -L line, plus the
        // spatial-derivative trace for the system state
        const SpaceTimeField base = solve_direction(spec, 0);
        const double h1 = a1.step();
        for (std::size_t i = 0; i < spec.n0; ++i) {
            state[i] = base.at(i, 0);
            state[spec.n0 + i] =
                (base.at(i, 1) - base.at(i, spec.n1 - 1)) / (2.0 * h1);
        }
    }
    SpaceTimeField f(a0, a1, Provenance::evolved_in_x1);
    march(grid, std::move(state), a1, a0, [&](std::size_t j, const std::vector<cplx>& col) {
        for (std::size_t i = 0; i < spec.n0; ++i) f.at(i, j) = col[i];
    });
    return f;
}

double compare_directions(const SpaceTimeField& f0, const SpaceTimeField& f1) {
    if (!(f0.axis0() == f1.axis0()) || !(f0.axis1() == f1.axis1()))
        throw GridMismatch("compare_directions: fields live on different grids");
    const std::size_t n0 = f0.axis0().n, n1 = f0.axis1().n;
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j) {
            diff += std::norm(f0.at(i, j) - f1.at(i, j));
            ref += std::norm(f0.at(i, j));
        }
    // periodic grids carry uniform quadrature weights, which cancel in the
    // relative value
    return std::sqrt(diff) / std::max(std::sqrt(ref), 1e-300);
}

ResliceReport reslice_discrete_trajectory(const SpaceTimeField& field) {
    const std::size_t n0 = field.axis0().n, n1 = field.axis1().n;
    const double h0 = field.axis0().step(), h1 = field.axis1().step();
    ResliceReport rep;
    for (std::size_t i = 0; i + 1 < n0; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n1; ++j) s += std::norm(field.at(i + 1, j) - field.at(i, j));
        rep.modulus_x0 = std::max(rep.modulus_x0, std::sqrt(s * h1) / h0);
    }
    for (std::size_t j = 0; j + 1 < n1; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n0; ++i) s += std::norm(field.at(i, j + 1) - field.at(i, j));
        rep.modulus_x1 = std::max(rep.modulus_x1, std::sqrt(s * h0) / h1);
    }
    return rep;
}

}  // namespace oplog
