#ifndef OPLOG_SWAP_HPP
#define OPLOG_SWAP_HPP

// One 1+1-dimensional evolution problem solved along either coordinate
// direction: generators for both slicings, well-posedness screening via the
// spectral abscissa trend under grid refinement, field comparison, and the
// discrete-trajectory reslicing diagnostics.

#include <cstddef>
#include <utility>
#include <vector>

#include "oplog/complex_matrix.hpp"
#include "oplog/evolution.hpp"

namespace oplog {

enum class ProblemKind { transport, heat };
enum class ProfileKind { gaussian, fourier_mode };
enum class Provenance { evolved_in_x0, evolved_in_x1, exact };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::transport;
    double c = 1.0;    // transport speed
    double nu = 0.02;  // diffusivity
    double T = 1.0;    // x0 runs over [-T, T]
    double L = 1.0;    // x1 runs over [-L, L]
    std::size_t n0 = 128;
    std::size_t n1 = 128;
    ProfileKind profile = ProfileKind::gaussian;
    int mode = 1;        // fourier_mode wavenumber
    double width = 0.35; // gaussian width
};

// n equispaced points on [lo, hi), periodic convention
struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
    double step() const { return (hi - lo) / static_cast<double>(n); }
    double point(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
    bool operator==(const GridAxis& o) const { return lo == o.lo && hi == o.hi && n == o.n; }
};

class SpaceTimeField {
public:
    SpaceTimeField() = default;
    SpaceTimeField(GridAxis a0, GridAxis a1, Provenance p)
        : axis0_(a0), axis1_(a1), provenance_(p), values_(a0.n * a1.n) {}

    const GridAxis& axis0() const { return axis0_; }
    const GridAxis& axis1() const { return axis1_; }
    Provenance provenance() const { return provenance_; }

    cplx& at(std::size_t i, std::size_t j) { return values_[i * axis1_.n + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return values_[i * axis1_.n + j]; }

    bool is_finite() const;
    SpaceTimeField transpose() const;

private:
    GridAxis axis0_;
    GridAxis axis1_;
    Provenance provenance_ = Provenance::exact;
    std::vector<cplx> values_;
};

struct DirectionReport {
    double spectral_abscissa = 0.0;
    std::vector<std::pair<std::size_t, double>> abscissa_trend;
    bool wellposed = true;
    double growth_bound = 0.0;
};

struct ResliceReport {
    // max over consecutive slices of (L2 slice difference) / (axis step)
    double modulus_x0 = 0.0;
    double modulus_x1 = 0.0;
};

// the periodized initial profile g
cplx profile_value(const ProblemSpec& spec, double xi);

// direction 0: generator on the x1 function space (transport c*Dx, heat
// nu*Dxx). direction 1: generator on the x0 function space (transport
// (1/c)*Dt; heat the first-order system [[0,I],[Dt/nu,0]] on (u, du/dx),
// dimension 2*n0). All families are constant in the evolution parameter.
GeneratorFamily discretize(const ProblemSpec& spec, int direction);

// spectral abscissa of the direction generator at axis sizes {m, 2m, 4m};
// wellposed when the abscissa does not grow beyond slack under refinement
DirectionReport illposedness_indicator(const ProblemSpec& spec, int direction);

// characteristics solution of the transport problem on the full grid
SpaceTimeField exact_field(const ProblemSpec& spec);

// evolves the initial slice across the rectangle along the given direction;
// `report` may carry a precomputed indicator for this (spec, direction)
SpaceTimeField solve_direction(const ProblemSpec& spec, int direction,
                               bool override_illposed = false,
                               const DirectionReport* report = nullptr);

// relative L2 difference over the rectangle
double compare_directions(const SpaceTimeField& f0, const SpaceTimeField& f1);

ResliceReport reslice_discrete_trajectory(const SpaceTimeField& field);

}  // namespace oplog

#endif
