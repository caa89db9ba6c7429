#include "oplog/presets.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "oplog/errors.hpp"
#include "oplog/linalg.hpp"

namespace oplog::presets {

namespace {

ComplexMatrix random_unit_norm(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("preset: dimension must be positive");
    SplitMix64 rng(seed);
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n * n; ++i)
        a.data()[i] = {rng.symmetric(), rng.symmetric()};
    const double s = operator_norm_estimate(a);
    if (s > 0.0) a *= 1.0 / s;
    return a;
}

}  // namespace

GeneratorFamily constant(std::size_t n, std::uint64_t seed) {
    GeneratorFamily gen;
    gen.dim = n;
    gen.lo = 0.0;
    gen.hi = 1.0;
    gen.commuting_flag = true;
    gen.autonomous = true;
    gen.eval = [a = random_unit_norm(n, seed)](double) { return a; };
    return gen;
}

GeneratorFamily scaled(std::size_t n, std::uint64_t seed) {
    GeneratorFamily gen;
    gen.dim = n;
    gen.lo = 0.0;
    gen.hi = 1.0;
    gen.commuting_flag = true;
    gen.eval = [a = random_unit_norm(n, seed)](double x) {
        ComplexMatrix k(a);
        k *= cplx{1.0 + 0.5 * std::sin(x), 0.0};
        return k;
    };
    return gen;
}

GeneratorFamily stiff_heat() {
    const std::size_t n = 16;
    const double nu = 0.2;
    const double h = 2.0 / static_cast<double>(n);  // grid on [-1, 1), periodic
    const double w = nu / (h * h);
    ComplexMatrix k(n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = -2.0 * w;
        k(i, (i + 1) % n) += w;
        k(i, (i + n - 1) % n) += w;
    }
    GeneratorFamily gen;
    gen.dim = n;
    gen.lo = 0.0;
    gen.hi = 1.0;
    gen.commuting_flag = true;
    gen.autonomous = true;
    gen.eval = [mat = std::move(k)](double) { return mat; };
    return gen;
}

GeneratorFamily noncommuting(std::size_t n, std::uint64_t seed) {
    GeneratorFamily gen;
    gen.dim = n;
    gen.lo = 0.0;
    gen.hi = 1.0;
    gen.commuting_flag = false;
    gen.eval = [a = random_unit_norm(n, seed),
                b = random_unit_norm(n, seed ^ 0xA5A5A5A5A5A5A5A5ull)](double x) {
        ComplexMatrix k(b);
        k *= cplx{x, 0.0};
        k += a;
        return k;
    };
    return gen;
}

GeneratorFamily by_name(const std::string& name, std::size_t n, std::uint64_t seed) {
    if (name == "constant") return constant(n, seed);
    if (name == "scaled") return scaled(n, seed);
    if (name == "stiff_heat") return stiff_heat();
    if (name == "noncommuting") return noncommuting(n, seed);
    throw ConfigError("unknown generator preset: " + name);
}

}  // namespace oplog::presets
