#ifndef OPLOG_PRESETS_HPP
#define OPLOG_PRESETS_HPP

// Named generator families used by the command line and the self test.

#include <cstdint>
#include <string>

#include "oplog/evolution.hpp"

namespace oplog::presets {

// K(x) = A, a fixed random matrix scaled to unit operator norm
GeneratorFamily constant(std::size_t n, std::uint64_t seed);

// K(x) = (1 + sin(x)/2) A, commuting but not autonomous
GeneratorFamily scaled(std::size_t n, std::uint64_t seed);

// K = nu * (periodic second difference), sized so the propagator over [0,1]
// is numerically singular while every one-step factor is benign
GeneratorFamily stiff_heat();

// K(x) = A + x B with [A, B] != 0; commuting_flag deliberately false
GeneratorFamily noncommuting(std::size_t n, std::uint64_t seed);

// dispatch on the names accepted in config files:
// constant | scaled | stiff_heat | noncommuting
GeneratorFamily by_name(const std::string& name, std::size_t n, std::uint64_t seed);

}  // namespace oplog::presets

#endif
