#pragma once

#include "degenkit/io.hpp"

#include <cstdint>

namespace degenkit {

/// Runs the brute-force oracle suites on seeded random instances: Hilbert
/// bases and dual cones of `cones` random cones, the dual sum identity on
/// `pairs` random polytope pairs, boxast region counts and JSON round trips.
/// The result carries per-suite counts, the first failing input and "pass".
io::Json runSelftest(std::uint64_t seed, std::size_t cones = 50, std::size_t pairs = 200);

} // namespace degenkit
