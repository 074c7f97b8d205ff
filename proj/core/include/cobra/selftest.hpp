#pragma once

#include <cstdint>
#include <ostream>

#include "cobra/invariants.hpp"

namespace cobra {

// Quick invariant suites behind `cobra selftest`: pull-distribution structure
// over random leader trajectories, per-epoch snapshot checks on short runs
// that exercise deactivation, null-adversary accounting and determinism.
// Prints one line per suite.
InvariantReport run_selftest(std::ostream& out, std::uint64_t seed = 1);

}  // namespace cobra
