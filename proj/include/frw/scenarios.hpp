#pragma once

#include <iosfwd>

#include "frw/config.hpp"

namespace frw {

// Runs the configured scenario, writing its artifacts under cfg.out_dir and
// a human-readable summary to log. Returns the process exit code: 0 for
// success, 2 for a shock-guard stop (the expected outcome of shock runs).
// Faults are reported by exception.
int execute(const RunConfig& cfg, std::ostream& log);

}  // namespace frw
