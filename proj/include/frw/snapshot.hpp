#pragma once

#include <string>

#include "frw/fluid_state.hpp"

namespace frw {

// Binary state file: text header `FRWEULER v1 n1 n2 n3 l1 l2 l3 t c2`
// followed by the four arrays (L, u1, u2, u3) as little-endian binary64,
// row-major with the third axis fastest.
void write_snapshot(const std::string& path, const FluidState& state, double c2);

struct Snapshot {
    FluidState state;
    double c2;
};

Snapshot read_snapshot(const std::string& path);

}  // namespace frw
