#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace frw {

using Field = std::vector<double>;

// Periodic rectangular lattice. Any dimension may collapse to a single
// plane (n = 1), in which case derivatives along that axis vanish.
struct Grid {
    std::array<std::int64_t, 3> dims;
    std::array<double, 3> lengths;

    std::int64_t size() const { return dims[0] * dims[1] * dims[2]; }

    std::int64_t index(std::int64_t i, std::int64_t j, std::int64_t k) const {
        return (i * dims[1] + j) * dims[2] + k;
    }

    double spacing(int axis) const {
        return lengths[axis] / static_cast<double>(dims[axis]);
    }

    // Coordinate of lattice site i along the given axis, measured from 0.
    double coordinate(int axis, std::int64_t i) const {
        return spacing(axis) * static_cast<double>(i);
    }

    bool active(int axis) const { return dims[axis] > 1; }

    double cell_volume() const {
        return spacing(0) * spacing(1) * spacing(2);
    }

    bool operator==(const Grid&) const = default;
};

Grid make_grid(std::array<std::int64_t, 3> dims, std::array<double, 3> lengths);

Field make_field(const Grid& g, double fill = 0.0);

// Number of worker threads, controlled by FRW_EULER_THREADS (default 1).
int thread_count();

// Splits [0, n) into contiguous slabs, one per worker. The body must be a
// pure map over disjoint indices; reductions stay serial so that results
// do not depend on the thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace frw
