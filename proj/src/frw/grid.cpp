#include "frw/grid.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace frw {

Grid make_grid(std::array<std::int64_t, 3> dims, std::array<double, 3> lengths) {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 1)
            throw std::invalid_argument("grid dimension must be >= 1, got " +
                                        std::to_string(dims[a]));
        if (!(lengths[a] > 0.0))
            throw std::invalid_argument("box length must be positive, got " +
                                        std::to_string(lengths[a]));
    }
    return Grid{dims, lengths};
}

Field make_field(const Grid& g, double fill) {
    return Field(static_cast<std::size_t>(g.size()), fill);
}

int thread_count() {
    const char* env = std::getenv("FRW_EULER_THREADS");
    if (env == nullptr) return 1;
    int n = std::atoi(env);
    if (n < 1) return 1;
    return n;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& body) {
    int workers = thread_count();
    if (workers <= 1 || n < 2 * workers) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::int64_t lo = w * chunk;
        std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace frw
