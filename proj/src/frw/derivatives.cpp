#include "frw/derivatives.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace frw {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Spectral: return "spectral";
        case Scheme::Central4: return "central-4";
        case Scheme::Central2: return "central-2";
    }
    return "spectral";
}

namespace {

// One cached complex-to-complex transform pair per grid shape. FFTW plan
// creation is not thread-safe and planning dominates small transforms, so
// plans and scratch buffers are built once and reused under a lock.
struct SpectralEngine {
    std::array<std::int64_t, 3> dims;
    std::int64_t n = 0;
    fftw_complex* in = nullptr;
    fftw_complex* spec = nullptr;
    fftw_complex* work = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit SpectralEngine(const std::array<std::int64_t, 3>& d) : dims(d) {
        n = d[0] * d[1] * d[2];
        in = fftw_alloc_complex(static_cast<std::size_t>(n));
        spec = fftw_alloc_complex(static_cast<std::size_t>(n));
        work = fftw_alloc_complex(static_cast<std::size_t>(n));
        out = fftw_alloc_complex(static_cast<std::size_t>(n));
        fwd = fftw_plan_dft_3d(static_cast<int>(d[0]), static_cast<int>(d[1]),
                               static_cast<int>(d[2]), in, spec, FFTW_FORWARD,
                               FFTW_ESTIMATE);
        bwd = fftw_plan_dft_3d(static_cast<int>(d[0]), static_cast<int>(d[1]),
                               static_cast<int>(d[2]), work, out, FFTW_BACKWARD,
                               FFTW_ESTIMATE);
    }

    SpectralEngine(const SpectralEngine&) = delete;
    SpectralEngine& operator=(const SpectralEngine&) = delete;

    ~SpectralEngine() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(spec);
        fftw_free(work);
        fftw_free(out);
    }
};

std::mutex spectral_mutex;

SpectralEngine& engine_for(const Grid& g) {
    static std::map<std::array<std::int64_t, 3>, SpectralEngine> cache;
    auto it = cache.find(g.dims);
    if (it == cache.end())
        it = cache.try_emplace(g.dims, g.dims).first;
    return it->second;
}

// Integer wavenumber of DFT bin j on an axis of length n, with the
// unpaired Nyquist bin zeroed on even axes.
double wavenumber(std::int64_t j, std::int64_t n) {
    if (n % 2 == 0 && j == n / 2) return 0.0;
    return (j <= n / 2) ? static_cast<double>(j) : static_cast<double>(j - n);
}

void spectral_gradient(const Field& f, const Grid& g, std::array<Field, 3>& out) {
    std::lock_guard<std::mutex> lock(spectral_mutex);
    SpectralEngine& e = engine_for(g);
    std::int64_t n = e.n;
    for (std::int64_t i = 0; i < n; ++i) {
        e.in[i][0] = f[static_cast<std::size_t>(i)];
        e.in[i][1] = 0.0;
    }
    fftw_execute(e.fwd);
    double inv_n = 1.0 / static_cast<double>(n);
    for (int axis = 0; axis < 3; ++axis) {
        if (!g.active(axis)) {
            out[axis].assign(static_cast<std::size_t>(n), 0.0);
            continue;
        }
        double scale = 2.0 * std::numbers::pi / g.lengths[axis];
        std::int64_t idx = 0;
        for (std::int64_t i = 0; i < g.dims[0]; ++i) {
            for (std::int64_t j = 0; j < g.dims[1]; ++j) {
                for (std::int64_t k = 0; k < g.dims[2]; ++k, ++idx) {
                    std::int64_t bins[3] = {i, j, k};
                    double kw = scale * wavenumber(bins[axis], g.dims[axis]);
                    // multiply by i*kw
                    double re = e.spec[idx][0];
                    double im = e.spec[idx][1];
                    e.work[idx][0] = -kw * im;
                    e.work[idx][1] = kw * re;
                }
            }
        }
        fftw_execute(e.bwd);
        out[axis].resize(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i)
            out[axis][static_cast<std::size_t>(i)] = e.out[i][0] * inv_n;
    }
}

Field central_derivative(const Field& f, const Grid& g, int axis, int order) {
    Field out = make_field(g);
    std::int64_t n_axis = g.dims[axis];
    if (n_axis == 1) return out;
    double h = g.spacing(axis);
    std::int64_t stride = (axis == 0)   ? g.dims[1] * g.dims[2]
                          : (axis == 1) ? g.dims[2]
                                        : 1;
    std::int64_t n = g.size();
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            std::int64_t coords[3];
            coords[2] = idx % g.dims[2];
            coords[1] = (idx / g.dims[2]) % g.dims[1];
            coords[0] = idx / (g.dims[1] * g.dims[2]);
            std::int64_t c = coords[axis];
            auto at = [&](std::int64_t shift) {
                std::int64_t cc = (c + shift) % n_axis;
                if (cc < 0) cc += n_axis;
                return f[static_cast<std::size_t>(idx + (cc - c) * stride)];
            };
            if (order == 2) {
                out[static_cast<std::size_t>(idx)] = (at(1) - at(-1)) / (2.0 * h);
            } else {
                out[static_cast<std::size_t>(idx)] =
                    (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
            }
        }
    });
    return out;
}

}  // namespace

Field derivative(const Field& f, const Grid& grid, int axis, Scheme scheme) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1, or 2");
    if (f.size() != static_cast<std::size_t>(grid.size()))
        throw std::invalid_argument("field size does not match grid");
    if (!grid.active(axis)) return make_field(grid);
    if (scheme == Scheme::Spectral) {
        std::array<Field, 3> all;
        spectral_gradient(f, grid, all);
        return std::move(all[static_cast<std::size_t>(axis)]);
    }
    return central_derivative(f, grid, axis, scheme == Scheme::Central2 ? 2 : 4);
}

std::array<Field, 3> spatial_gradient(const Field& f, const Grid& grid,
                                      Scheme scheme) {
    if (f.size() != static_cast<std::size_t>(grid.size()))
        throw std::invalid_argument("field size does not match grid");
    std::array<Field, 3> out;
    if (scheme == Scheme::Spectral) {
        spectral_gradient(f, grid, out);
        return out;
    }
    for (int axis = 0; axis < 3; ++axis)
        out[static_cast<std::size_t>(axis)] =
            grid.active(axis)
                ? central_derivative(f, grid, axis, scheme == Scheme::Central2 ? 2 : 4)
                : make_field(grid);
    return out;
}

Field index_laplacian(const Field& f, const Grid& grid) {
    Field out = make_field(grid);
    std::int64_t n = grid.size();
    for (int axis = 0; axis < 3; ++axis) {
        if (!grid.active(axis)) continue;
        std::int64_t n_axis = grid.dims[axis];
        std::int64_t stride = (axis == 0)   ? grid.dims[1] * grid.dims[2]
                              : (axis == 1) ? grid.dims[2]
                                            : 1;
        parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t idx = lo; idx < hi; ++idx) {
                std::int64_t coords[3];
                coords[2] = idx % grid.dims[2];
                coords[1] = (idx / grid.dims[2]) % grid.dims[1];
                coords[0] = idx / (grid.dims[1] * grid.dims[2]);
                std::int64_t c = coords[axis];
                std::int64_t up = (c + 1) % n_axis;
                std::int64_t dn = (c - 1 + n_axis) % n_axis;
                double plus = f[static_cast<std::size_t>(idx + (up - c) * stride)];
                double minus = f[static_cast<std::size_t>(idx + (dn - c) * stride)];
                out[static_cast<std::size_t>(idx)] +=
                    plus - 2.0 * f[static_cast<std::size_t>(idx)] + minus;
            }
        });
    }
    return out;
}

}  // namespace frw
