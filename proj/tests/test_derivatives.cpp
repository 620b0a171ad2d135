#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <string>

#include "frw/derivatives.hpp"

using namespace frw;

namespace {

const double pi = std::numbers::pi;

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Field sample(const Grid& g, const std::function<double(double, double, double)>& f) {
    Field out = make_field(g);
    for (std::int64_t i = 0; i < g.dims[0]; ++i)
        for (std::int64_t j = 0; j < g.dims[1]; ++j)
            for (std::int64_t k = 0; k < g.dims[2]; ++k)
                out[g.index(i, j, k)] =
                    f(g.coordinate(0, i), g.coordinate(1, j), g.coordinate(2, k));
    return out;
}

}  // namespace

TEST_CASE("derivative of a constant field vanishes for every scheme") {
    Grid g = make_grid({8, 8, 8}, {2.0 * pi, 2.0 * pi, 2.0 * pi});
    Field c = make_field(g, 3.7);
    for (Scheme s : {Scheme::Spectral, Scheme::Central4, Scheme::Central2}) {
        for (int axis = 0; axis < 3; ++axis) {
            Field d = derivative(c, g, axis, s);
            double m = 0.0;
            for (double v : d) m = std::max(m, std::abs(v));
            CHECK(m < 1e-12);
        }
    }
}

TEST_CASE("spectral derivative resolves single modes to machine precision") {
    const double len = 5.0;
    Grid g = make_grid({32, 1, 1}, {len, 1.0, 1.0});
    Field f = sample(g, [&](double x, double, double) {
        return std::sin(2.0 * pi * x / len);
    });
    Field want = sample(g, [&](double x, double, double) {
        return (2.0 * pi / len) * std::cos(2.0 * pi * x / len);
    });
    Field got = derivative(f, g, 0, Scheme::Spectral);
    CHECK(max_abs_diff(got, want) < 1e-12);
}

TEST_CASE("spectral gradient is exact on a mixed three dimensional mode") {
    Grid g = make_grid({16, 16, 16}, {2.0 * pi, 4.0 * pi, 2.0 * pi});
    auto f = [](double x, double y, double z) {
        return std::sin(x + 0.2) * std::cos(y) * std::sin(2.0 * z - 0.5);
    };
    Field field = sample(g, f);
    auto grad = spatial_gradient(field, g, Scheme::Spectral);

    Field dx = sample(g, [&](double x, double y, double z) {
        return std::cos(x + 0.2) * std::cos(y) * std::sin(2.0 * z - 0.5);
    });
    Field dy = sample(g, [&](double x, double y, double z) {
        return -std::sin(x + 0.2) * std::sin(y) * std::sin(2.0 * z - 0.5);
    });
    Field dz = sample(g, [&](double x, double y, double z) {
        return 2.0 * std::sin(x + 0.2) * std::cos(y) * std::cos(2.0 * z - 0.5);
    });
    CHECK(max_abs_diff(grad[0], dx) < 1e-12);
    CHECK(max_abs_diff(grad[1], dy) < 1e-12);
    CHECK(max_abs_diff(grad[2], dz) < 1e-12);
}

TEST_CASE("spectral derivative zeroes the unpaired Nyquist mode") {
    Grid g = make_grid({16, 1, 1}, {2.0 * pi, 1.0, 1.0});
    Field f = sample(g, [](double x, double, double) { return std::cos(8.0 * x); });
    Field d = derivative(f, g, 0, Scheme::Spectral);
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v));
    CHECK(m < 1e-12);
}

TEST_CASE("central differences converge at their design orders") {
    auto f = [](double x, double, double) { return std::sin(x); };
    auto runs = [&](std::int64_t n, Scheme s) {
        Grid g = make_grid({n, 1, 1}, {2.0 * pi, 1.0, 1.0});
        Field field = sample(g, f);
        Field want = sample(g, [](double x, double, double) { return std::cos(x); });
        Field got = derivative(field, g, 0, s);
        return max_abs_diff(got, want);
    };

    double e2_coarse = runs(32, Scheme::Central2);
    double e2_fine = runs(64, Scheme::Central2);
    CHECK(e2_coarse / e2_fine == doctest::Approx(4.0).epsilon(0.05));

    double e4_coarse = runs(32, Scheme::Central4);
    double e4_fine = runs(64, Scheme::Central4);
    CHECK(e4_coarse / e4_fine == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("derivatives along collapsed axes vanish") {
    Grid g = make_grid({16, 1, 1}, {2.0 * pi, 1.0, 1.0});
    Field f = sample(g, [](double x, double, double) { return std::sin(x); });
    for (Scheme s : {Scheme::Spectral, Scheme::Central4, Scheme::Central2}) {
        for (int axis : {1, 2}) {
            Field d = derivative(f, g, axis, s);
            for (double v : d) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("gradient components match per-axis derivatives") {
    Grid g = make_grid({8, 8, 1}, {2.0 * pi, 2.0 * pi, 1.0});
    Field f = sample(g, [](double x, double y, double) {
        return std::sin(x) + 0.5 * std::cos(y);
    });
    for (Scheme s : {Scheme::Spectral, Scheme::Central4, Scheme::Central2}) {
        auto grad = spatial_gradient(f, g, s);
        for (int axis = 0; axis < 3; ++axis) {
            Field d = derivative(f, g, axis, s);
            CHECK(max_abs_diff(grad[static_cast<std::size_t>(axis)], d) < 1e-14);
        }
    }
}

TEST_CASE("index laplacian matches the direct stencil") {
    Grid g = make_grid({8, 4, 1}, {1.0, 1.0, 1.0});
    Field f = make_field(g);
    for (std::int64_t i = 0; i < g.dims[0]; ++i)
        for (std::int64_t j = 0; j < g.dims[1]; ++j)
            f[g.index(i, j, 0)] = std::sin(0.7 * static_cast<double>(i)) +
                                  0.3 * static_cast<double>(j * j);

    Field lap = index_laplacian(f, g);
    for (std::int64_t i = 0; i < g.dims[0]; ++i)
        for (std::int64_t j = 0; j < g.dims[1]; ++j) {
            std::int64_t ip = (i + 1) % g.dims[0];
            std::int64_t im = (i + g.dims[0] - 1) % g.dims[0];
            std::int64_t jp = (j + 1) % g.dims[1];
            std::int64_t jm = (j + g.dims[1] - 1) % g.dims[1];
            double want = f[g.index(ip, j, 0)] - 2.0 * f[g.index(i, j, 0)] +
                          f[g.index(im, j, 0)] + f[g.index(i, jp, 0)] -
                          2.0 * f[g.index(i, j, 0)] + f[g.index(i, jm, 0)];
            CHECK(lap[g.index(i, j, 0)] == doctest::Approx(want).epsilon(1e-13));
        }
}

TEST_CASE("index laplacian of a constant vanishes") {
    Grid g = make_grid({8, 8, 8}, {1.0, 1.0, 1.0});
    Field f = make_field(g, 2.5);
    Field lap = index_laplacian(f, g);
    for (double v : lap) CHECK(v == 0.0);
}

TEST_CASE("scheme names") {
    CHECK(std::string(scheme_name(Scheme::Spectral)) == "spectral");
    CHECK(std::string(scheme_name(Scheme::Central4)) == "central-4");
    CHECK(std::string(scheme_name(Scheme::Central2)) == "central-2");
}
