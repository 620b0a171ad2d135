#include "frw/fluid_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace frw {

SoundSpeed SoundSpeed::from(double c2) {
    if (!(c2 >= 0.0 && c2 <= 1.0 / 3.0))
        throw std::invalid_argument("c2 must lie in [0, 1/3], got " +
                                    std::to_string(c2));
    Regime r = (c2 == 0.0)         ? Regime::Dust
               : (c2 == 1.0 / 3.0) ? Regime::Radiation
                                   : Regime::Intermediate;
    return {c2, r};
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Dust: return "Dust";
        case Regime::Intermediate: return "Intermediate";
        case Regime::Radiation: return "Radiation";
    }
    return "Intermediate";
}

FluidState background(const Grid& grid, double rho_bar) {
    if (!(rho_bar > 0.0))
        throw std::invalid_argument("background density must be positive, got " +
                                    std::to_string(rho_bar));
    FluidState s;
    s.grid = grid;
    s.t = 1.0;
    s.L = make_field(grid);
    for (auto& comp : s.u) comp = make_field(grid);
    return s;
}

bool all_finite(const FluidState& state) {
    auto ok = [](const Field& f) {
        for (double v : f)
            if (!std::isfinite(v)) return false;
        return true;
    };
    return ok(state.L) && ok(state.u[0]) && ok(state.u[1]) && ok(state.u[2]);
}

double u0_at(const std::array<double, 3>& u, double Omega) {
    double e2 = std::exp(2.0 * Omega);
    return std::sqrt(1.0 + e2 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]));
}

Field u0_field(const FluidState& state, double Omega) {
    Field out = make_field(state.grid);
    double e2 = std::exp(2.0 * Omega);
    std::int64_t n = state.grid.size();
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            double usq = e2 * (state.u[0][i] * state.u[0][i] +
                               state.u[1][i] * state.u[1][i] +
                               state.u[2][i] * state.u[2][i]);
            out[i] = std::sqrt(1.0 + usq);
        }
    });
    return out;
}

std::array<double, 16> projection_at(const std::array<double, 3>& u, double Omega) {
    double em2 = std::exp(-2.0 * Omega);
    double up[4] = {u0_at(u, Omega), u[0], u[1], u[2]};
    double ginv[4] = {-1.0, em2, em2, em2};
    std::array<double, 16> pi;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            pi[static_cast<std::size_t>(mu * 4 + nu)] =
                up[mu] * up[nu] + (mu == nu ? ginv[mu] : 0.0);
    return pi;
}

std::array<Field, 16> projection(const FluidState& state, double Omega) {
    std::array<Field, 16> out;
    for (auto& f : out) f = make_field(state.grid);
    std::int64_t n = state.grid.size();
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            auto pi = projection_at({state.u[0][i], state.u[1][i], state.u[2][i]},
                                    Omega);
            for (int c = 0; c < 16; ++c) out[static_cast<std::size_t>(c)][i] = pi[static_cast<std::size_t>(c)];
        }
    });
    return out;
}

Field density(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
              double rho_bar) {
    if (!(rho_bar > 0.0))
        throw std::invalid_argument("background density must be positive");
    double Omega = evaluate(spec, state.t).Omega;
    double scale = rho_bar * std::exp(-3.0 * (1.0 + c2.c2) * Omega);
    Field out = make_field(state.grid);
    std::int64_t n = state.grid.size();
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) out[i] = scale * std::exp(state.L[i]);
    });
    return out;
}

namespace {

// Periodic displacement from center along one axis, reduced to the
// nearest image in [-l/2, l/2).
double periodic_delta(double x, double center, double length) {
    double d = std::fmod(x - center, length);
    if (d < -0.5 * length) d += length;
    if (d >= 0.5 * length) d -= length;
    return d;
}

// C-infinity bump: chi(0) = 1, support |s| < 1.
double bump(double s2) {
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

void check_support_radius(const Grid& g, double radius, const char* what) {
    if (!(radius > 0.0))
        throw std::invalid_argument(std::string(what) + " radius must be positive");
    for (int a = 0; a < 3; ++a) {
        if (!g.active(a)) continue;
        if (!(radius < 0.5 * g.lengths[a]))
            throw std::invalid_argument(
                std::string(what) +
                " support must fit strictly inside half the box; radius " +
                std::to_string(radius) + " vs box length " +
                std::to_string(g.lengths[a]));
    }
}

}  // namespace

FluidState perturb(const FluidState& state, const PerturbationSpec& mode,
                   double amplitude) {
    if (!std::isfinite(amplitude))
        throw std::invalid_argument("perturbation amplitude must be finite");
    if (mode.kind != PerturbationSpec::Kind::CompactCompressive &&
        (mode.field < 0 || mode.field > 3))
        throw std::invalid_argument("perturbation target must be 0 (L) or 1..3 (u)");

    FluidState out = state;
    const Grid& g = state.grid;
    auto& target = (mode.field == 0) ? out.L : out.u[static_cast<std::size_t>(mode.field - 1)];

    switch (mode.kind) {
        case PerturbationSpec::Kind::Fourier: {
            std::array<double, 3> kphys;
            for (int a = 0; a < 3; ++a)
                kphys[a] = 2.0 * std::numbers::pi * mode.kvec[a] / g.lengths[a];
            for (std::int64_t i = 0; i < g.dims[0]; ++i)
                for (std::int64_t j = 0; j < g.dims[1]; ++j)
                    for (std::int64_t k = 0; k < g.dims[2]; ++k) {
                        double arg = kphys[0] * g.coordinate(0, i) +
                                     kphys[1] * g.coordinate(1, j) +
                                     kphys[2] * g.coordinate(2, k) + mode.phase;
                        target[g.index(i, j, k)] += amplitude * std::sin(arg);
                    }
            break;
        }
        case PerturbationSpec::Kind::GaussianBump: {
            check_support_radius(g, mode.width, "bump");
            for (std::int64_t i = 0; i < g.dims[0]; ++i)
                for (std::int64_t j = 0; j < g.dims[1]; ++j)
                    for (std::int64_t k = 0; k < g.dims[2]; ++k) {
                        double s2 = 0.0;
                        double xs[3] = {g.coordinate(0, i), g.coordinate(1, j),
                                        g.coordinate(2, k)};
                        for (int a = 0; a < 3; ++a) {
                            if (!g.active(a)) continue;
                            double d = periodic_delta(xs[a], mode.center[a],
                                                      g.lengths[a]) /
                                       mode.width;
                            s2 += d * d;
                        }
                        target[g.index(i, j, k)] += amplitude * bump(s2);
                    }
            break;
        }
        case PerturbationSpec::Kind::CompactCompressive: {
            check_support_radius(g, mode.radius, "compressive");
            for (std::int64_t i = 0; i < g.dims[0]; ++i)
                for (std::int64_t j = 0; j < g.dims[1]; ++j)
                    for (std::int64_t k = 0; k < g.dims[2]; ++k) {
                        double xs[3] = {g.coordinate(0, i), g.coordinate(1, j),
                                        g.coordinate(2, k)};
                        double d[3] = {0.0, 0.0, 0.0};
                        double s2 = 0.0;
                        for (int a = 0; a < 3; ++a) {
                            if (!g.active(a)) continue;
                            d[a] = periodic_delta(xs[a], mode.center[a], g.lengths[a]) /
                                   mode.radius;
                            s2 += d[a] * d[a];
                        }
                        double chi = bump(s2);
                        if (chi == 0.0) continue;
                        std::int64_t idx = g.index(i, j, k);
                        // Velocity points toward the center: compression.
                        for (int a = 0; a < 3; ++a)
                            out.u[static_cast<std::size_t>(a)][idx] -= amplitude * d[a] * chi;
                    }
            break;
        }
    }
    return out;
}

}  // namespace frw
