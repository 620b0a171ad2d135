#pragma once

#include <array>
#include <optional>

#include "frw/grid.hpp"
#include "frw/scale_factor.hpp"

namespace frw {

enum class Regime { Dust, Intermediate, Radiation };

struct SoundSpeed {
    double c2;
    Regime regime;

    // Rejects c2 outside [0, 1/3]; the regime is derived from c2.
    static SoundSpeed from(double c2);
};

const char* regime_name(Regime r);

// Discrete fluid variables on a periodic box: L is the log-normalized
// density, u holds the spatial four-velocity components in coordinate
// units, t is the current value of the active time variable.
struct FluidState {
    Grid grid;
    double t = 1.0;
    Field L;
    std::array<Field, 3> u;
};

FluidState background(const Grid& grid, double rho_bar);

bool all_finite(const FluidState& state);

// Pointwise u0 = sqrt(1 + e^{2 Omega} sum_a (u^a)^2) >= 1.
double u0_at(const std::array<double, 3>& u, double Omega);

Field u0_field(const FluidState& state, double Omega);

// Pointwise projection Pi^{mu nu} = u^mu u^nu + (g^{-1})^{mu nu} with
// (g^{-1}) = diag(-1, e^{-2 Omega}, e^{-2 Omega}, e^{-2 Omega}); indices
// flattened as mu * 4 + nu.
std::array<double, 16> projection_at(const std::array<double, 3>& u, double Omega);

// Field of Pi^{mu nu} values, one vector entry per flattened index.
std::array<Field, 16> projection(const FluidState& state, double Omega);

// Physical energy density rho = rho_bar e^{-3 (1 + c2) Omega(t)} e^L.
Field density(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
              double rho_bar);

struct PerturbationSpec {
    enum class Kind { Fourier, GaussianBump, CompactCompressive };

    Kind kind = Kind::Fourier;
    // Target field: 0 = L, 1..3 = u^j. CompactCompressive acts on all
    // velocity components and ignores this.
    int field = 0;
    std::array<double, 3> kvec = {1.0, 0.0, 0.0};  // integer mode counts
    double phase = 0.0;
    std::array<double, 3> center = {0.0, 0.0, 0.0};
    double width = 0.5;   // GaussianBump support radius
    double radius = 0.5;  // CompactCompressive support radius
};

// Adds the requested profile, scaled by amplitude, to the state. Bump and
// compressive supports must fit strictly inside half the box so the
// profile stays compactly supported under periodic wrapping.
FluidState perturb(const FluidState& state, const PerturbationSpec& mode,
                   double amplitude);

}  // namespace frw
