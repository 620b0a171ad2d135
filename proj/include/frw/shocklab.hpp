#pragma once

#include <optional>

#include "frw/fluid_state.hpp"
#include "frw/integrator.hpp"
#include "frw/scale_factor.hpp"

namespace frw {

// Radiation-regime fluid data expressed in the rescaled variables that
// solve the flat-space system in conformal time.
struct RescaledState {
    Grid grid;
    double tau = 1.0;
    Field rho_prime;             // e^{4 Omega} rho
    std::array<Field, 3> U;      // e^{Omega} u^j
};

RescaledState to_minkowski(const FluidState& state, const ScaleFactorSpec& spec,
                           double rho_bar, SoundSpeed c2);

FluidState from_minkowski(const RescaledState& rescaled, const ScaleFactorSpec& spec,
                          double rho_bar, SoundSpeed c2);

struct Functionals {
    double D_M = 0.0;        // order-M data norm over the whole box
    double S_annulus = 0.0;  // order-1 norm over the annulus B_1 \ B_r
    double Q_r = 0.0;        // surface integral at radius r plus annular bulk
};

// Data functionals of a rescaled state whose deviation from the background
// is compactly supported in the unit ball around the box center. The
// surface and annular integrals use a radial Gauss-Legendre rule crossed
// with a latitude-longitude rule (3D), a uniform circle rule (2D), or the
// two endpoints (1D), with trilinear interpolation of the grid fields.
Functionals christodoulou_functionals(const RescaledState& data, double rho_bar,
                                      double r, int M);

struct ShockConditions {
    bool data_small = false;   // D_M <= epsilon
    bool q_dominates = false;  // Q >= C sqrt(D) (sqrt(D) + sqrt(1-r)) S
    bool r_in_range = false;   // 2/3 <= r < 1
    bool degenerate = false;   // Q <= 0: no finite predicted time
    bool all() const { return data_small && q_dominates && r_in_range; }
};

ShockConditions shock_conditions(const Functionals& f, double r, double C,
                                 double epsilon);

struct ShockTime {
    double tau_max = 0.0;
    // Empty when tau_max exceeds the spacetime's total conformal time.
    std::optional<double> t_max;
};

ShockTime predicted_shock_time(double Q_r, double r, double C_prime,
                               const ScaleFactorSpec& spec);

struct ShockReport {
    double r = 0.0;
    int M = 1;
    double C = 1.0;
    double C_prime = 1.0;
    double epsilon = 0.01;
    Functionals functionals;
    ShockConditions conditions;
    std::optional<double> tau_max;
    std::optional<double> t_max;
    std::optional<double> observed_blowup_tau;
};

struct ContrastResult {
    RunResult unstable;
    RunResult stable;
    double tau_end_unstable = 0.0;
    double tau_end_stable = 0.0;
};

// Evolves identical radiation-regime data in the rescaled flat frame under
// both expansion laws. Each leg runs to the tau horizon in base.ctl.t_end,
// capped at 99% of that law's total conformal time when the latter is
// finite. The two integrations execute concurrently.
ContrastResult contrast_experiment(const FluidState& data,
                                   const ScaleFactorSpec& spec_unstable,
                                   const ScaleFactorSpec& spec_stable,
                                   const RunOptions& base);

}  // namespace frw
