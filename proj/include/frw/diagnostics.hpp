#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frw/derivatives.hpp"
#include "frw/euler_rhs.hpp"
#include "frw/fluid_state.hpp"
#include "frw/grid.hpp"
#include "frw/scale_factor.hpp"

namespace frw {

// One time-sample of the monitored quantities. Fields that do not exist
// for the active regime are left empty and serialized as empty CSV cells.
struct DiagnosticsRecord {
    double t = 0.0;
    double tau = 0.0;
    double Omega = 0.0;
    double omega = 0.0;
    double S_N = 0.0;
    std::optional<double> U_Nm1;          // Intermediate only
    std::optional<double> S_N_velocity;   // Dust only
    std::optional<double> E_N;            // Intermediate and Radiation
    std::optional<double> E_N_velocity;   // Dust only
    std::optional<double> E_Nm1_density;  // Dust only
    double sup_u = 0.0;
    double sup_L = 0.0;
    double max_grad_u = 0.0;
    double div_residual = 0.0;
    double ratio_E_to_norm = 0.0;
};

// Multi-indices alpha = (a1, a2, a3) with |alpha| <= order; collapsed grid
// axes contribute only zeros.
std::vector<std::array<int, 3>> multi_indices(int order, const Grid& grid);

// All derivative fields d_alpha f for |alpha| <= order, in the order given
// by multi_indices; entry 0 is f itself.
std::vector<Field> derivative_tree(const Field& f, const Grid& grid, int order,
                                   Scheme scheme);

double integral(const Field& f, const Grid& grid);

struct Norms {
    double S_N = 0.0;
    std::optional<double> U_Nm1;
    std::optional<double> S_N_velocity;
};

// Regime-composed Sobolev norms:
//   Dust:          ||L||_{H^{N-1}} + e^{2 Omega} sum_j ||u^j||_{H^N}
//   Intermediate:  ||L||_{H^N} + e^Omega sum_j ||u^j||_{H^N} + U_{N-1}
//   Radiation:     ||L||_{H^N} + e^Omega sum_j ||u^j||_{H^N}
// with U_{N-1} = e^Omega F(Omega) (sum_j ||u^j||^2_{H^{N-1}})^{1/2}.
Norms norms(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
            int N, Scheme scheme);

Norms norms_with_expansion(const FluidState& state, double Omega, double F,
                           SoundSpeed c2, int N, Scheme scheme);

struct Energies {
    std::optional<double> E_N;            // total energy, non-dust
    std::optional<double> E_N_velocity;   // dust pair
    std::optional<double> E_Nm1_density;  // dust pair
    bool clamped = false;  // a rounding-scale negative total was clamped to 0
    // Squared totals and the weighted squared norm used for the
    // energy-to-norm comparison ratio.
    double total_sq = 0.0;
    double weighted_norm_sq = 0.0;
};

// Energies from the time component of the energy current, summed over
// variations (d_alpha L, d_alpha u) for |alpha| <= N (density part |alpha|
// <= N-1 in the dust regime).
Energies energy(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
                int N, Scheme scheme);

Energies energy_with_expansion(const FluidState& state, double Omega, SoundSpeed c2,
                               int N, Scheme scheme);

// The |alpha| = 0 energy squares alone: value for the non-dust current,
// the velocity/density pair for dust.
struct OrderZeroEnergySq {
    double value = 0.0;
    double vel = 0.0;
    double dens = 0.0;
};

OrderZeroEnergySq order_zero_energy_sq(const FluidState& state, double Omega,
                                       SoundSpeed c2);

// Volume integral of the derivative-free expression for d/dt of the
// order-0 energy squares; the residual functions difference the energy
// across probe steps and compare against this.
OrderZeroEnergySq order_zero_energy_rate(const FluidState& state, double Omega,
                                         double omega, SoundSpeed c2, Scheme scheme);

// Residual of the order-0 energy-balance identity: centered difference of
// the energy integral across two probe steps of size dt_probe against the
// volume integral of the analytic divergence.
double divergence_residual_order0(const FluidState& state, const ScaleFactorSpec& spec,
                                  SoundSpeed c2, double dt_probe, Scheme scheme);

double divergence_residual_order0_with_expansion(const FluidState& state,
                                                 double Omega, double omega,
                                                 SoundSpeed c2, double dt_probe,
                                                 Scheme scheme, bool flat_time);

// Least-squares slope of ln(sup_u) against Omega over records with
// t in [t1, t2]. Throws when the window is empty, has fewer than two
// distinct Omega values, or contains non-positive sup_u.
double decay_fit(const std::vector<DiagnosticsRecord>& series, double t1, double t2);

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

}  // namespace frw
