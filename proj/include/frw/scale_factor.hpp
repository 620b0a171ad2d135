#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frw/quadrature.hpp"

namespace frw {

// Requested conformal time lies at or beyond the total conformal time of
// the expansion law.
class unreachable_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Prescribed expansion law Omega(t) with Omega(1) = 0, together with the
// decay-weight exponent q of F(Omega) = exp(q Omega).
struct ScaleFactorSpec {
    enum class Family { Exponential, PowerLaw, Tabulated };

    Family family = Family::Exponential;
    double H = 1.0;   // Exponential: Omega = H (t - 1)
    double Q = 1.0;   // PowerLaw:    Omega = Q ln t
    double q = 0.05;  // decay-weight exponent, q >= 0
    std::vector<std::pair<double, double>> table;  // Tabulated: (t, Omega) rows

    static ScaleFactorSpec exponential(double H, double q = 0.05);
    static ScaleFactorSpec power_law(double Q, double q = 0.05);
    static ScaleFactorSpec tabulated(std::vector<std::pair<double, double>> rows,
                                     double q = 0.05);
};

struct Expansion {
    double Omega;
    double omega;  // dOmega/dt
};

// Omega and omega at coordinate time t >= 1. Throws std::domain_error for
// t < 1 and std::out_of_range past the end of a Tabulated table.
Expansion evaluate(const ScaleFactorSpec& spec, double t);

double decay_factor(const ScaleFactorSpec& spec, double Omega);

// The only nonzero Christoffel symbols of -dt^2 + e^{2 Omega} sum (dx^j)^2:
// Gamma^0_{jj} = omega e^{2 Omega} and Gamma^j_{0j} = omega.
struct ChristoffelSummary {
    double gamma0_jj;
    double gammaj_0j;
};

ChristoffelSummary christoffel(const ScaleFactorSpec& spec, double t);

enum class Verdict {
    StableIntegrable,
    UnstableNonintegrable,
    Indeterminate,
};

struct ExpansionClass {
    Verdict verdict;
    // Tail probes of the three integrability branches, in order:
    // int e^{-2 Omega} dt, int e^{-Omega} F(Omega) dt, int e^{-Omega} dt.
    std::array<ImproperResult, 3> integral_estimates;
    bool a3_checked;
};

// Integrability classification for the regime selected by c2: branch 0 for
// c2 = 0, branch 1 for 0 < c2 < 1/3 (with the decay-weight side conditions
// q <= 1 - 3 c2 and int dOmega / F(Omega) finite), branch 2 for c2 = 1/3.
ExpansionClass classify(const ScaleFactorSpec& spec, double c2,
                        double horizon = 1e8, double tol = 1e-6);

// tau(t) = 1 + int_1^t e^{-Omega(s)} ds.
double conformal_time(const ScaleFactorSpec& spec, double t);

// Increment tau(t2) - tau(t1).
double conformal_time_between(const ScaleFactorSpec& spec, double t1, double t2);

// Total conformal time sup_t tau(t); +infinity when the tail integral
// diverges.
double conformal_time_supremum(const ScaleFactorSpec& spec);

// Solves tau(t) = tau for t. Throws std::domain_error for tau < 1 and
// unreachable_error when tau is at or beyond the supremum.
double invert_conformal_time(const ScaleFactorSpec& spec, double tau);

const char* verdict_name(Verdict v);

}  // namespace frw
