#pragma once

#include <functional>
#include <vector>

namespace frw {

// Adaptive Simpson rule on [a, b] with absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

enum class TailVerdict {
    Convergent,
    Divergent,
    Indeterminate,
};

const char* tail_verdict_name(TailVerdict v);

struct ImproperResult {
    TailVerdict verdict;
    // Partial integral over [a, t_stop]; for Convergent this is the full
    // estimate including the extrapolated tail.
    double value;
    double t_stop;
};

// Probes \int_a^\infty f dt on dyadic windows [a 2^k, a 2^{k+1}]. The tail
// is declared convergent when a window contribution falls below tol times
// the running total, and divergent when partial sums have grown by a factor
// of at least (1 + tol) across three consecutive doublings with the streak
// still alive when probing reaches the horizon. Anything else is
// Indeterminate.
ImproperResult probe_improper(const std::function<double(double)>& f, double a,
                              double horizon = 1e8, double tol = 1e-6);

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes and weights of the n-point Gauss-Legendre rule, by Newton iteration
// on the Legendre polynomial.
GaussLegendre gauss_legendre(int n);

}  // namespace frw
