#include "frw/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frw {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double fa, double fm, double fb, double whole, double tol,
                int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(fa, flm, fm, a, m);
    double right = simpson(fm, frm, fb, m, b);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

const char* tail_verdict_name(TailVerdict v) {
    switch (v) {
        case TailVerdict::Convergent: return "Convergent";
        case TailVerdict::Divergent: return "Divergent";
        case TailVerdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = simpson(fa, fm, fb, a, b);
    return adaptive(f, a, b, fa, fm, fb, whole, tol, 52);
}

ImproperResult probe_improper(const std::function<double(double)>& f, double a,
                              double horizon, double tol) {
    if (!(a > 0.0)) throw std::invalid_argument("lower limit must be positive");
    if (!(horizon > a)) throw std::invalid_argument("horizon must exceed lower limit");

    double total = 0.0;
    double prev_window = -1.0;
    double window = 0.0;
    int growth_streak = 0;
    double lo = a;

    // Dyadic windows only; probing stops once the next window would cross
    // the horizon.
    while (2.0 * lo <= horizon) {
        double hi = 2.0 * lo;
        prev_window = (lo == a) ? -1.0 : window;
        window = integrate(f, lo, hi, tol * 1e-2);
        double prev_total = total;
        total += window;

        if (std::abs(window) <= tol * std::abs(total)) {
            // Tail has collapsed; add a geometric extrapolation of what
            // remains when the window ratio is safely below 1.
            double tail = 0.0;
            if (prev_window > 0.0 && window > 0.0) {
                double r = window / prev_window;
                if (r < 0.9) tail = window * r / (1.0 - r);
            }
            return {TailVerdict::Convergent, total + tail, hi};
        }

        bool grew = total >= (1.0 + tol) * prev_total && prev_total > 0.0;
        bool tail_shrinking = prev_window >= 0.0 && window < prev_window * (1.0 - tol);
        if (grew && !tail_shrinking)
            ++growth_streak;
        else
            growth_streak = 0;

        lo = hi;
    }
    // The growth test is only trusted asymptotically: early windows of a
    // convergent tail can grow for several doublings before collapsing, so
    // the streak must still be alive when probing stops.
    if (growth_streak >= 3) return {TailVerdict::Divergent, total, lo};
    return {TailVerdict::Indeterminate, total, lo};
}

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("rule order must be >= 1");
    GaussLegendre rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Recurrence for P_n(x) and its derivative.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] =
            2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace frw
