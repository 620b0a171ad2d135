#include "frw/scale_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace frw {

namespace {

void validate_q(double q) {
    if (!(q >= 0.0))
        throw std::invalid_argument("decay-weight exponent must be >= 0, got " +
                                    std::to_string(q));
}

// End time of the probe range: tables cannot be extrapolated, so the
// integrability probes stop at the last row.
double probe_end(const ScaleFactorSpec& spec, double horizon) {
    if (spec.family == ScaleFactorSpec::Family::Tabulated)
        return std::min(horizon, spec.table.back().first);
    return horizon;
}

}  // namespace

ScaleFactorSpec ScaleFactorSpec::exponential(double H, double q) {
    if (!(H > 0.0))
        throw std::invalid_argument("expansion rate H must be positive, got " +
                                    std::to_string(H));
    validate_q(q);
    ScaleFactorSpec s;
    s.family = Family::Exponential;
    s.H = H;
    s.q = q;
    return s;
}

ScaleFactorSpec ScaleFactorSpec::power_law(double Q, double q) {
    if (!(Q > 0.0))
        throw std::invalid_argument("power-law exponent Q must be positive, got " +
                                    std::to_string(Q));
    validate_q(q);
    ScaleFactorSpec s;
    s.family = Family::PowerLaw;
    s.Q = Q;
    s.q = q;
    return s;
}

ScaleFactorSpec ScaleFactorSpec::tabulated(std::vector<std::pair<double, double>> rows,
                                           double q) {
    validate_q(q);
    if (rows.size() < 2)
        throw std::invalid_argument("tabulated spec needs at least two rows");
    if (std::abs(rows.front().first - 1.0) > 1e-12 ||
        std::abs(rows.front().second) > 1e-12)
        throw std::invalid_argument("tabulated spec must start at (t, Omega) = (1, 0)");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].first > rows[i - 1].first))
            throw std::invalid_argument("tabulated times must be strictly increasing");
        if (rows[i].second < rows[i - 1].second)
            throw std::invalid_argument("tabulated Omega must be nondecreasing");
    }
    rows.front() = {1.0, 0.0};
    ScaleFactorSpec s;
    s.family = Family::Tabulated;
    s.q = q;
    s.table = std::move(rows);
    return s;
}

Expansion evaluate(const ScaleFactorSpec& spec, double t) {
    if (!(t >= 1.0))
        throw std::domain_error("time must be >= 1, got " + std::to_string(t));
    switch (spec.family) {
        case ScaleFactorSpec::Family::Exponential:
            return {spec.H * (t - 1.0), spec.H};
        case ScaleFactorSpec::Family::PowerLaw:
            return {spec.Q * std::log(t), spec.Q / t};
        case ScaleFactorSpec::Family::Tabulated:
            break;
    }
    const auto& tab = spec.table;
    if (t > tab.back().first)
        throw std::out_of_range("time " + std::to_string(t) +
                                " is past the end of the table");
    auto it = std::upper_bound(tab.begin(), tab.end(), t,
                               [](double v, const auto& row) { return v < row.first; });
    std::size_t i = static_cast<std::size_t>(it - tab.begin());
    if (i == 0) i = 1;
    if (i == tab.size()) i = tab.size() - 1;
    std::size_t lo = i - 1;
    double w = (t - tab[lo].first) / (tab[i].first - tab[lo].first);
    double Omega = (1.0 - w) * tab[lo].second + w * tab[i].second;

    auto node_slope = [&tab](std::size_t j) {
        std::size_t a = (j == 0) ? 0 : j - 1;
        std::size_t b = (j + 1 == tab.size()) ? j : j + 1;
        return (tab[b].second - tab[a].second) / (tab[b].first - tab[a].first);
    };
    double omega = (1.0 - w) * node_slope(lo) + w * node_slope(i);
    return {Omega, omega};
}

double decay_factor(const ScaleFactorSpec& spec, double Omega) {
    return std::exp(spec.q * Omega);
}

ChristoffelSummary christoffel(const ScaleFactorSpec& spec, double t) {
    Expansion e = evaluate(spec, t);
    return {e.omega * std::exp(2.0 * e.Omega), e.omega};
}

ExpansionClass classify(const ScaleFactorSpec& spec, double c2, double horizon,
                        double tol) {
    if (!(horizon > 1.0)) throw std::invalid_argument("horizon must exceed 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(c2 >= 0.0 && c2 <= 1.0 / 3.0))
        throw std::invalid_argument("c2 must lie in [0, 1/3]");

    double end = probe_end(spec, horizon);
    auto branch = [&](auto&& weight) {
        return probe_improper([&](double t) { return weight(evaluate(spec, t)); },
                              1.0, end, tol);
    };

    ExpansionClass out;
    out.integral_estimates[0] =
        branch([](Expansion e) { return std::exp(-2.0 * e.Omega); });
    out.integral_estimates[1] = branch([&spec](Expansion e) {
        return std::exp(-e.Omega) * decay_factor(spec, e.Omega);
    });
    out.integral_estimates[2] =
        branch([](Expansion e) { return std::exp(-e.Omega); });

    int selected = (c2 == 0.0) ? 0 : (c2 == 1.0 / 3.0) ? 2 : 1;

    out.a3_checked = true;
    if (selected == 1) {
        bool ratio_ok = spec.q <= (1.0 - 3.0 * c2) + 1e-12;
        // int dOmega / F(Omega) = int e^{-q Omega} dOmega over [0, inf).
        auto inv_decay = [&spec](double s) { return std::exp(-spec.q * s); };
        ImproperResult tail = probe_improper(inv_decay, 1.0, horizon, tol);
        out.a3_checked = ratio_ok && tail.verdict == TailVerdict::Convergent;
    }

    switch (out.integral_estimates[static_cast<std::size_t>(selected)].verdict) {
        case TailVerdict::Divergent:
            out.verdict = Verdict::UnstableNonintegrable;
            break;
        case TailVerdict::Convergent:
            out.verdict = out.a3_checked ? Verdict::StableIntegrable
                                         : Verdict::Indeterminate;
            break;
        case TailVerdict::Indeterminate:
            out.verdict = Verdict::Indeterminate;
            break;
    }
    return out;
}

double conformal_time(const ScaleFactorSpec& spec, double t) {
    return 1.0 + conformal_time_between(spec, 1.0, t);
}

double conformal_time_between(const ScaleFactorSpec& spec, double t1, double t2) {
    if (!(t1 >= 1.0)) throw std::domain_error("time must be >= 1");
    double sign = 1.0;
    if (t2 < t1) {
        std::swap(t1, t2);
        sign = -1.0;
    }
    evaluate(spec, t2);  // range check before integrating
    return sign * integrate(
                      [&spec](double s) { return std::exp(-evaluate(spec, s).Omega); },
                      t1, t2, 1e-12);
}

double conformal_time_supremum(const ScaleFactorSpec& spec) {
    if (spec.family == ScaleFactorSpec::Family::Tabulated)
        return conformal_time(spec, spec.table.back().first);
    ImproperResult tail = probe_improper(
        [&spec](double s) { return std::exp(-evaluate(spec, s).Omega); }, 1.0, 1e12,
        1e-10);
    if (tail.verdict == TailVerdict::Convergent) return 1.0 + tail.value;
    return std::numeric_limits<double>::infinity();
}

double invert_conformal_time(const ScaleFactorSpec& spec, double tau) {
    if (!(tau >= 1.0))
        throw std::domain_error("conformal time must be >= 1, got " +
                                std::to_string(tau));
    if (tau == 1.0) return 1.0;
    double sup = conformal_time_supremum(spec);
    if (tau >= sup)
        throw unreachable_error("conformal time " + std::to_string(tau) +
                                " is at or beyond the total conformal time " +
                                std::to_string(sup));

    // Bracket by doubling, accumulating tau increments as we go.
    double cap = (spec.family == ScaleFactorSpec::Family::Tabulated)
                     ? spec.table.back().first
                     : 1e15;
    double lo = 1.0, tau_lo = 1.0;
    double hi = std::min(2.0, cap), tau_hi;
    for (;;) {
        tau_hi = tau_lo + conformal_time_between(spec, lo, hi);
        if (tau_hi >= tau) break;
        if (hi >= cap)
            throw unreachable_error("conformal time " + std::to_string(tau) +
                                    " not reached by t = " + std::to_string(cap));
        lo = hi;
        tau_lo = tau_hi;
        hi = std::min(2.0 * hi, cap);
    }

    // Bisection on the bracket, then a Newton polish with dtau/dt = e^{-Omega}.
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-14 * hi; ++iter) {
        double mid = 0.5 * (lo + hi);
        double tau_mid = tau_lo + conformal_time_between(spec, lo, mid);
        if (tau_mid < tau) {
            lo = mid;
            tau_lo = tau_mid;
        } else {
            hi = mid;
        }
    }
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 4; ++iter) {
        double residual = tau_lo + conformal_time_between(spec, lo, t) - tau;
        double slope = std::exp(-evaluate(spec, t).Omega);
        double step = residual / slope;
        double next = t - step;
        if (!(next >= 1.0) || std::abs(step) > 0.5 * (hi - lo) + 1e-12 * t) break;
        t = next;
    }
    return std::max(t, 1.0);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::StableIntegrable: return "StableIntegrable";
        case Verdict::UnstableNonintegrable: return "UnstableNonintegrable";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

}  // namespace frw
