#include "frw/shocklab.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "frw/diagnostics.hpp"
#include "frw/quadrature.hpp"

namespace frw {

namespace {

void require_radiation(SoundSpeed c2) {
    if (c2.regime != Regime::Radiation)
        throw std::invalid_argument(
            "the rescaled flat-space variables exist only in the radiation regime");
}

// Trilinear (bilinear, linear) periodic interpolation at an absolute point;
// collapsed axes read index 0.
double interp(const Field& f, const Grid& g, const std::array<double, 3>& p) {
    std::array<std::array<std::int64_t, 2>, 3> idx{};
    std::array<std::array<double, 2>, 3> w{};
    for (int a = 0; a < 3; ++a) {
        auto sa = static_cast<std::size_t>(a);
        if (!g.active(a)) {
            idx[sa] = {0, 0};
            w[sa] = {1.0, 0.0};
            continue;
        }
        double h = g.spacing(a);
        auto n = g.dims[sa];
        double s = p[sa] / h;
        double fl = std::floor(s);
        auto i0 = static_cast<std::int64_t>(fl) % n;
        if (i0 < 0) i0 += n;
        idx[sa] = {i0, (i0 + 1) % n};
        double fr = s - fl;
        w[sa] = {1.0 - fr, fr};
    }
    double v = 0.0;
    for (int ci = 0; ci < 2; ++ci)
        for (int cj = 0; cj < 2; ++cj)
            for (int ck = 0; ck < 2; ++ck) {
                double ww = w[0][static_cast<std::size_t>(ci)] *
                            w[1][static_cast<std::size_t>(cj)] *
                            w[2][static_cast<std::size_t>(ck)];
                if (ww == 0.0) continue;
                v += ww * f[static_cast<std::size_t>(
                         g.index(idx[0][static_cast<std::size_t>(ci)],
                                 idx[1][static_cast<std::size_t>(cj)],
                                 idx[2][static_cast<std::size_t>(ck)]))];
            }
    return v;
}

struct AngularRule {
    std::vector<std::array<double, 3>> dirs;
    std::vector<double> weights;  // sum approximates the unit-sphere measure
};

AngularRule angular_rule(const Grid& g) {
    std::vector<int> act;
    for (int a = 0; a < 3; ++a)
        if (g.active(a)) act.push_back(a);
    if (act.empty())
        throw std::invalid_argument("functionals need at least one extended axis");
    AngularRule rule;
    if (act.size() == 3) {
        const int nth = 64, nph = 128;
        double wth = std::numbers::pi / nth;
        double wph = 2.0 * std::numbers::pi / nph;
        for (int i = 0; i < nth; ++i) {
            double th = (i + 0.5) * wth;
            for (int j = 0; j < nph; ++j) {
                double ph = j * wph;
                rule.dirs.push_back({std::sin(th) * std::cos(ph),
                                     std::sin(th) * std::sin(ph), std::cos(th)});
                rule.weights.push_back(std::sin(th) * wth * wph);
            }
        }
    } else if (act.size() == 2) {
        const int nph = 128;
        double wph = 2.0 * std::numbers::pi / nph;
        for (int j = 0; j < nph; ++j) {
            double ph = (j + 0.5) * wph;
            std::array<double, 3> d = {0.0, 0.0, 0.0};
            d[static_cast<std::size_t>(act[0])] = std::cos(ph);
            d[static_cast<std::size_t>(act[1])] = std::sin(ph);
            rule.dirs.push_back(d);
            rule.weights.push_back(wph);
        }
    } else {
        for (double sign : {1.0, -1.0}) {
            std::array<double, 3> d = {0.0, 0.0, 0.0};
            d[static_cast<std::size_t>(act[0])] = sign;
            rule.dirs.push_back(d);
            rule.weights.push_back(1.0);
        }
    }
    return rule;
}

std::array<double, 3> box_center(const Grid& g) {
    std::array<double, 3> c = {0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a)
        if (g.active(a)) c[static_cast<std::size_t>(a)] = 0.5 * g.lengths[static_cast<std::size_t>(a)];
    return c;
}

int active_dimension(const Grid& g) {
    int d = 0;
    for (int a = 0; a < 3; ++a)
        if (g.active(a)) ++d;
    return d;
}

double field_hm_norm(const Field& f, const Grid& g, int order) {
    auto tree = derivative_tree(f, g, order, Scheme::Spectral);
    double total = 0.0;
    double vol = g.cell_volume();
    for (const Field& d : tree) {
        double s = 0.0;
        for (double v : d) s += v * v;
        total += s * vol;
    }
    return std::sqrt(total);
}

}  // namespace

RescaledState to_minkowski(const FluidState& state, const ScaleFactorSpec& spec,
                           double rho_bar, SoundSpeed c2) {
    require_radiation(c2);
    if (!(rho_bar > 0.0)) throw std::invalid_argument("rho_bar must be positive");
    if (!all_finite(state)) throw std::invalid_argument("state must be finite");
    Expansion e = evaluate(spec, state.t);
    double scale = std::exp(e.Omega);
    RescaledState rs;
    rs.grid = state.grid;
    rs.tau = conformal_time(spec, state.t);
    rs.rho_prime = state.L;
    for (double& v : rs.rho_prime) v = rho_bar * std::exp(v);
    for (int j = 0; j < 3; ++j) {
        auto sj = static_cast<std::size_t>(j);
        rs.U[sj] = state.u[sj];
        for (double& v : rs.U[sj]) v *= scale;
    }
    return rs;
}

FluidState from_minkowski(const RescaledState& rescaled, const ScaleFactorSpec& spec,
                          double rho_bar, SoundSpeed c2) {
    require_radiation(c2);
    if (!(rho_bar > 0.0)) throw std::invalid_argument("rho_bar must be positive");
    FluidState st;
    st.grid = rescaled.grid;
    st.t = invert_conformal_time(spec, rescaled.tau);
    double scale = std::exp(-evaluate(spec, st.t).Omega);
    st.L = rescaled.rho_prime;
    for (double& v : st.L) {
        if (!(v > 0.0))
            throw std::invalid_argument("rescaled density must be positive");
        v = std::log(v / rho_bar);
    }
    for (int j = 0; j < 3; ++j) {
        auto sj = static_cast<std::size_t>(j);
        st.u[sj] = rescaled.U[sj];
        for (double& v : st.u[sj]) v *= scale;
    }
    return st;
}

Functionals christodoulou_functionals(const RescaledState& data, double rho_bar,
                                      double r, int M) {
    if (!(r >= 2.0 / 3.0 && r < 1.0))
        throw std::domain_error("radius must lie in [2/3, 1)");
    if (M < 0) throw std::invalid_argument("functional order must be >= 0");
    if (!(rho_bar > 0.0)) throw std::invalid_argument("rho_bar must be positive");
    const Grid& g = data.grid;
    for (int a = 0; a < 3; ++a)
        if (g.active(a) && g.lengths[static_cast<std::size_t>(a)] < 2.0)
            throw std::invalid_argument(
                "box must contain the unit ball around its center");

    std::array<Field, 4> dev;
    dev[0] = data.rho_prime;
    for (double& v : dev[0]) v -= rho_bar;
    for (int j = 0; j < 3; ++j) dev[static_cast<std::size_t>(j) + 1] = data.U[static_cast<std::size_t>(j)];

    std::array<double, 3> center = box_center(g);
    double max_all = 0.0, max_outside = 0.0;
    for (std::int64_t i = 0; i < g.dims[0]; ++i)
        for (std::int64_t j = 0; j < g.dims[1]; ++j)
            for (std::int64_t k = 0; k < g.dims[2]; ++k) {
                std::array<std::int64_t, 3> ijk = {i, j, k};
                double d2 = 0.0;
                for (int a = 0; a < 3; ++a) {
                    if (!g.active(a)) continue;
                    auto sa = static_cast<std::size_t>(a);
                    double delta = g.coordinate(a, ijk[sa]) - center[sa];
                    double len = g.lengths[sa];
                    delta -= len * std::round(delta / len);
                    d2 += delta * delta;
                }
                auto idx = static_cast<std::size_t>(g.index(i, j, k));
                double mag = 0.0;
                for (const Field& f : dev) mag = std::max(mag, std::abs(f[idx]));
                max_all = std::max(max_all, mag);
                if (d2 > 1.0) max_outside = std::max(max_outside, mag);
            }
    if (max_outside > 1e-10 * max_all)
        throw std::invalid_argument(
            "deviation is not compactly supported in the unit ball");

    Functionals out;
    for (const Field& f : dev) out.D_M += field_hm_norm(f, g, M);

    AngularRule ang = angular_rule(g);
    int d = active_dimension(g);
    GaussLegendre radial = gauss_legendre(32);

    std::array<std::vector<Field>, 4> trees;
    for (int f = 0; f < 4; ++f)
        trees[static_cast<std::size_t>(f)] =
            derivative_tree(dev[static_cast<std::size_t>(f)], g, 1, Scheme::Spectral);

    auto point_at = [&](double s, const std::array<double, 3>& n) {
        std::array<double, 3> p = center;
        for (int a = 0; a < 3; ++a) p[static_cast<std::size_t>(a)] += s * n[static_cast<std::size_t>(a)];
        return p;
    };

    const double wU = 4.0 / std::sqrt(3.0) * rho_bar;

    std::array<double, 4> ann_sq{};
    double bulk = 0.0;
    for (std::size_t m = 0; m < radial.nodes.size(); ++m) {
        double s = 0.5 * (1.0 + r) + 0.5 * (1.0 - r) * radial.nodes[m];
        double wr = 0.5 * (1.0 - r) * radial.weights[m] * std::pow(s, d - 1);
        for (std::size_t k = 0; k < ang.dirs.size(); ++k) {
            double w = wr * ang.weights[k];
            auto p = point_at(s, ang.dirs[k]);
            for (std::size_t f = 0; f < 4; ++f)
                for (const Field& df : trees[f]) {
                    double v = interp(df, g, p);
                    ann_sq[f] += w * v * v;
                }
            double un = 0.0;
            for (int j = 0; j < 3; ++j)
                un += interp(dev[static_cast<std::size_t>(j) + 1], g, p) *
                      ang.dirs[k][static_cast<std::size_t>(j)];
            bulk += w * (2.0 * interp(dev[0], g, p) + wU * un);
        }
    }
    for (double s : ann_sq) out.S_annulus += std::sqrt(s);

    double surface = 0.0;
    double rfac = std::pow(r, d - 1);
    for (std::size_t k = 0; k < ang.dirs.size(); ++k) {
        auto p = point_at(r, ang.dirs[k]);
        double un = 0.0;
        for (int j = 0; j < 3; ++j)
            un += interp(dev[static_cast<std::size_t>(j) + 1], g, p) *
                  ang.dirs[k][static_cast<std::size_t>(j)];
        surface += ang.weights[k] * rfac * r * (interp(dev[0], g, p) + wU * un);
    }
    out.Q_r = surface + bulk;
    return out;
}

ShockConditions shock_conditions(const Functionals& f, double r, double C,
                                 double epsilon) {
    ShockConditions c;
    c.data_small = f.D_M <= epsilon;
    double rhs = C * std::sqrt(f.D_M) *
                 (std::sqrt(f.D_M) + std::sqrt(std::max(1.0 - r, 0.0))) * f.S_annulus;
    c.q_dominates = f.Q_r >= rhs;
    c.r_in_range = r >= 2.0 / 3.0 && r < 1.0;
    c.degenerate = !(f.Q_r > 0.0);
    return c;
}

ShockTime predicted_shock_time(double Q_r, double r, double C_prime,
                               const ScaleFactorSpec& spec) {
    if (!(Q_r > 0.0))
        throw std::domain_error("the shock-time bound needs Q_r > 0");
    if (!(r >= 2.0 / 3.0 && r < 1.0))
        throw std::domain_error("radius must lie in [2/3, 1)");
    if (!(C_prime > 0.0)) throw std::invalid_argument("C_prime must be positive");
    ShockTime st;
    st.tau_max = std::exp(C_prime * (1.0 - r) / Q_r);
    try {
        st.t_max = invert_conformal_time(spec, st.tau_max);
    } catch (const unreachable_error&) {
        st.t_max = std::nullopt;
    }
    return st;
}

ContrastResult contrast_experiment(const FluidState& data,
                                   const ScaleFactorSpec& spec_unstable,
                                   const ScaleFactorSpec& spec_stable,
                                   const RunOptions& base) {
    SoundSpeed rad = SoundSpeed::from(1.0 / 3.0);
    ContrastResult out;
    auto horizon_for = [&](const ScaleFactorSpec& spec) {
        double sup = conformal_time_supremum(spec);
        return std::isfinite(sup) ? std::min(base.ctl.t_end, 1.0 + 0.99 * (sup - 1.0))
                                  : base.ctl.t_end;
    };
    out.tau_end_unstable = horizon_for(spec_unstable);
    out.tau_end_stable = horizon_for(spec_stable);

    RunOptions opt_u = base;
    opt_u.frame = Frame::ConformalMinkowski;
    opt_u.ctl.t_end = out.tau_end_unstable;
    RunOptions opt_s = base;
    opt_s.frame = Frame::ConformalMinkowski;
    opt_s.ctl.t_end = out.tau_end_stable;
    if (!base.snapshot_prefix.empty()) {
        opt_u.snapshot_prefix = base.snapshot_prefix + "_unstable";
        opt_s.snapshot_prefix = base.snapshot_prefix + "_stable";
    }

    auto fut = std::async(std::launch::async, [&] {
        return run(data, spec_stable, rad, opt_s);
    });
    out.unstable = run(data, spec_unstable, rad, opt_u);
    out.stable = fut.get();
    return out;
}

}  // namespace frw
