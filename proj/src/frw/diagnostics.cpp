#include "frw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace frw {

std::vector<std::array<int, 3>> multi_indices(int order, const Grid& grid) {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    std::vector<std::array<int, 3>> out;
    int m1 = grid.active(0) ? order : 0;
    int m2 = grid.active(1) ? order : 0;
    int m3 = grid.active(2) ? order : 0;
    for (int total = 0; total <= order; ++total)
        for (int a1 = 0; a1 <= std::min(total, m1); ++a1)
            for (int a2 = 0; a2 <= std::min(total - a1, m2); ++a2) {
                int a3 = total - a1 - a2;
                if (a3 > m3) continue;
                out.push_back({a1, a2, a3});
            }
    return out;
}

std::vector<Field> derivative_tree(const Field& f, const Grid& grid, int order,
                                   Scheme scheme) {
    auto indices = multi_indices(order, grid);
    std::vector<Field> tree(indices.size());
    std::map<std::array<int, 3>, std::size_t> pos;
    for (std::size_t i = 0; i < indices.size(); ++i) pos[indices[i]] = i;
    tree[0] = f;
    for (std::size_t i = 1; i < indices.size(); ++i) {
        std::array<int, 3> alpha = indices[i];
        int axis = (alpha[0] > 0) ? 0 : (alpha[1] > 0) ? 1 : 2;
        std::array<int, 3> parent = alpha;
        parent[static_cast<std::size_t>(axis)] -= 1;
        tree[i] = derivative(tree[pos.at(parent)], grid, axis, scheme);
    }
    return tree;
}

double integral(const Field& f, const Grid& grid) {
    double s = 0.0;
    for (double v : f) s += v;
    return s * grid.cell_volume();
}

namespace {

double l2_sq(const Field& f, const Grid& grid) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return s * grid.cell_volume();
}

int order_of(const std::array<int, 3>& alpha) {
    return alpha[0] + alpha[1] + alpha[2];
}

}  // namespace

Norms norms(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
            int N, Scheme scheme) {
    Expansion e = evaluate(spec, state.t);
    return norms_with_expansion(state, e.Omega, decay_factor(spec, e.Omega), c2, N,
                                scheme);
}

Norms norms_with_expansion(const FluidState& state, double Omega, double F,
                           SoundSpeed c2, int N, Scheme scheme) {
    if (N < 1) throw std::invalid_argument("Sobolev order must be >= 1");
    const Grid& g = state.grid;
    auto indices = multi_indices(N, g);

    double eO = std::exp(Omega);
    bool dust = c2.regime == Regime::Dust;

    // Cumulative squared Sobolev sums by order for L and each u^j.
    std::vector<double> L_sq(static_cast<std::size_t>(N) + 1, 0.0);
    std::array<std::vector<double>, 3> u_sq;
    for (auto& v : u_sq) v.assign(static_cast<std::size_t>(N) + 1, 0.0);

    int maxL = dust ? N - 1 : N;
    {
        auto tree = derivative_tree(state.L, g, maxL, scheme);
        auto idxL = multi_indices(maxL, g);
        for (std::size_t i = 0; i < idxL.size(); ++i)
            L_sq[static_cast<std::size_t>(order_of(idxL[i]))] += l2_sq(tree[i], g);
    }
    for (int j = 0; j < 3; ++j) {
        auto tree = derivative_tree(state.u[static_cast<std::size_t>(j)], g, N, scheme);
        for (std::size_t i = 0; i < indices.size(); ++i)
            u_sq[static_cast<std::size_t>(j)][static_cast<std::size_t>(order_of(indices[i]))] +=
                l2_sq(tree[i], g);
    }
    auto cumulative = [](const std::vector<double>& by_order, int upto) {
        double s = 0.0;
        for (int k = 0; k <= upto; ++k) s += by_order[static_cast<std::size_t>(k)];
        return s;
    };

    Norms out;
    double sum_u_HN = 0.0;
    for (int j = 0; j < 3; ++j)
        sum_u_HN += std::sqrt(cumulative(u_sq[static_cast<std::size_t>(j)], N));

    if (dust) {
        double velocity = std::exp(2.0 * Omega) * sum_u_HN;
        out.S_N = std::sqrt(cumulative(L_sq, N - 1)) + velocity;
        out.S_N_velocity = velocity;
        return out;
    }
    out.S_N = std::sqrt(cumulative(L_sq, N)) + eO * sum_u_HN;
    if (c2.regime == Regime::Intermediate) {
        double lower_sq = 0.0;
        for (int j = 0; j < 3; ++j)
            lower_sq += cumulative(u_sq[static_cast<std::size_t>(j)], N - 1);
        out.U_Nm1 = eO * F * std::sqrt(lower_sq);
        out.S_N += *out.U_Nm1;
    }
    return out;
}

Energies energy(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
                int N, Scheme scheme) {
    return energy_with_expansion(state, evaluate(spec, state.t).Omega, c2, N, scheme);
}

Energies energy_with_expansion(const FluidState& state, double Omega, SoundSpeed c2,
                               int N, Scheme scheme) {
    if (N < 1) throw std::invalid_argument("Sobolev order must be >= 1");
    const Grid& g = state.grid;
    const double cs2 = c2.c2;
    const double e2 = std::exp(2.0 * Omega);
    const bool dust = c2.regime == Regime::Dust;
    auto indices = multi_indices(N, g);

    auto treeL = derivative_tree(state.L, g, N, scheme);
    std::array<std::vector<Field>, 3> treeu;
    for (int j = 0; j < 3; ++j)
        treeu[static_cast<std::size_t>(j)] =
            derivative_tree(state.u[static_cast<std::size_t>(j)], g, N, scheme);

    Field u0 = u0_field(state, Omega);
    std::int64_t n = g.size();

    double total = 0.0;           // non-dust energy square
    double total_vel = 0.0;       // dust velocity energy square
    double total_dens = 0.0;      // dust density energy square
    double norm_L_sq = 0.0;       // sum over alpha of ||d_alpha L||^2
    double norm_L_sq_low = 0.0;   // same, |alpha| <= N-1
    double norm_u_sq = 0.0;       // sum over alpha, j of ||d_alpha u^j||^2

    for (std::size_t ai = 0; ai < indices.size(); ++ai) {
        int ord = order_of(indices[ai]);
        const Field& vL = treeL[ai];
        const Field& v1 = treeu[0][ai];
        const Field& v2 = treeu[1][ai];
        const Field& v3 = treeu[2][ai];

        double accum = 0.0, accum_dens = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            double w0 = u0[i];
            double dot = state.u[0][i] * v1[i] + state.u[1][i] * v2[i] +
                         state.u[2][i] * v3[i];
            double vdot0 = e2 * dot / w0;
            double vsq = e2 * (v1[i] * v1[i] + v2[i] * v2[i] + v3[i] * v3[i]);
            double quad = -vdot0 * vdot0 + vsq;
            if (dust) {
                accum += e2 * w0 * quad;
                if (ord <= N - 1) accum_dens += w0 * vL[i] * vL[i];
            } else {
                accum += (cs2 * w0 / (1.0 + cs2)) * vL[i] * vL[i] +
                         2.0 * cs2 * vdot0 * vL[i] + (1.0 + cs2) * w0 * quad;
            }
        }
        double cell = g.cell_volume();
        if (dust) {
            total_vel += accum * cell;
            total_dens += accum_dens * cell;
        } else {
            total += accum * cell;
        }

        double lsq = l2_sq(vL, g);
        norm_L_sq += lsq;
        if (ord <= N - 1) norm_L_sq_low += lsq;
        norm_u_sq += l2_sq(v1, g) + l2_sq(v2, g) + l2_sq(v3, g);
    }

    Energies out;
    auto clamp_sqrt = [&out](double v) {
        if (v < 0.0) {
            out.clamped = true;
            v = 0.0;
        }
        return std::sqrt(v);
    };
    if (dust) {
        out.E_N_velocity = clamp_sqrt(total_vel);
        out.E_Nm1_density = clamp_sqrt(total_dens);
        out.total_sq = std::max(total_vel, 0.0) + std::max(total_dens, 0.0);
        out.weighted_norm_sq = norm_L_sq_low + e2 * e2 * norm_u_sq;
    } else {
        out.E_N = clamp_sqrt(total);
        out.total_sq = std::max(total, 0.0);
        out.weighted_norm_sq =
            (cs2 / (1.0 + cs2)) * norm_L_sq + (1.0 + cs2) * e2 * norm_u_sq;
    }
    return out;
}

namespace {

struct Energy0 {
    double value = 0.0;  // non-dust
    double vel = 0.0;    // dust pair
    double dens = 0.0;
};

Energy0 energy0_sq(const FluidState& st, double Omega, SoundSpeed c2) {
    const Grid& g = st.grid;
    const double cs2 = c2.c2;
    const double e2 = std::exp(2.0 * Omega);
    const bool dust = c2.regime == Regime::Dust;
    Energy0 out;
    double acc = 0.0, acc_v = 0.0, acc_d = 0.0;
    std::int64_t n = g.size();
    for (std::int64_t i = 0; i < n; ++i) {
        double usq = e2 * (st.u[0][i] * st.u[0][i] + st.u[1][i] * st.u[1][i] +
                           st.u[2][i] * st.u[2][i]);
        double w0 = std::sqrt(1.0 + usq);
        double du0 = usq / w0;
        double quad = -du0 * du0 + usq;
        double L = st.L[i];
        if (dust) {
            acc_v += e2 * w0 * quad;
            acc_d += w0 * L * L;
        } else {
            acc += (cs2 * w0 / (1.0 + cs2)) * L * L + 2.0 * cs2 * du0 * L +
                   (1.0 + cs2) * w0 * quad;
        }
    }
    double cell = g.cell_volume();
    out.value = acc * cell;
    out.vel = acc_v * cell;
    out.dens = acc_d * cell;
    return out;
}

// Volume integral of the analytic divergence of the order-0 energy
// current (dust: the velocity/density pair).
Energy0 analytic_divergence0(const FluidState& st, double Omega, double omega,
                             SoundSpeed c2, Scheme scheme) {
    const Grid& g = st.grid;
    const double cs2 = c2.c2;
    const double e2 = std::exp(2.0 * Omega);
    const bool dust = c2.regime == Regime::Dust;
    const double c31 = (c2.regime == Regime::Radiation) ? 0.0 : 3.0 * cs2 - 1.0;

    RhsFields der = rhs_with_expansion(st, Omega, omega, c2, scheme, 0.0);
    auto gL = spatial_gradient(st.L, g, scheme);
    std::array<std::array<Field, 3>, 3> gu;  // gu[a][j] = d_a u^j
    for (int j = 0; j < 3; ++j) {
        auto gj = spatial_gradient(st.u[static_cast<std::size_t>(j)], g, scheme);
        for (int a = 0; a < 3; ++a) gu[a][j] = std::move(gj[static_cast<std::size_t>(a)]);
    }

    double acc = 0.0, acc_v = 0.0, acc_d = 0.0;
    std::int64_t n = g.size();
    for (std::int64_t i = 0; i < n; ++i) {
        double u[3] = {st.u[0][i], st.u[1][i], st.u[2][i]};
        double usq = e2 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        double w0 = std::sqrt(1.0 + usq);
        double L = st.L[i];
        double divu = gu[0][0][i] + gu[1][1][i] + gu[2][2][i];
        double du[3] = {der.du_dt[0][i], der.du_dt[1][i], der.du_dt[2][i]};
        double tri0 = der.triangle_prime0[i];
        double dmu_umu = tri0 + divu;
        double du0 = usq / w0;
        double quad = -du0 * du0 + usq;
        double inhom = -omega * (1.0 + cs2) / w0 * usq;

        // u^nu d_nu (u^a / u^0)
        double unu_d[3];
        for (int a = 0; a < 3; ++a) {
            double dt_term = du[a] / w0 - u[a] / (w0 * w0) * tri0;
            double dx_term = 0.0;
            for (int k = 0; k < 3; ++k) {
                double dku0 = e2 *
                              (u[0] * gu[k][0][i] + u[1] * gu[k][1][i] +
                               u[2] * gu[k][2][i]) /
                              w0;
                dx_term += u[k] * (gu[k][a][i] / w0 - u[a] / (w0 * w0) * dku0);
            }
            unu_d[a] = w0 * dt_term + dx_term;
        }
        double G0 = e2 * (unu_d[0] * u[0] + unu_d[1] * u[1] + unu_d[2] * u[2]) +
                    3.0 * cs2 * omega * w0 * du0;

        if (dust) {
            acc_v += e2 * dmu_umu * quad - 2.0 * omega * e2 * w0 * du0 * du0 -
                     2.0 * e2 * G0 * du0;
            double adv_dot = 0.0;  // u^b u^k d_k u^b
            for (int b = 0; b < 3; ++b)
                adv_dot += u[b] * (u[0] * gu[0][b][i] + u[1] * gu[1][b][i] +
                                   u[2] * gu[2][b][i]);
            acc_d += dmu_umu * L * L + (4.0 / w0) * omega * usq * L +
                     (2.0 / (w0 * w0)) * e2 * adv_dot * L - 2.0 * divu * L +
                     2.0 * inhom * L;
        } else {
            double dt_dot = 0.0;  // sum_b (d_t (u^b/u^0)) u^b
            for (int b = 0; b < 3; ++b)
                dt_dot += (du[b] / w0 - u[b] / (w0 * w0) * tri0) * u[b];
            acc += (cs2 * dmu_umu / (1.0 + cs2)) * L * L +
                   (1.0 + cs2) * dmu_umu * quad + 2.0 * cs2 * e2 * dt_dot * L +
                   4.0 * cs2 * omega * (usq / w0) * L +
                   2.0 * (1.0 + cs2) * c31 * omega * w0 * usq +
                   (2.0 * cs2 * inhom / (1.0 + cs2)) * L -
                   2.0 * (1.0 + cs2) * G0 * du0;
        }
    }
    double cell = g.cell_volume();
    return {acc * cell, acc_v * cell, acc_d * cell};
}

// One signed RK4 step used only by the divergence probe.
FluidState probe_step(const FluidState& st, double dt,
                      const std::function<Expansion(double)>& expansion,
                      SoundSpeed c2, Scheme scheme) {
    auto deriv = [&](const FluidState& s) {
        Expansion e = expansion(s.t);
        return rhs_with_expansion(s, e.Omega, e.omega, c2, scheme, 0.0);
    };
    const Grid& g = st.grid;
    std::int64_t n = g.size();
    auto blend = [&](const FluidState& base, const RhsFields& k, double f) {
        FluidState s = base;
        s.t = base.t + f;
        for (std::int64_t i = 0; i < n; ++i) {
            s.L[i] = base.L[i] + f * k.dL_dt[i];
            for (int j = 0; j < 3; ++j)
                s.u[static_cast<std::size_t>(j)][i] =
                    base.u[static_cast<std::size_t>(j)][i] +
                    f * k.du_dt[static_cast<std::size_t>(j)][i];
        }
        return s;
    };
    RhsFields k1 = deriv(st);
    RhsFields k2 = deriv(blend(st, k1, 0.5 * dt));
    RhsFields k3 = deriv(blend(st, k2, 0.5 * dt));
    RhsFields k4 = deriv(blend(st, k3, dt));
    FluidState out = st;
    out.t = st.t + dt;
    for (std::int64_t i = 0; i < n; ++i) {
        out.L[i] = st.L[i] + dt / 6.0 *
                                 (k1.dL_dt[i] + 2.0 * k2.dL_dt[i] +
                                  2.0 * k3.dL_dt[i] + k4.dL_dt[i]);
        for (int j = 0; j < 3; ++j) {
            auto sj = static_cast<std::size_t>(j);
            out.u[sj][i] = st.u[sj][i] + dt / 6.0 *
                                             (k1.du_dt[sj][i] + 2.0 * k2.du_dt[sj][i] +
                                              2.0 * k3.du_dt[sj][i] + k4.du_dt[sj][i]);
        }
    }
    return out;
}

double divergence_residual_core(const FluidState& state,
                                const std::function<Expansion(double)>& expansion,
                                SoundSpeed c2, double dt_probe, Scheme scheme,
                                double t_floor) {
    if (!(dt_probe > 0.0)) throw std::invalid_argument("dt_probe must be positive");
    if (!all_finite(state)) throw std::invalid_argument("state must be finite");
    const bool dust = c2.regime == Regime::Dust;
    Expansion e0 = expansion(state.t);

    auto energy_at = [&](const FluidState& s) {
        return energy0_sq(s, expansion(s.t).Omega, c2);
    };

    double dval, dvel, ddens;
    if (state.t - dt_probe >= t_floor) {
        FluidState sp = probe_step(state, +dt_probe, expansion, c2, scheme);
        FluidState sm = probe_step(state, -dt_probe, expansion, c2, scheme);
        Energy0 Ep = energy_at(sp);
        Energy0 Em = energy_at(sm);
        dval = (Ep.value - Em.value) / (2.0 * dt_probe);
        dvel = (Ep.vel - Em.vel) / (2.0 * dt_probe);
        ddens = (Ep.dens - Em.dens) / (2.0 * dt_probe);
    } else {
        // Second-order one-sided difference when a backward probe would
        // leave the time domain.
        FluidState s1 = probe_step(state, dt_probe, expansion, c2, scheme);
        FluidState s2 = probe_step(s1, dt_probe, expansion, c2, scheme);
        Energy0 E0 = energy_at(state);
        Energy0 E1 = energy_at(s1);
        Energy0 E2 = energy_at(s2);
        dval = (-3.0 * E0.value + 4.0 * E1.value - E2.value) / (2.0 * dt_probe);
        dvel = (-3.0 * E0.vel + 4.0 * E1.vel - E2.vel) / (2.0 * dt_probe);
        ddens = (-3.0 * E0.dens + 4.0 * E1.dens - E2.dens) / (2.0 * dt_probe);
    }

    Energy0 an = analytic_divergence0(state, e0.Omega, e0.omega, c2, scheme);
    if (dust) return std::abs(dvel - an.vel) + std::abs(ddens - an.dens);
    return std::abs(dval - an.value);
}

}  // namespace

OrderZeroEnergySq order_zero_energy_sq(const FluidState& state, double Omega,
                                       SoundSpeed c2) {
    Energy0 e = energy0_sq(state, Omega, c2);
    return {e.value, e.vel, e.dens};
}

OrderZeroEnergySq order_zero_energy_rate(const FluidState& state, double Omega,
                                         double omega, SoundSpeed c2,
                                         Scheme scheme) {
    Energy0 e = analytic_divergence0(state, Omega, omega, c2, scheme);
    return {e.value, e.vel, e.dens};
}

double divergence_residual_order0(const FluidState& state, const ScaleFactorSpec& spec,
                                  SoundSpeed c2, double dt_probe, Scheme scheme) {
    return divergence_residual_core(
        state, [&spec](double t) { return evaluate(spec, t); }, c2, dt_probe, scheme,
        1.0);
}

double divergence_residual_order0_with_expansion(const FluidState& state,
                                                 double Omega, double omega,
                                                 SoundSpeed c2, double dt_probe,
                                                 Scheme scheme, bool flat_time) {
    (void)flat_time;
    Expansion fixed{Omega, omega};
    return divergence_residual_core(
        state, [fixed](double) { return fixed; }, c2, dt_probe, scheme,
        -std::numeric_limits<double>::infinity());
}

double decay_fit(const std::vector<DiagnosticsRecord>& series, double t1, double t2) {
    std::vector<double> xs, ys;
    for (const auto& r : series) {
        if (r.t < t1 || r.t > t2) continue;
        if (!(r.sup_u > 0.0))
            throw std::runtime_error("decay fit window contains non-positive sup_u");
        xs.push_back(r.Omega);
        ys.push_back(std::log(r.sup_u));
    }
    if (xs.size() < 2)
        throw std::runtime_error("decay fit window has fewer than two samples");
    double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::runtime_error("decay fit window spans no expansion range");
    return sxy / sxx;
}

std::string csv_header() {
    return "t,tau,Omega,omega,S_N,U_Nm1,S_N_velocity,E_N,E_N_velocity,"
           "E_Nm1_density,sup_u,sup_L,max_grad_u,div_residual,ratio_E_to_norm";
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
}

}  // namespace

std::string csv_row(const DiagnosticsRecord& r) {
    std::string row;
    row += fmt(r.t);
    row += ',';
    row += fmt(r.tau);
    row += ',';
    row += fmt(r.Omega);
    row += ',';
    row += fmt(r.omega);
    row += ',';
    row += fmt(r.S_N);
    row += ',';
    row += fmt_opt(r.U_Nm1);
    row += ',';
    row += fmt_opt(r.S_N_velocity);
    row += ',';
    row += fmt_opt(r.E_N);
    row += ',';
    row += fmt_opt(r.E_N_velocity);
    row += ',';
    row += fmt_opt(r.E_Nm1_density);
    row += ',';
    row += fmt(r.sup_u);
    row += ',';
    row += fmt(r.sup_L);
    row += ',';
    row += fmt(r.max_grad_u);
    row += ',';
    row += fmt(r.div_residual);
    row += ',';
    row += fmt(r.ratio_E_to_norm);
    return row;
}

}  // namespace frw
