#include "frw/euler_rhs.hpp"

#include <cmath>

namespace frw {

namespace {

// Exactly-zeroed regime factor 3 c2 - 1.
double c31_of(SoundSpeed c2) {
    return c2.regime == Regime::Radiation ? 0.0 : 3.0 * c2.c2 - 1.0;
}

}  // namespace

PointRhs rhs_point(const std::array<double, 3>& u,
                   const std::array<double, 3>& gradL,
                   const std::array<std::array<double, 3>, 3>& gradu,
                   double Omega, double omega, SoundSpeed c2) {
    const double cs2 = c2.c2;
    const double c31 = c31_of(c2);
    const double e2 = std::exp(2.0 * Omega);
    const double usq = e2 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    const double u0 = std::sqrt(1.0 + usq);
    const double u0sq = u0 * u0;
    const double X = usq / u0sq;
    const double D = 1.0 - cs2 * X;
    // Non-finite states are left to propagate so the caller's finiteness
    // check can flag them; the throw covers only a genuine collapse of the
    // denominator, which no subluminal sound speed can produce.
    if (std::isfinite(D) && !(D > 1e-12))
        throw degenerate_state_error(
            "sonic-normalization denominator collapsed: D = " + std::to_string(D));

    const double divu = gradu[0][0] + gradu[1][1] + gradu[2][2];
    std::array<double, 3> adv;  // adv[j] = u^a d_a u^j
    for (int j = 0; j < 3; ++j)
        adv[j] = u[0] * gradu[0][j] + u[1] * gradu[1][j] + u[2] * gradu[2][j];
    const double S = e2 * (u[0] * adv[0] + u[1] * adv[1] + u[2] * adv[2]);
    const double udL = u[0] * gradL[0] + u[1] * gradL[1] + u[2] * gradL[2];

    PointRhs out;
    out.dL_dt = omega * (1.0 + cs2) * (-c31) * (X / D) +
                (1.0 / D) * ((cs2 - 1.0) * udL / u0 - (1.0 + cs2) * divu / u0 +
                             (1.0 + cs2) * S / (u0sq * u0));
    out.tri0 = omega * c31 * (usq / u0) / D -
               (cs2 / (1.0 + cs2)) * ((1.0 - X) / D) * udL +
               (cs2 * X / D) * divu - (S / u0sq) / D;
    for (int j = 0; j < 3; ++j) {
        double trij = omega * cs2 * c31 * u[j] * (X / D) +
                      cs2 * u[j] * ((divu / u0 - S / (u0sq * u0)) / D) -
                      (cs2 * cs2 / (1.0 + cs2)) * u[j] * ((1.0 - X) / D) * udL / u0 -
                      adv[j] / u0 -
                      (cs2 / (1.0 + cs2)) * std::exp(-2.0 * Omega) * gradL[j] / u0;
        out.du_dt[j] = omega * (3.0 * cs2 - 2.0) * u[j] + trij;
    }
    return out;
}

RhsFields rhs(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
              Scheme scheme, double nu) {
    Expansion e = evaluate(spec, state.t);
    return rhs_with_expansion(state, e.Omega, e.omega, c2, scheme, nu);
}

RhsFields rhs_with_expansion(const FluidState& state, double Omega, double omega,
                             SoundSpeed c2, Scheme scheme, double nu) {
    const Grid& g = state.grid;
    auto gL = spatial_gradient(state.L, g, scheme);
    std::array<std::array<Field, 3>, 3> gu;  // gu[a][j] = d_a u^j
    for (int j = 0; j < 3; ++j) {
        auto gj = spatial_gradient(state.u[static_cast<std::size_t>(j)], g, scheme);
        for (int a = 0; a < 3; ++a) gu[a][j] = std::move(gj[static_cast<std::size_t>(a)]);
    }

    RhsFields out;
    out.dL_dt = make_field(g);
    out.triangle_prime0 = make_field(g);
    for (auto& f : out.du_dt) f = make_field(g);

    std::int64_t n = g.size();
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            std::array<double, 3> u = {state.u[0][i], state.u[1][i], state.u[2][i]};
            std::array<double, 3> gradL = {gL[0][i], gL[1][i], gL[2][i]};
            std::array<std::array<double, 3>, 3> gradu;
            for (int a = 0; a < 3; ++a)
                for (int j = 0; j < 3; ++j) gradu[a][j] = gu[a][j][i];
            PointRhs p = rhs_point(u, gradL, gradu, Omega, omega, c2);
            out.dL_dt[i] = p.dL_dt;
            out.triangle_prime0[i] = p.tri0;
            for (int j = 0; j < 3; ++j) out.du_dt[static_cast<std::size_t>(j)][i] = p.du_dt[static_cast<std::size_t>(j)];
        }
    });

    if (nu > 0.0) {
        for (int j = 0; j < 3; ++j) {
            Field lap = index_laplacian(state.u[static_cast<std::size_t>(j)], g);
            for (std::int64_t i = 0; i < n; ++i)
                out.du_dt[static_cast<std::size_t>(j)][i] += nu * lap[i];
        }
    }
    return out;
}

CoefficientMatrices coefficient_matrices(const std::array<double, 3>& u,
                                         double Omega, SoundSpeed c2) {
    const double cs2 = c2.c2;
    const double e2 = std::exp(2.0 * Omega);
    const double u0 = u0_at(u, Omega);
    const double ul[3] = {e2 * u[0], e2 * u[1], e2 * u[2]};
    auto pi = projection_at(u, Omega);

    CoefficientMatrices m;
    for (auto& mat : m.A)
        for (auto& row : mat) row.fill(0.0);
    for (auto& row : m.A0_inv) row.fill(0.0);

    Mat4& A0 = m.A[0];
    A0[0][0] = u0;
    for (int a = 0; a < 3; ++a) {
        A0[0][1 + a] = (1.0 + cs2) * ul[a] / u0;
        A0[1 + a][0] = (cs2 / (1.0 + cs2)) * pi[static_cast<std::size_t>((1 + a) * 4)];
        A0[1 + a][1 + a] = u0;
    }
    for (int k = 0; k < 3; ++k) {
        Mat4& Ak = m.A[1 + k];
        Ak[0][0] = u[static_cast<std::size_t>(k)];
        Ak[0][1 + k] = 1.0 + cs2;
        for (int a = 0; a < 3; ++a) {
            Ak[1 + a][0] =
                (cs2 / (1.0 + cs2)) * pi[static_cast<std::size_t>((1 + a) * 4 + 1 + k)];
            Ak[1 + a][1 + a] = u[static_cast<std::size_t>(k)];
        }
    }

    m.detA0 = u0 * u0 * (u0 * u0 * (1.0 - cs2) + cs2);

    const double pi00 = u0 * u0 - 1.0;
    const double pij0[3] = {u[0] * u0, u[1] * u0, u[2] * u0};
    const double pref = 1.0 / (u0 * u0 - cs2 * pi00);
    double d[3];
    for (int j = 0; j < 3; ++j) {
        d[j] = 0.0;
        for (int k = 0; k < 3; ++k)
            if (k != j) d[j] += (cs2 / (u0 * u0)) * pij0[k] * ul[k];
    }
    Mat4& inv = m.A0_inv;
    inv[0][0] = pref * u0;
    for (int a = 0; a < 3; ++a) {
        inv[0][1 + a] = -pref * (1.0 + cs2) * ul[a] / u0;
        inv[1 + a][0] = -pref * (cs2 / (1.0 + cs2)) * pij0[a];
        inv[1 + a][1 + a] = pref * (u0 - d[a]);
        for (int b = 0; b < 3; ++b)
            if (b != a)
                inv[1 + a][1 + b] = pref * (cs2 / (u0 * u0)) * pij0[a] * ul[b];
    }
    return m;
}

bool lu4_solve(Mat4 A, std::array<double, 4> b, std::array<double, 4>& x) {
    int perm[4] = {0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (A[piv][col] == 0.0) return false;
        if (piv != col) {
            std::swap(A[piv], A[col]);
            std::swap(b[piv], b[col]);
            std::swap(perm[piv], perm[col]);
        }
        for (int r = col + 1; r < 4; ++r) {
            double f = A[r][col] / A[col][col];
            A[r][col] = 0.0;
            for (int c = col + 1; c < 4; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 4; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return true;
}

double verify_matrix_form(const FluidState& state, const ScaleFactorSpec& spec,
                          SoundSpeed c2, Scheme scheme) {
    Expansion e = evaluate(spec, state.t);
    const double cs2 = c2.c2;
    const Grid& g = state.grid;

    RhsFields direct = rhs_with_expansion(state, e.Omega, e.omega, c2, scheme, 0.0);

    auto gL = spatial_gradient(state.L, g, scheme);
    std::array<std::array<Field, 3>, 3> gu;
    for (int j = 0; j < 3; ++j) {
        auto gj = spatial_gradient(state.u[static_cast<std::size_t>(j)], g, scheme);
        for (int a = 0; a < 3; ++a) gu[a][j] = std::move(gj[static_cast<std::size_t>(a)]);
    }

    double e2 = std::exp(2.0 * e.Omega);
    double max_diff = 0.0;
    double max_direct = 0.0;
    std::int64_t n = g.size();
    for (std::int64_t i = 0; i < n; ++i) {
        std::array<double, 3> u = {state.u[0][i], state.u[1][i], state.u[2][i]};
        CoefficientMatrices cm = coefficient_matrices(u, e.Omega, c2);
        double u0 = u0_at(u, e.Omega);
        double usq = e2 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);

        std::array<double, 4> rhs_vec;
        rhs_vec[0] = -e.omega * (1.0 + cs2) / u0 * usq;
        for (int j = 0; j < 3; ++j)
            rhs_vec[1 + j] = e.omega * (3.0 * cs2 - 2.0) * u0 * u[static_cast<std::size_t>(j)];
        for (int a = 0; a < 3; ++a) {
            double gw[4] = {gL[static_cast<std::size_t>(a)][i], gu[a][0][i], gu[a][1][i],
                            gu[a][2][i]};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    rhs_vec[r] -= cm.A[1 + a][r][c] * gw[c];
        }
        std::array<double, 4> sol;
        if (!lu4_solve(cm.A[0], rhs_vec, sol))
            throw std::runtime_error("singular A0 encountered");

        double dvals[4] = {direct.dL_dt[i], direct.du_dt[0][i], direct.du_dt[1][i],
                           direct.du_dt[2][i]};
        for (int c = 0; c < 4; ++c) {
            max_diff = std::max(max_diff, std::abs(dvals[c] - sol[static_cast<std::size_t>(c)]));
            max_direct = std::max(max_direct, std::abs(dvals[c]));
        }
    }
    return max_diff / std::max(max_direct, 1e-300);
}

}  // namespace frw
