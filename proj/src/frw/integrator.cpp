#include "frw/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "frw/snapshot.hpp"

namespace frw {

const char* frame_name(Frame f) {
    return f == Frame::CoordinateTime ? "coordinate" : "conformal-minkowski";
}

const char* status_name(RunStatus s) {
    switch (s) {
        case RunStatus::ReachedEnd: return "ReachedEnd";
        case RunStatus::ShockGuardTripped: return "ShockGuardTripped";
        case RunStatus::NonFinite: return "NonFinite";
    }
    return "NonFinite";
}

namespace {

FluidState rk4_step(const FluidState& st,
                    const std::function<Expansion(double)>& expansion, SoundSpeed c2,
                    double dt, Scheme scheme, double nu) {
    auto deriv = [&](const FluidState& s) {
        Expansion e = expansion(s.t);
        return rhs_with_expansion(s, e.Omega, e.omega, c2, scheme, nu);
    };
    const Grid& g = st.grid;
    std::int64_t n = g.size();
    auto blend = [&](const RhsFields& k, double f) {
        FluidState s = st;
        s.t = st.t + f;
        parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t i = lo; i < hi; ++i) {
                s.L[i] = st.L[i] + f * k.dL_dt[i];
                for (int j = 0; j < 3; ++j) {
                    auto sj = static_cast<std::size_t>(j);
                    s.u[sj][i] = st.u[sj][i] + f * k.du_dt[sj][i];
                }
            }
        });
        return s;
    };
    RhsFields k1 = deriv(st);
    RhsFields k2 = deriv(blend(k1, 0.5 * dt));
    RhsFields k3 = deriv(blend(k2, 0.5 * dt));
    RhsFields k4 = deriv(blend(k3, dt));
    FluidState out = st;
    out.t = st.t + dt;
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            out.L[i] = st.L[i] + dt / 6.0 *
                                     (k1.dL_dt[i] + 2.0 * k2.dL_dt[i] +
                                      2.0 * k3.dL_dt[i] + k4.dL_dt[i]);
            for (int j = 0; j < 3; ++j) {
                auto sj = static_cast<std::size_t>(j);
                out.u[sj][i] =
                    st.u[sj][i] + dt / 6.0 *
                                      (k1.du_dt[sj][i] + 2.0 * k2.du_dt[sj][i] +
                                       2.0 * k3.du_dt[sj][i] + k4.du_dt[sj][i]);
            }
        }
    });
    return out;
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double max_gradient_u(const FluidState& st, Scheme scheme) {
    double m = 0.0;
    for (int j = 0; j < 3; ++j) {
        auto grads = spatial_gradient(st.u[static_cast<std::size_t>(j)], st.grid, scheme);
        for (int a = 0; a < 3; ++a)
            if (st.grid.active(a)) m = std::max(m, max_abs(grads[static_cast<std::size_t>(a)]));
    }
    return m;
}

}  // namespace

FluidState step(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
                double dt, Scheme scheme, double nu) {
    if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
    return rk4_step(
        state, [&spec](double t) { return evaluate(spec, t); }, c2, dt, scheme, nu);
}

double cfl_dt(const FluidState& state, double Omega, SoundSpeed c2, const Grid& grid,
              double cfl, double dt_max) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must be in (0, 1]");
    if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
    double eO = std::exp(Omega);
    double max_speed = 0.0;
    std::int64_t n = grid.size();
    for (std::int64_t i = 0; i < n; ++i) {
        std::array<double, 3> u = {state.u[0][i], state.u[1][i], state.u[2][i]};
        double w0 = u0_at(u, Omega);
        for (int j = 0; j < 3; ++j)
            max_speed = std::max(max_speed, eO * std::abs(u[static_cast<std::size_t>(j)]) / w0);
    }
    double lambda = std::exp(-Omega) * (max_speed + std::sqrt(c2.c2));
    if (!(lambda > 0.0)) return dt_max;
    double h = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a)
        if (grid.active(a)) h = std::min(h, grid.spacing(a));
    if (!std::isfinite(h)) return dt_max;
    return std::min(cfl * h / lambda, dt_max);
}

RunResult run(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
              const RunOptions& opt) {
    const bool conformal = opt.frame == Frame::ConformalMinkowski;
    if (conformal && c2.regime != Regime::Radiation)
        throw std::invalid_argument(
            "the conformal-minkowski frame requires the radiation regime");
    if (!(opt.ctl.value_threshold > 0.0))
        throw std::invalid_argument("value threshold must be positive");
    if (!(opt.ctl.gradient_threshold >= 0.0))
        throw std::invalid_argument("gradient threshold must be >= 0");
    if (!(opt.diag_interval > 0.0))
        throw std::invalid_argument("diagnostics cadence must be positive");
    if (!all_finite(state)) throw std::invalid_argument("initial state must be finite");

    // Map into the working frame.
    FluidState work = state;
    double tau_hint = 1.0;
    if (conformal) {
        Expansion e0 = evaluate(spec, state.t);
        double scale = std::exp(e0.Omega);
        for (auto& comp : work.u)
            for (double& v : comp) v *= scale;
        work.t = conformal_time(spec, state.t);
    } else {
        tau_hint = conformal_time(spec, state.t);
    }

    const double t0 = work.t;
    const double t_end = opt.ctl.t_end;
    if (t_end < t0 - 1e-12)
        throw std::invalid_argument("t_end lies before the state's current time");
    if (conformal && !(t_end < conformal_time_supremum(spec)))
        throw std::invalid_argument(
            "conformal horizon is not reached in finite coordinate time under "
            "this expansion law");

    auto expansion = [&spec, conformal](double t) {
        return conformal ? Expansion{0.0, 0.0} : evaluate(spec, t);
    };

    double grad0 = max_gradient_u(work, opt.scheme);
    const double grad_limit =
        opt.ctl.gradient_threshold > 0.0
            ? opt.ctl.gradient_threshold
            : (grad0 > 0.0 ? 100.0 * grad0
                           : std::numeric_limits<double>::infinity());

    RunResult result;
    double tau_at_last_record = tau_hint;
    double t_at_last_record = state.t;

    // Maps the final state back to coordinate time when the run was done in
    // the rescaled flat frame.
    auto finish = [&](RunResult&& res) -> RunResult {
        if (conformal) {
            FluidState& fs = res.outcome.final_state;
            double t_coor = (fs.t <= t0 + 1e-15)
                                ? state.t
                                : invert_conformal_time(spec, fs.t);
            double scale = std::exp(-evaluate(spec, t_coor).Omega);
            for (auto& comp : fs.u)
                for (double& v : comp) v *= scale;
            fs.t = t_coor;
        }
        return std::move(res);
    };

    auto emit_record = [&](const FluidState& w, double grad) {
        if (!opt.record_diagnostics) return;
        if (!result.records.empty()) {
            double prev = conformal ? result.records.back().tau
                                    : result.records.back().t;
            if (std::abs(prev - w.t) <= 1e-14 * std::max(1.0, std::abs(w.t)))
                return;
        }
        DiagnosticsRecord r;
        double Om, F;
        if (conformal) {
            r.tau = w.t;
            double t_map = (w.t <= t0 + 1e-15) ? state.t
                                               : invert_conformal_time(spec, w.t);
            Expansion ee = evaluate(spec, t_map);
            r.t = t_map;
            r.Omega = ee.Omega;
            r.omega = ee.omega;
            Om = 0.0;
            F = 1.0;
        } else {
            Expansion ee = evaluate(spec, w.t);
            r.t = w.t;
            tau_at_last_record += conformal_time_between(spec, t_at_last_record, w.t);
            t_at_last_record = w.t;
            r.tau = tau_at_last_record;
            r.Omega = ee.Omega;
            r.omega = ee.omega;
            Om = ee.Omega;
            F = decay_factor(spec, ee.Omega);
        }
        Norms nm = norms_with_expansion(w, Om, F, c2, opt.N, opt.scheme);
        r.S_N = nm.S_N;
        r.U_Nm1 = nm.U_Nm1;
        r.S_N_velocity = nm.S_N_velocity;
        Energies en = energy_with_expansion(w, Om, c2, opt.N, opt.scheme);
        r.E_N = en.E_N;
        r.E_N_velocity = en.E_N_velocity;
        r.E_Nm1_density = en.E_Nm1_density;
        r.ratio_E_to_norm = en.weighted_norm_sq > 0.0
                                ? en.total_sq / en.weighted_norm_sq
                                : 0.0;
        r.sup_u = std::max({max_abs(w.u[0]), max_abs(w.u[1]), max_abs(w.u[2])});
        r.sup_L = max_abs(w.L);
        r.max_grad_u = grad;
        if (opt.compute_div_residual) {
            r.div_residual =
                conformal
                    ? divergence_residual_order0_with_expansion(
                          w, 0.0, 0.0, c2, opt.dt_probe, opt.scheme, true)
                    : divergence_residual_order0(w, spec, c2, opt.dt_probe,
                                                 opt.scheme);
        }
        result.records.push_back(std::move(r));
    };

    auto write_snap = [&](const FluidState& w) {
        if (opt.snapshot_prefix.empty()) return;
        char name[64];
        std::snprintf(name, sizeof name, "_t%.6g.bin", w.t);
        write_snapshot(opt.snapshot_prefix + name, w, c2.c2);
    };

    emit_record(work, grad0);

    std::vector<double> snaps = opt.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] <= t0 + 1e-12) {
        if (std::abs(snaps[next_snap] - t0) <= 1e-12) write_snap(work);
        ++next_snap;
    }

    RunOutcome& outcome = result.outcome;
    outcome.max_gradient = grad0;

    long long k_fixed = 0;
    double next_mark = t0 + opt.diag_interval;
    const double eps = 1e-12 * std::max(1.0, std::abs(t_end));

    while (work.t < t_end - eps) {
        double dt;
        if (opt.fixed_steps > 0) {
            dt = (t_end - t0) / static_cast<double>(opt.fixed_steps);
        } else {
            dt = cfl_dt(work, expansion(work.t).Omega, c2, work.grid, opt.ctl.cfl,
                        opt.ctl.dt_max);
            dt = std::min(dt, t_end - work.t);
            if (opt.record_diagnostics) dt = std::min(dt, next_mark - work.t);
            if (next_snap < snaps.size())
                dt = std::min(dt, snaps[next_snap] - work.t);
            dt = std::max(dt, eps);
        }

        work = rk4_step(work, expansion, c2, dt, opt.scheme, opt.nu);
        ++outcome.steps_taken;
        if (opt.fixed_steps > 0) {
            ++k_fixed;
            work.t = t0 + (t_end - t0) * static_cast<double>(k_fixed) /
                              static_cast<double>(opt.fixed_steps);
        }

        if (!all_finite(work)) {
            outcome.status = RunStatus::NonFinite;
            outcome.t_stop = work.t;
            outcome.final_state = std::move(work);
            return finish(std::move(result));
        }

        double grad = max_gradient_u(work, opt.scheme);
        outcome.max_gradient = std::max(outcome.max_gradient, grad);
        double sup_val = std::max(
            {max_abs(work.L), max_abs(work.u[0]), max_abs(work.u[1]),
             max_abs(work.u[2])});
        if (grad > grad_limit || sup_val > opt.ctl.value_threshold) {
            outcome.status = RunStatus::ShockGuardTripped;
            outcome.t_stop = work.t;
            outcome.max_gradient = grad;
            emit_record(work, grad);
            outcome.final_state = work;
            return finish(std::move(result));
        }

        if (opt.fixed_steps == 0) {
            if (opt.record_diagnostics && work.t >= next_mark - eps &&
                work.t < t_end - eps) {
                emit_record(work, grad);
                next_mark += opt.diag_interval;
            }
            if (next_snap < snaps.size() &&
                std::abs(work.t - snaps[next_snap]) <= 1e-12) {
                write_snap(work);
                ++next_snap;
            }
        }
    }

    outcome.status = RunStatus::ReachedEnd;
    outcome.t_stop = work.t;
    emit_record(work, max_gradient_u(work, opt.scheme));
    outcome.final_state = std::move(work);
    return finish(std::move(result));
}

}  // namespace frw
