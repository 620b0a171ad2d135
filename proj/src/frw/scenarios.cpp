#include "frw/scenarios.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "frw/diagnostics.hpp"
#include "frw/shocklab.hpp"
#include "frw/snapshot.hpp"

namespace frw {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return fs::path(cfg.out_dir) / name;
}

void write_series(const fs::path& path, const std::vector<DiagnosticsRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << csv_header() << "\n";
    for (const auto& r : records) out << csv_row(r) << "\n";
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json json_optional(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json outcome_json(const RunOutcome& o) {
    return json{{"status", status_name(o.status)},
                {"t_stop", o.t_stop},
                {"max_gradient", o.max_gradient},
                {"steps_taken", o.steps_taken}};
}

json base_report(const RunConfig& cfg) {
    return json{{"scenario", scenario_name(cfg.scenario)},
                {"effective_config", effective_config_text(cfg)}};
}

int run_exit_code(RunStatus s) {
    switch (s) {
        case RunStatus::ReachedEnd: return 0;
        case RunStatus::ShockGuardTripped: return 2;
        case RunStatus::NonFinite: return 1;
    }
    return 1;
}

json classify_json(const ExpansionClass& cls, double c2) {
    static const char* branch_names[3] = {"int e^{-2 Omega} dt",
                                          "int e^{-Omega} F(Omega) dt",
                                          "int e^{-Omega} dt"};
    json probes = json::array();
    for (int i = 0; i < 3; ++i) {
        const ImproperResult& pr = cls.integral_estimates[static_cast<std::size_t>(i)];
        probes.push_back(json{{"integral", branch_names[i]},
                              {"verdict", tail_verdict_name(pr.verdict)},
                              {"value", pr.value},
                              {"t_stop", pr.t_stop}});
    }
    return json{{"verdict", verdict_name(cls.verdict)},
                {"c2", c2},
                {"a3_checked", cls.a3_checked},
                {"integral_estimates", probes}};
}

int scenario_classify(const RunConfig& cfg, std::ostream& log) {
    ExpansionClass cls = classify(spacetime(cfg), cfg.c2);
    json j = base_report(cfg);
    j.update(classify_json(cls, cfg.c2));
    log << j.dump(2) << "\n";
    write_json(out_path(cfg, "report.json"), j);
    return 0;
}

int scenario_stability(const RunConfig& cfg, std::ostream& log, bool with_fit) {
    ScaleFactorSpec spec = spacetime(cfg);
    SoundSpeed c2 = SoundSpeed::from(cfg.c2);
    FluidState state = initial_state(cfg);
    RunOptions opt = run_options(cfg);
    if (!cfg.snapshot_times.empty())
        opt.snapshot_prefix = out_path(cfg, "snapshot").string();

    RunResult res = run(state, spec, c2, opt);
    write_series(out_path(cfg, "series.csv"), res.records);

    json j = base_report(cfg);
    j["outcome"] = outcome_json(res.outcome);
    j["records"] = res.records.size();
    if (!res.records.empty()) {
        j["S_N_first"] = res.records.front().S_N;
        j["S_N_last"] = res.records.back().S_N;
        double rmin = res.records.front().ratio_E_to_norm;
        double rmax = rmin;
        for (const auto& r : res.records) {
            rmin = std::min(rmin, r.ratio_E_to_norm);
            rmax = std::max(rmax, r.ratio_E_to_norm);
        }
        j["ratio_E_to_norm_min"] = rmin;
        j["ratio_E_to_norm_max"] = rmax;
    }
    if (with_fit) {
        double slope = decay_fit(res.records, cfg.fit_t1, cfg.fit_t2);
        j["fitted_slope"] = slope;
        j["homogeneous_slope"] = 3.0 * cfg.c2 - 2.0;
        j["fit_window"] = json::array({cfg.fit_t1, cfg.fit_t2});
        log << "fitted sup_u slope vs Omega: " << slope
            << " (homogeneous law: " << 3.0 * cfg.c2 - 2.0 << ")\n";
    }
    write_json(out_path(cfg, "report.json"), j);
    log << "status " << status_name(res.outcome.status) << " at t = "
        << res.outcome.t_stop << " after " << res.outcome.steps_taken
        << " steps; series.csv has " << res.records.size() << " rows\n";
    int code = run_exit_code(res.outcome.status);
    if (code == 2)
        log << "shock guard stop (exit 2) after max gradient "
            << res.outcome.max_gradient << "\n";
    return code;
}

int scenario_conformal_check(const RunConfig& cfg, std::ostream& log) {
    ScaleFactorSpec spec = spacetime(cfg);
    SoundSpeed c2 = SoundSpeed::from(cfg.c2);
    FluidState state = initial_state(cfg);
    double t_end = cfg.ctl.t_end;
    double tau_end = conformal_time(spec, t_end);

    json table = json::array();
    std::ofstream csv(out_path(cfg, "conformal_check.csv"));
    csv << "steps,dt_coordinate,dt_conformal,discrepancy,ratio_vs_prev\n";
    double prev = 0.0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int level = 0; level < cfg.refine_levels; ++level) {
        long long steps = cfg.base_steps << level;
        RunOptions opt = run_options(cfg);
        opt.record_diagnostics = false;
        opt.compute_div_residual = false;
        opt.fixed_steps = steps;
        opt.snapshot_times.clear();

        RunOptions opt_coor = opt;
        opt_coor.frame = Frame::CoordinateTime;
        opt_coor.ctl.t_end = t_end;
        RunResult coor = run(state, spec, c2, opt_coor);

        RunOptions opt_conf = opt;
        opt_conf.frame = Frame::ConformalMinkowski;
        opt_conf.ctl.t_end = tau_end;
        RunResult conf = run(state, spec, c2, opt_conf);

        if (coor.outcome.status != RunStatus::ReachedEnd ||
            conf.outcome.status != RunStatus::ReachedEnd)
            throw std::runtime_error(
                "conformal-check legs must reach t_end; tighten the step ladder");

        const FluidState& a = coor.outcome.final_state;
        const FluidState& b = conf.outcome.final_state;
        double disc = 0.0;
        for (std::size_t i = 0; i < a.L.size(); ++i)
            disc = std::max(disc, std::abs(a.L[i] - b.L[i]));
        for (int jx = 0; jx < 3; ++jx)
            for (std::size_t i = 0; i < a.L.size(); ++i)
                disc = std::max(disc,
                                std::abs(a.u[static_cast<std::size_t>(jx)][i] -
                                         b.u[static_cast<std::size_t>(jx)][i]));

        double ratio = level > 0 && disc > 0.0 ? prev / disc : 0.0;
        if (level > 0) worst_ratio = std::min(worst_ratio, ratio);
        char line[160];
        std::snprintf(line, sizeof line, "%lld,%.17g,%.17g,%.17g,%.17g", steps,
                      (t_end - state.t) / static_cast<double>(steps),
                      (tau_end - 1.0) / static_cast<double>(steps), disc, ratio);
        csv << line << "\n";
        table.push_back(json{{"steps", steps},
                             {"discrepancy", disc},
                             {"ratio_vs_prev", ratio}});
        log << "steps " << steps << ": frame discrepancy " << disc << "\n";
        prev = disc;
    }

    json j = base_report(cfg);
    j["t_end"] = t_end;
    j["tau_end"] = tau_end;
    j["table"] = table;
    j["min_refinement_ratio"] = worst_ratio;
    write_json(out_path(cfg, "report.json"), j);
    return 0;
}

int scenario_shock_contrast(const RunConfig& cfg, std::ostream& log) {
    ScaleFactorSpec unstable = spacetime(cfg);
    ScaleFactorSpec stable = stable_spacetime(cfg);
    SoundSpeed c2 = SoundSpeed::from(cfg.c2);
    FluidState state = initial_state(cfg);
    RunOptions opt = run_options(cfg);
    if (!cfg.snapshot_times.empty())
        opt.snapshot_prefix = out_path(cfg, "snapshot").string();

    ContrastResult res = contrast_experiment(state, unstable, stable, opt);
    write_series(out_path(cfg, "series_unstable.csv"), res.unstable.records);
    write_series(out_path(cfg, "series_stable.csv"), res.stable.records);

    ShockReport report;
    report.r = cfg.r;
    report.M = cfg.M;
    report.C = cfg.C;
    report.C_prime = cfg.C_prime;
    report.epsilon = cfg.epsilon;
    RescaledState data = to_minkowski(state, unstable, cfg.rho_bar, c2);
    report.functionals = christodoulou_functionals(data, cfg.rho_bar, cfg.r, cfg.M);
    report.conditions = shock_conditions(report.functionals, cfg.r, cfg.C, cfg.epsilon);
    if (!report.conditions.degenerate) {
        ShockTime st = predicted_shock_time(report.functionals.Q_r, cfg.r,
                                            cfg.C_prime, unstable);
        report.tau_max = st.tau_max;
        report.t_max = st.t_max;
    }
    if (res.unstable.outcome.status == RunStatus::ShockGuardTripped)
        report.observed_blowup_tau = res.unstable.outcome.t_stop;

    json j{{"r", report.r},
           {"M", report.M},
           {"C", report.C},
           {"C_prime", report.C_prime},
           {"epsilon", report.epsilon},
           {"D_M", report.functionals.D_M},
           {"S_annulus", report.functionals.S_annulus},
           {"Q_r", report.functionals.Q_r},
           {"conditions_met",
            json{{"data_small", report.conditions.data_small},
                 {"q_dominates", report.conditions.q_dominates},
                 {"r_in_range", report.conditions.r_in_range}}},
           {"degenerate", report.conditions.degenerate},
           {"tau_max", json_optional(report.tau_max)},
           {"t_max", json_optional(report.t_max)},
           {"observed_blowup_tau", json_optional(report.observed_blowup_tau)},
           {"tau_end_unstable", res.tau_end_unstable},
           {"tau_end_stable", res.tau_end_stable},
           {"unstable", outcome_json(res.unstable.outcome)},
           {"stable", outcome_json(res.stable.outcome)}};
    write_json(out_path(cfg, "shock_report.json"), j);

    json rep = base_report(cfg);
    rep["shock_report"] = j;
    write_json(out_path(cfg, "report.json"), rep);

    log << "unstable leg: " << status_name(res.unstable.outcome.status)
        << " at tau = " << res.unstable.outcome.t_stop << " (max gradient "
        << res.unstable.outcome.max_gradient << ")\n";
    log << "stable leg:   " << status_name(res.stable.outcome.status)
        << " at tau = " << res.stable.outcome.t_stop << " (max gradient "
        << res.stable.outcome.max_gradient << ")\n";
    if (res.unstable.outcome.status == RunStatus::ShockGuardTripped) {
        log << "guard trip on the non-integrable leg is the expected outcome "
               "(exit 2)\n";
        return 2;
    }
    return 0;
}

int scenario_divergence_check(const RunConfig& cfg, std::ostream& log) {
    ScaleFactorSpec spec = spacetime(cfg);
    SoundSpeed c2 = SoundSpeed::from(cfg.c2);
    FluidState state = initial_state(cfg);

    std::ofstream csv(out_path(cfg, "divergence_check.csv"));
    csv << "dt_probe,residual,ratio_vs_prev\n";
    json table = json::array();
    double prev = 0.0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int level = 0; level < cfg.refine_levels; ++level) {
        double dtp = cfg.dt_probe / std::pow(2.0, level);
        double resid = divergence_residual_order0(state, spec, c2, dtp, cfg.scheme);
        double ratio = level > 0 && resid > 0.0 ? prev / resid : 0.0;
        if (level > 0) worst_ratio = std::min(worst_ratio, ratio);
        char line[120];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g", dtp, resid, ratio);
        csv << line << "\n";
        table.push_back(json{{"dt_probe", dtp},
                             {"residual", resid},
                             {"ratio_vs_prev", ratio}});
        log << "dt_probe " << dtp << ": residual " << resid << "\n";
        prev = resid;
    }
    json j = base_report(cfg);
    j["table"] = table;
    j["min_refinement_ratio"] = worst_ratio;
    write_json(out_path(cfg, "report.json"), j);
    return 0;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.scenario) {
        case Scenario::Classify: return scenario_classify(cfg, log);
        case Scenario::Stability: return scenario_stability(cfg, log, false);
        case Scenario::DecayFit: return scenario_stability(cfg, log, true);
        case Scenario::ConformalCheck: return scenario_conformal_check(cfg, log);
        case Scenario::ShockContrast: return scenario_shock_contrast(cfg, log);
        case Scenario::DivergenceCheck: return scenario_divergence_check(cfg, log);
    }
    throw std::logic_error("unhandled scenario");
}

}  // namespace frw
