#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "frw/config.hpp"
#include "frw/scenarios.hpp"
#include "frw/snapshot.hpp"

using namespace frw;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const config_error& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    for (const auto& p : problems)
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("frw_cfg_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const fs::path& path) { return json::parse(read_file(path)); }

int execute_quiet(const std::string& text) {
    std::ostringstream log;
    return execute(parse_config_text(text), log);
}

}  // namespace

TEST_CASE("a minimal config carries the documented defaults") {
    RunConfig cfg = parse_config_text("scenario = classify\n");
    CHECK(cfg.scenario == Scenario::Classify);
    CHECK(cfg.family == ScaleFactorSpec::Family::Exponential);
    CHECK(cfg.H == 1.0);
    CHECK(cfg.c2 == 1.0 / 3.0);
    CHECK(cfg.dims == std::array<std::int64_t, 3>{16, 16, 16});
    CHECK(cfg.lengths[0] == doctest::Approx(6.283185307179586));
    CHECK(cfg.N == 3);
    CHECK(cfg.scheme == Scheme::Spectral);
    CHECK(cfg.frame == Frame::CoordinateTime);
    CHECK(cfg.ctl.cfl == 0.4);
    CHECK(cfg.ctl.t_end == 10.0);
    CHECK(cfg.seed == 0);
    CHECK(cfg.perturbations.empty());
    CHECK(cfg.out_dir == ".");
}

TEST_CASE("the scenario key is required and checked") {
    auto missing = problems_of("c2 = 0.1\n");
    CHECK(mentions(missing, "missing required key 'scenario'"));
    auto unknown = problems_of("scenario = warpdrive\n");
    CHECK(mentions(unknown, "not a known scenario"));
}

TEST_CASE("sound speeds outside the admissible interval are rejected") {
    auto problems = problems_of("scenario = stability\nc2 = 0.5\n");
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("<memory>:2:") == 0);
    CHECK(problems[0].find("[0, 1/3]") != std::string::npos);
    CHECK(mentions(problems_of("scenario = stability\nc2 = -0.1\n"), "[0, 1/3]"));
}

TEST_CASE("ratios parse to the exact quotient") {
    RunConfig cfg = parse_config_text("scenario = stability\nc2 = 1/3\n");
    CHECK(cfg.c2 == 1.0 / 3.0);
    CHECK(parse_config_text("scenario = stability\nc2 = 1/10\n").c2 == 0.1);
    CHECK(mentions(problems_of("scenario = stability\nc2 = 1/0\n"),
                   "not a number or ratio"));
}

TEST_CASE("each expansion family demands its defining parameter") {
    CHECK(mentions(problems_of("scenario = stability\nfamily = exponential\n"),
                   "missing required key 'H'"));
    CHECK(mentions(problems_of("scenario = stability\nfamily = power-law\n"),
                   "missing required key 'Q'"));
    CHECK(mentions(problems_of("scenario = stability\nfamily = tabulated\n"),
                   "missing required key 'table_path'"));
    CHECK(mentions(problems_of("scenario = stability\nfamily = linear\n"),
                   "is not one of"));
    CHECK(mentions(problems_of("scenario = stability\nfamily = power-law\nQ = 0\n"),
                   "key 'Q'"));
}

TEST_CASE("tabulated laws load and validate their table file") {
    fs::path dir = fresh_dir("table");
    fs::path good = write_file(dir / "good.tbl", "# t Omega\n1 0\n2 1\n4 2\n");
    RunConfig cfg = parse_config_text("scenario = stability\nfamily = tabulated\n"
                                      "table_path = " + good.string() + "\n");
    CHECK(evaluate(spacetime(cfg), 3.0).Omega == doctest::Approx(1.5).epsilon(1e-14));

    auto missing = problems_of("scenario = stability\nfamily = tabulated\n"
                               "table_path = " + (dir / "nope.tbl").string() + "\n");
    CHECK(mentions(missing, "cannot be opened"));

    fs::path bad = write_file(dir / "bad.tbl", "1 0\n2 1\n1.5 2\n");
    auto unsorted = problems_of("scenario = stability\nfamily = tabulated\n"
                                "table_path = " + bad.string() + "\n");
    CHECK(mentions(unsorted, "key 'table_path'"));

    fs::path garbled = write_file(dir / "garbled.tbl", "1 0\ntwo 1\n");
    CHECK(mentions(problems_of("scenario = stability\nfamily = tabulated\n"
                               "table_path = " + garbled.string() + "\n"),
                   "expected 't Omega'"));
}

TEST_CASE("every structural problem is reported with its line") {
    auto problems = problems_of(
        "scenario = stability\n"
        "this line has no equals sign\n"
        "c2 = 0.9\n"
        "c2 = 0.2\n"
        "warp = 9\n");
    REQUIRE(problems.size() == 4);
    CHECK(mentions(problems, "<memory>:2: expected 'key = value'"));
    CHECK(mentions(problems, "[0, 1/3]"));
    CHECK(mentions(problems, "duplicate key 'c2'"));
    CHECK(mentions(problems, "unknown key 'warp'"));
}

TEST_CASE("comments and blank lines are ignored") {
    RunConfig cfg = parse_config_text(
        "# full line comment\n"
        "\n"
        "scenario = stability   # trailing comment\n"
        "nx = 4\n");
    CHECK(cfg.dims[0] == 4);
}

TEST_CASE("perturbation grammar problems are caught") {
    const std::string head = "scenario = stability\n";
    CHECK(mentions(problems_of(head + "perturb1 = fourier field=L k=1,0,0\n"),
                   "missing required option 'amp'"));
    CHECK(mentions(problems_of(head + "perturb1 = compressive amp=0.1 field=u1\n"),
                   "compressive acts on all velocity components"));
    CHECK(mentions(problems_of(head + "perturb1 = wiggle amp=0.1\n"),
                   "unknown perturbation kind"));
    CHECK(mentions(problems_of(head + "perturb1 = fourier amp=0.1 k=1,0\n"),
                   "k must be three numbers"));
    CHECK(mentions(problems_of(head + "perturb1 = fourier amp=0.1 width=2\n"),
                   "unknown option 'width'"));
    CHECK(mentions(problems_of(head + "perturb1 = fourier amp=0.1 field=q\n"),
                   "field must be L, u1, u2, or u3"));
    CHECK(mentions(
        problems_of(head + "perturb1 = fourier amp=1e-3\nperturb3 = bump amp=1e-3\n"),
        "numbered consecutively"));
    CHECK(mentions(problems_of(head + "perturb1 = bump amp=0.1 width=4\n"),
                   "width must be smaller than half the box"));
    CHECK(mentions(problems_of(head + "perturb1 = compressive amp=0.1 radius=3.2\n"),
                   "radius must be smaller than half the box"));
}

TEST_CASE("bump and compressive centers default to the box center") {
    RunConfig cfg = parse_config_text(
        "scenario = stability\nlx = 4\nly = 6\nlz = 8\n"
        "perturb1 = bump field=L amp=1e-3 width=0.5\n");
    REQUIRE(cfg.perturbations.size() == 1);
    CHECK(cfg.perturbations[0].spec.center == std::array<double, 3>{2.0, 3.0, 4.0});
}

TEST_CASE("omitted fourier phases are drawn deterministically from the seed") {
    const std::string base =
        "scenario = stability\nperturb1 = fourier field=L amp=1e-3\n"
        "perturb2 = fourier field=u1 amp=1e-3\nseed = ";
    RunConfig a1 = parse_config_text(base + "7\n");
    RunConfig a2 = parse_config_text(base + "7\n");
    RunConfig b = parse_config_text(base + "8\n");
    CHECK(a1.perturbations[0].spec.phase == a2.perturbations[0].spec.phase);
    CHECK(a1.perturbations[1].spec.phase == a2.perturbations[1].spec.phase);
    CHECK(a1.perturbations[0].spec.phase != b.perturbations[0].spec.phase);
    CHECK(a1.perturbations[0].spec.phase != a1.perturbations[1].spec.phase);
    for (const auto& cp : a1.perturbations) {
        CHECK(cp.spec.phase >= 0.0);
        CHECK(cp.spec.phase < 6.283185307179587);
    }

    RunConfig fixed = parse_config_text(
        "scenario = stability\nseed = 7\n"
        "perturb1 = fourier field=L amp=1e-3 phase=0.25\n");
    CHECK(fixed.perturbations[0].spec.phase == 0.25);
}

TEST_CASE("cross-key constraints are enforced") {
    CHECK(mentions(
        problems_of("scenario = stability\nframe = conformal-minkowski\nc2 = 0.1\n"),
        "conformal-minkowski requires c2 = 1/3"));
    CHECK(mentions(problems_of("scenario = shock-contrast\nc2 = 0\n"),
                   "shock-contrast requires c2 = 1/3"));
    CHECK(mentions(problems_of("scenario = conformal-check\nc2 = 0.1\n"),
                   "conformal-check requires c2 = 1/3"));
    CHECK(mentions(problems_of("scenario = stability\nfit_t1 = 3\nfit_t2 = 2\n"),
                   "fit_t2 > fit_t1"));
    CHECK(mentions(problems_of("scenario = stability\nsnapshot_times = 1.5, 0.5\n"),
                   "time >= 1"));
    CHECK(mentions(problems_of("scenario = stability\nseed = -3\n"),
                   "unsigned integer"));
    CHECK(mentions(problems_of("scenario = stability\nnx = 0\n"), "[1, 16384]"));
    CHECK(mentions(problems_of("scenario = stability\nN = 9\n"), "[1, 8]"));
    CHECK(mentions(problems_of("scenario = stability\nr = 0.5\n"), "[2/3, 1)"));
}

TEST_CASE("the effective config reproduces itself through a parse round trip") {
    const std::string text =
        "scenario = decay-fit\nfamily = power-law\nQ = 2\nc2 = 1/10\n"
        "nx = 8\nny = 4\nnz = 1\nlx = 4\nly = 2\nlz = 1\n"
        "perturb1 = fourier field=u1 amp=1e-3 k=1,0,0\n"
        "perturb2 = bump field=L amp=0.01 width=0.7\n"
        "seed = 42\nsnapshot_times = 1.5,2\nt_end = 3\nout_dir = somewhere\n";
    std::string eff1 = effective_config_text(parse_config_text(text));
    std::string eff2 = effective_config_text(parse_config_text(eff1));
    CHECK(eff1 == eff2);
    CHECK(eff1.find("phase=") != std::string::npos);

    const std::string contrast =
        "scenario = shock-contrast\nstable_family = power-law\nstable_Q = 2\n"
        "perturb1 = compressive amp=0.5 center=2,0,0 radius=0.8\n"
        "nx = 64\nny = 1\nnz = 1\nlx = 4\n";
    std::string c1 = effective_config_text(parse_config_text(contrast));
    std::string c2 = effective_config_text(parse_config_text(c1));
    CHECK(c1 == c2);
    CHECK(c1.find("stable_Q = 2") != std::string::npos);
}

TEST_CASE("the printed defaults are themselves a valid config") {
    RunConfig cfg = parse_config_text(print_defaults());
    CHECK(cfg.scenario == Scenario::Stability);
    CHECK(effective_config_text(cfg) == effective_config_text(RunConfig{}));
}

TEST_CASE("the initial state applies the configured perturbations") {
    RunConfig cfg = parse_config_text(
        "scenario = stability\nnx = 16\nny = 1\nnz = 1\nrho_bar = 2\n"
        "perturb1 = fourier field=L amp=0.001 k=1,0,0 phase=1.5707963267948966\n");
    FluidState st = initial_state(cfg);
    CHECK(st.grid.dims[0] == 16);
    double mx = 0.0;
    for (double v : st.L) mx = std::max(mx, std::abs(v));
    CHECK(mx == doctest::Approx(0.001).epsilon(1e-12));
    for (const auto& comp : st.u)
        for (double v : comp) CHECK(v == 0.0);
}

TEST_CASE("run options mirror the configured controls") {
    RunConfig cfg = parse_config_text(
        "scenario = stability\nfixed_steps = 9\nnu = 0.001\nN = 2\n"
        "scheme = central-4\ndt_probe = 0.02\ndiag_interval = 0.25\n"
        "cfl = 0.3\ndt_max = 0.05\nt_end = 4\ngradient_threshold = 12\n"
        "value_threshold = 50\nsnapshot_times = 2,3\n");
    RunOptions opt = run_options(cfg);
    CHECK(opt.fixed_steps == 9);
    CHECK(opt.nu == 0.001);
    CHECK(opt.N == 2);
    CHECK(opt.scheme == Scheme::Central4);
    CHECK(opt.dt_probe == 0.02);
    CHECK(opt.diag_interval == 0.25);
    CHECK(opt.ctl.cfl == 0.3);
    CHECK(opt.ctl.dt_max == 0.05);
    CHECK(opt.ctl.t_end == 4.0);
    CHECK(opt.ctl.gradient_threshold == 12.0);
    CHECK(opt.ctl.value_threshold == 50.0);
    CHECK(opt.snapshot_times == std::vector<double>{2.0, 3.0});
}

TEST_CASE("the classify scenario reports the verdict and its probes") {
    fs::path dir = fresh_dir("classify");
    std::ostringstream log;
    int code = execute(parse_config_text("scenario = classify\nfamily = exponential\n"
                                         "H = 1\nc2 = 1/3\nout_dir = " + dir.string() +
                                         "\n"),
                       log);
    CHECK(code == 0);
    json j = read_json(dir / "report.json");
    CHECK(j["verdict"] == "StableIntegrable");
    CHECK(j["integral_estimates"].size() == 3);
    CHECK(j["effective_config"].get<std::string>().find("scenario = classify") !=
          std::string::npos);
    CHECK(log.str().find("StableIntegrable") != std::string::npos);

    fs::path dir2 = fresh_dir("classify_unstable");
    execute(parse_config_text("scenario = classify\nfamily = power-law\nQ = 1\n"
                              "c2 = 1/3\nout_dir = " + dir2.string() + "\n"),
            log);
    CHECK(read_json(dir2 / "report.json")["verdict"] == "UnstableNonintegrable");
}

TEST_CASE("the stability scenario writes a reproducible series and snapshots") {
    auto config_for = [](const fs::path& dir) {
        return "scenario = stability\nfamily = exponential\nH = 1\nc2 = 1/3\n"
               "nx = 8\nny = 8\nnz = 8\n"
               "perturb1 = fourier field=L amp=1e-3 k=1,1,0 phase=0.2\n"
               "t_end = 1.4\ndiag_interval = 0.1\nsnapshot_times = 1.2\n"
               "out_dir = " + dir.string() + "\n";
    };
    fs::path a = fresh_dir("stab_a");
    fs::path b = fresh_dir("stab_b");
    std::ostringstream log;
    CHECK(execute(parse_config_text(config_for(a)), log) == 0);
    CHECK(execute(parse_config_text(config_for(b)), log) == 0);

    std::string series = read_file(a / "series.csv");
    CHECK(series.find(csv_header()) == 0);
    CHECK(series == read_file(b / "series.csv"));

    json j = read_json(a / "report.json");
    CHECK(j["outcome"]["status"] == "ReachedEnd");
    CHECK(j["records"].get<int>() >= 5);
    CHECK(j["S_N_first"].get<double>() > 0.0);
    CHECK(j["ratio_E_to_norm_min"].get<double>() > 0.25);
    CHECK(j["ratio_E_to_norm_max"].get<double>() < 4.0);

    Snapshot snap = read_snapshot((a / "snapshot_t1.2.bin").string());
    CHECK(snap.state.t == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(snap.c2 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("the decay-fit scenario recovers the homogeneous decay rate") {
    fs::path dir = fresh_dir("decay");
    std::ostringstream log;
    int code = execute(parse_config_text(
                           "scenario = decay-fit\nfamily = exponential\nH = 1\n"
                           "c2 = 0.1\nnx = 2\nny = 1\nnz = 1\n"
                           "perturb1 = fourier field=u1 amp=1e-6 k=1,0,0 phase=0.7\n"
                           "t_end = 12\nfit_t1 = 2\nfit_t2 = 10\n"
                           "diag_interval = 0.25\nout_dir = " + dir.string() + "\n"),
                       log);
    CHECK(code == 0);
    json j = read_json(dir / "report.json");
    CHECK(j["homogeneous_slope"].get<double>() == doctest::Approx(-1.7));
    CHECK(j["fitted_slope"].get<double>() ==
          doctest::Approx(-1.7).epsilon(1e-4));
    CHECK(log.str().find("fitted sup_u slope") != std::string::npos);
}

TEST_CASE("the divergence-check scenario shows the probe-step convergence") {
    fs::path dir = fresh_dir("divcheck");
    std::ostringstream log;
    int code = execute(parse_config_text(
                           "scenario = divergence-check\nfamily = exponential\n"
                           "H = 1\nc2 = 0.1\nnx = 8\nny = 8\nnz = 8\n"
                           "perturb1 = fourier field=L amp=1e-2 k=1,0,0 phase=0.3\n"
                           "perturb2 = fourier field=u1 amp=1e-2 k=0,1,0 phase=1.1\n"
                           "dt_probe = 0.16\nrefine_levels = 2\n"
                           "out_dir = " + dir.string() + "\n"),
                       log);
    CHECK(code == 0);
    json j = read_json(dir / "report.json");
    CHECK(j["table"].size() == 2);
    CHECK(j["min_refinement_ratio"].get<double>() >= 2.5);

    std::string csv = read_file(dir / "divergence_check.csv");
    CHECK(csv.find("dt_probe,residual,ratio_vs_prev") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("the conformal-check scenario agrees across frames at fourth order") {
    fs::path dir = fresh_dir("confcheck");
    std::ostringstream log;
    int code = execute(parse_config_text(
                           "scenario = conformal-check\nfamily = power-law\nQ = 1\n"
                           "nx = 32\nny = 1\nnz = 1\n"
                           "perturb1 = fourier field=L amp=1e-3 k=1,0,0 phase=0.3\n"
                           "t_end = 2.718281828459045\nbase_steps = 8\n"
                           "refine_levels = 2\nout_dir = " + dir.string() + "\n"),
                       log);
    CHECK(code == 0);
    json j = read_json(dir / "report.json");
    CHECK(j["tau_end"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["min_refinement_ratio"].get<double>() >= 8.0);
    std::string logged = log.str();
    CHECK(std::count(logged.begin(), logged.end(), '\n') >= 2);
}

TEST_CASE("the shock-contrast scenario reports the dichotomy and exits 2") {
    fs::path dir = fresh_dir("contrast");
    std::ostringstream log;
    int code = execute(parse_config_text(
                           "scenario = shock-contrast\nfamily = power-law\nQ = 1\n"
                           "stable_family = power-law\nstable_Q = 2\n"
                           "nx = 256\nny = 1\nnz = 1\nlx = 4\n"
                           "perturb1 = compressive amp=0.5 center=2,0,0 radius=0.8\n"
                           "t_end = 12\ngradient_threshold = 8\nscheme = central-2\n"
                           "diag_interval = 1\nout_dir = " + dir.string() + "\n"),
                       log);
    CHECK(code == 2);

    json j = read_json(dir / "shock_report.json");
    CHECK(j["unstable"]["status"] == "ShockGuardTripped");
    CHECK(j["stable"]["status"] == "ReachedEnd");
    CHECK(j["tau_end_stable"].get<double>() == doctest::Approx(1.99).epsilon(1e-9));
    CHECK(j["D_M"].get<double>() > 0.0);
    CHECK_FALSE(j["observed_blowup_tau"].is_null());
    CHECK(j["observed_blowup_tau"].get<double>() ==
          doctest::Approx(j["unstable"]["t_stop"].get<double>()));
    CHECK(j["conditions_met"].contains("q_dominates"));

    CHECK(fs::exists(dir / "series_unstable.csv"));
    CHECK(fs::exists(dir / "series_stable.csv"));
    CHECK(read_json(dir / "report.json").contains("shock_report"));
    CHECK(log.str().find("expected outcome") != std::string::npos);
}

TEST_CASE("parse_config reads from disk and reports unreadable paths") {
    fs::path dir = fresh_dir("fromdisk");
    fs::path cfg = write_file(dir / "run.cfg", "scenario = classify\nnx = 4\n");
    CHECK(parse_config(cfg.string()).dims[0] == 4);
    CHECK_THROWS_AS(parse_config((dir / "absent.cfg").string()), config_error);
}
