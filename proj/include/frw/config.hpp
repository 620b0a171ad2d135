#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "frw/derivatives.hpp"
#include "frw/fluid_state.hpp"
#include "frw/integrator.hpp"
#include "frw/scale_factor.hpp"

namespace frw {

enum class Scenario {
    Classify,
    Stability,
    DecayFit,
    ConformalCheck,
    ShockContrast,
    DivergenceCheck,
};

const char* scenario_name(Scenario s);

// Carries every validation problem found in a config file; parsing never
// stops at the first one.
class config_error : public std::runtime_error {
  public:
    explicit config_error(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

  private:
    std::vector<std::string> problems_;
};

struct ConfiguredPerturbation {
    PerturbationSpec spec;
    double amplitude = 0.0;
};

struct RunConfig {
    Scenario scenario = Scenario::Stability;

    ScaleFactorSpec::Family family = ScaleFactorSpec::Family::Exponential;
    double H = 1.0;
    double Q = 1.0;
    double decay_q = 0.05;
    std::string table_path;
    std::vector<std::pair<double, double>> table;  // loaded from table_path

    // Second expansion law, used only by the shock-contrast scenario.
    ScaleFactorSpec::Family stable_family = ScaleFactorSpec::Family::PowerLaw;
    double stable_H = 1.0;
    double stable_Q = 2.0;
    double stable_decay_q = 0.05;
    std::string stable_table_path;
    std::vector<std::pair<double, double>> stable_table;

    double c2 = 1.0 / 3.0;
    double rho_bar = 1.0;
    std::array<std::int64_t, 3> dims = {16, 16, 16};
    std::array<double, 3> lengths = {6.283185307179586, 6.283185307179586,
                                     6.283185307179586};
    std::vector<ConfiguredPerturbation> perturbations;

    StepControl ctl;
    Frame frame = Frame::CoordinateTime;
    double nu = 0.0;
    double diag_interval = 0.5;
    long long fixed_steps = 0;

    int N = 3;
    Scheme scheme = Scheme::Spectral;
    double fit_t1 = 2.0;
    double fit_t2 = 10.0;
    double dt_probe = 0.05;

    double r = 0.8;
    int M = 1;
    double C = 1.0;
    double C_prime = 1.0;
    double epsilon = 0.01;

    std::string out_dir = ".";
    std::vector<double> snapshot_times;
    unsigned long long seed = 0;

    // Refinement ladders for the conformal-check and divergence-check
    // scenarios: base resolution and number of halvings.
    long long base_steps = 32;
    int refine_levels = 4;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<memory>");

// The full key = value listing of a config, defaults applied and random
// phases resolved; re-parsing it reproduces the same run.
std::string effective_config_text(const RunConfig& cfg);

// Annotated listing of every key with its default, itself parseable.
std::string print_defaults();

ScaleFactorSpec spacetime(const RunConfig& cfg);
ScaleFactorSpec stable_spacetime(const RunConfig& cfg);
FluidState initial_state(const RunConfig& cfg);
RunOptions run_options(const RunConfig& cfg);

}  // namespace frw
