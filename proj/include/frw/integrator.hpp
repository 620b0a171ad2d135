#pragma once

#include <string>
#include <vector>

#include "frw/diagnostics.hpp"
#include "frw/euler_rhs.hpp"
#include "frw/fluid_state.hpp"
#include "frw/scale_factor.hpp"

namespace frw {

enum class Frame { CoordinateTime, ConformalMinkowski };

enum class RunStatus { ReachedEnd, ShockGuardTripped, NonFinite };

const char* frame_name(Frame f);
const char* status_name(RunStatus s);

struct StepControl {
    double cfl = 0.4;
    double dt_max = 0.1;
    double t_end = 10.0;
    // 0 selects the automatic threshold: 100 times the initial max
    // gradient (disabled when the initial gradient is zero).
    double gradient_threshold = 0.0;
    double value_threshold = 1e3;
};

struct RunOptions {
    StepControl ctl;
    Frame frame = Frame::CoordinateTime;
    Scheme scheme = Scheme::Spectral;
    double nu = 0.0;
    int N = 3;
    double diag_interval = 0.5;
    double dt_probe = 0.05;
    // > 0: exactly this many uniform steps over [t0, t_end] with no CFL
    // control; diagnostics then only at the endpoints.
    long long fixed_steps = 0;
    bool record_diagnostics = true;
    bool compute_div_residual = true;
    std::vector<double> snapshot_times;
    std::string snapshot_prefix;  // empty disables snapshot output
};

struct RunOutcome {
    RunStatus status = RunStatus::ReachedEnd;
    double t_stop = 0.0;       // value of the active time variable at stop
    double max_gradient = 0.0;
    long long steps_taken = 0;
    FluidState final_state;
};

struct RunResult {
    RunOutcome outcome;
    std::vector<DiagnosticsRecord> records;
};

// One classical RK4 update of (L, u) by dt in coordinate time.
FluidState step(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
                double dt, Scheme scheme, double nu = 0.0);

// dt = cfl * min_active spacing / lambda_max, capped by dt_max, where
// lambda_max = e^{-Omega} (max |e^Omega u^i| / u0 + c_s) bounds the
// coordinate characteristic speeds.
double cfl_dt(const FluidState& state, double Omega, SoundSpeed c2, const Grid& grid,
              double cfl, double dt_max);

// Advances the state to ctl.t_end, stopping early on the shock guard or
// non-finite values. The ConformalMinkowski frame (Radiation only) maps to
// the rescaled variables once, evolves them with a flat expansion in
// conformal time (ctl.t_end is then the final tau), and maps back.
RunResult run(const FluidState& state, const ScaleFactorSpec& spec, SoundSpeed c2,
              const RunOptions& opt);

}  // namespace frw
