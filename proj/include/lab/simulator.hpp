#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lab/kernel.hpp"
#include "lab/profile.hpp"

namespace lab {

struct SimConfig {
    double initial_eps = 0.0;        // in (0, s0]
    double dt_max = 0.05;
    double cfl = 0.4;                // in (0,1)
    double node_spacing_min = 0.0;   // floor for refinement; scales the run depth
    double node_spacing_max = 0.02;
    double t_end = 3.0;
    double proxy_window = 0.2;       // search radius for the gradient proxy
    int initial_nodes = 600;
    int node_budget = 4000;
    int inf_samples = 33;            // right-wall velocity samples for the alpha ODE
    double refine_max_angle_deg = 15.0;
    double area_jump_tol = 1e-4;     // per-step rejection threshold
    ProfileConstants constants;

    void validate() const;
};

/// Barrier pair (alpha, eps) kept in log form: with the derived constants
/// alpha decays through the double-precision floor within a fraction of a
/// time unit, but ln(alpha) stays finite for any desk-scale run.
struct BarrierState {
    double t = 0.0;
    double log_alpha = 0.0;  // alpha(0) = 1
    double log_eps = 0.0;
    bool eps_frozen = false;  // equality ODE tried to push eps above s0
    /// Strictness margin of the eps comparison: the rate actually applied
    /// minus the minimum admissible rate. Zero while the equality ODE is
    /// active, negative once frozen at the s0 cap (certificate void).
    double margin = 0.0;

    double alpha() const { return std::exp(log_alpha); }
    double eps() const { return std::exp(log_eps); }
};

struct DiagnosticsSample {
    double t = 0.0;
    double d = 0.0;       // gradient-proxy distance
    double proxy = 0.0;   // 1/d
    double area = 0.0;
    int node_count = 0;
    double log_alpha = 0.0;
    double log_eps = 0.0;
    bool containment_ok = true;
    double rate_estimate = 0.0;  // ln ln(proxy) / t, 0 while undefined
};

struct DiagnosticsHistory {
    std::vector<DiagnosticsSample> samples;
};

struct SimState {
    double t = 0.0;
    VorticityField field;  // single omega=1 patch, both odd flags
    std::vector<std::uint8_t> on_axis;
    DiagnosticsHistory diagnostics;
    double initial_area = 0.0;
    long accepted_steps = 0;
    long rejected_steps = 0;

    std::vector<Point>& nodes() { return field.patches.at(0).contour; }
    const std::vector<Point>& nodes() const { return field.patches.at(0).contour; }
    double area() const { return field.patches.at(0).area(); }
};

SimState init_state(const SimConfig& config);
BarrierState init_barrier(const SimConfig& config);

struct StepInfo {
    double dt = 0.0;
    int rejections = 0;
    bool accepted = false;
    double max_speed = 0.0;
};

/// One accepted RK4 advection step plus the barrier ODE update; rejects and
/// halves dt (up to 8 times) on self-intersection, relative area jump or
/// speed overflow.
StepInfo step(SimState& state, BarrierState& barrier, const SimConfig& config);

struct RefineReport {
    int inserted = 0;
    int merged = 0;
    double area_change = 0.0;  // relative
    bool budget_exceeded = false;
};

/// Node management: insert (circular-arc midpoints) on over-long or sharply
/// turning segments, merge over-resolved straight runs. Area is preserved to
/// 1e-6 relative per pass.
RefineReport refine(SimState& state, const SimConfig& config);

/// d = min x1 over non-axis contour points within |p| < window of the origin
/// (all free nodes when the window is empty); returns 1/d.
double gradient_proxy(const SimState& state, double window);

/// True iff no contour node or segment midpoint lies strictly inside
/// alpha * Omega_eps.
bool check_containment(const SimState& state, const BarrierState& barrier);

struct RateSeries {
    std::vector<std::pair<double, double>> pointwise;  // (t, ln ln proxy / t)
    double trailing_slope = 0.0;  // least-squares over the trailing 20%
    bool has_slope = false;
};
RateSeries rate_estimate(const DiagnosticsHistory& history);

enum class RunStatus { completed, floor_reached, node_budget };

struct RunResult {
    SimState state;
    BarrierState barrier;
    RunStatus status = RunStatus::completed;
    std::string status_name() const;
};

/// Full experiment: refine / step / diagnose until t_end, the resolution
/// floor (d < 10 * node_spacing_min) or the node budget.
RunResult run_simulation(const SimConfig& config,
                         const std::function<void(const SimState&, const BarrierState&)>&
                             on_sample = {});

void save_checkpoint(std::ostream& os, const SimState& state, const BarrierState& barrier);
void load_checkpoint(std::istream& is, SimState& state, BarrierState& barrier);

}  // namespace lab
