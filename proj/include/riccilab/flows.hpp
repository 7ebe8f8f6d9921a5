#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "riccilab/geometry.hpp"

namespace riccilab {

enum class Scheme { rk2, rk4 };

// reduced: evolve u (conformal) or h, f (warped); general: evolve g_ij with -2 R_ij.
enum class MetricPath { reduced, general };

struct IntegratorSpec {
    Scheme scheme = Scheme::rk2;
    double cfl = 0.2;
    double dt_cap = std::numeric_limits<double>::infinity();
    long max_steps = 10'000'000;
    int cadence = 1;
    int snapshot_cadence = 0;  // 0: initial and final state only
    MetricPath metric_path = MetricPath::reduced;
    HodgeMethod form_method = HodgeMethod::via_d_delta;
    bool evolve_metric = true;
};

struct TrackedForm {
    std::string label;
    OneFormField phi;
    OneFormField phi0;
};

/// F(t) of dF/dt = lap F - delta(phi0) for the class of `form_label`.
struct Gauge {
    std::string form_label;
    OneFormField phi0;
    ScalarField F;
};

struct Subsolution {
    ScalarField u;
    double sink = 0.0;  // u_t = lap u - sink * u
};

struct FlowState {
    double t = 0.0;
    double T = 1.0;
    long step = 0;
    MetricField g;
    std::vector<TrackedForm> forms;
    std::optional<Gauge> gauge;
    std::optional<Subsolution> subsolution;
    // Nodes held at their initial values; defaults to the truncated boundary.
    std::vector<std::uint8_t> frozen;

    const Grid2D& grid() const { return g.grid; }
    const TrackedForm& form(const std::string& label) const;
    /// phi0 + dF(t) for the gauge class.
    OneFormField gauge_representative(Exec exec = Exec::parallel) const;
};

/// Validates shared grids, fills the frozen mask and forces the metric path.
FlowState prepare_state(FlowState state, const IntegratorSpec& spec);

/// CFL step: c_cfl / (max_nodes lambda_max(H g^-1 H) + sup|R|), H = diag(1/hx, 1/hy),
/// capped at spec.dt_cap. Frozen nodes do not constrain the step.
double cfl_dt(const FlowState& state, const IntegratorSpec& spec, Exec exec = Exec::parallel);

/// Scalar curvature consistent with the metric path: reduced formula for
/// tagged metrics, general stencil otherwise.
std::vector<double> flow_curvature(const MetricField& g, Exec exec = Exec::parallel);

// Single-component steps: advance one field with the others held fixed.
FlowState ricci_flow_step(const FlowState& state, double dt, const IntegratorSpec& spec,
                          Exec exec = Exec::parallel);
FlowState form_heat_step(const FlowState& state, double dt, const IntegratorSpec& spec,
                         Exec exec = Exec::parallel);
FlowState gauge_diffusion_step(const FlowState& state, double dt, const IntegratorSpec& spec,
                               Exec exec = Exec::parallel);
FlowState scalar_heat_step(const FlowState& state, double dt, const IntegratorSpec& spec,
                           Exec exec = Exec::parallel);

/// One coupled step: all components share the stage metrics of the RK tableau.
/// Throws DegenerateMetric if a stage metric loses positive-definiteness.
FlowState advance(const FlowState& state, double dt, const IntegratorSpec& spec, Exec exec = Exec::parallel);

enum class RunStatus { completed, blow_up_detected, budget_exhausted, boundary_flux_abort };

const char* status_name(RunStatus s);

struct MonitorOptions {
    bool buffer_abort = true;
    double buffer_fraction = 0.15;
    double buffer_tolerance = 1e-6;
    bool energy = true;  // gradient and curvature energies (needs Christoffels per record)
    int probe_cycle_x = -1;  // -1: grid origin
};

struct MonitorRecord {
    double t = 0.0;
    double dt = 0.0;
    long step = 0;
    std::uint64_t grid_hash = 0;
    std::vector<double> values;  // aligned with Trajectory::columns
};

struct Trajectory {
    RunStatus status = RunStatus::completed;
    double last_valid_t = 0.0;
    std::string message;
    // Starts with t, dt, sup_R, min_R, vol; record values are aligned with it.
    std::vector<std::string> columns;
    std::vector<MonitorRecord> records;
    std::vector<FlowState> snapshots;
    FlowState final_state;

    bool has_column(const std::string& name) const;
    /// Series of one column over all records; throws IncompleteTrajectory if absent.
    std::vector<double> column(const std::string& name) const;
    std::vector<double> times() const;
};

Trajectory run_flow(FlowState initial, const IntegratorSpec& spec, const MonitorOptions& monitors,
                    Exec exec = Exec::parallel);

}  // namespace riccilab
