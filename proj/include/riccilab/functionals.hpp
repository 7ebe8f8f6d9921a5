#pragma once

#include <string>
#include <utility>
#include <vector>

#include "riccilab/flows.hpp"
#include "riccilab/geometry.hpp"

namespace riccilab {

/// Trapezoid quadrature of f against dv_g.
double integrate(const std::vector<double>& f, const MetricInverse& inv, Exec exec = Exec::parallel);
double total_volume(const MetricInverse& inv, Exec exec = Exec::parallel);

double l2_norm_form(const OneFormField& phi, const MetricField& g, Exec exec = Exec::parallel);

/// (int u^p dv)^(1/p); throws InvalidSubsolution if u < -1e-10 somewhere.
double lp_norm_scalar(const ScalarField& u, const MetricField& g, double p, Exec exec = Exec::parallel);

/// sup |phi|_g with its first row-major argmax.
NodeExtremum sup_norm_form(const OneFormField& phi, const MetricField& g, Exec exec = Exec::parallel);

/// Closed node path; consecutive nodes (and last-to-first) must be grid neighbours.
struct Cycle {
    std::vector<std::pair<int, int>> nodes;
};

Cycle theta_circle(const Grid2D& grid, int i);

/// Throws InvalidCycle if the path is open or jumps between non-neighbours.
void validate_cycle(const Grid2D& grid, const Cycle& cycle);

/// Trapezoid line integral of phi along the cycle.
double loop_pairing(const Cycle& cycle, const OneFormField& phi);

/// Length of the cycle in g (segment speed averaged over its end nodes).
double loop_length(const Cycle& cycle, const MetricField& g);

/// Shortest theta-circle over x-indices; needs a periodic theta axis.
std::pair<double, int> min_circumference(const MetricField& g);

struct CohomologyProbe {
    std::string label;
    OneFormField phi0;
    Cycle cycle;
    double pairing = 0.0;
};

/// Builds the probe on the theta-circle at x-index `i`; throws InvalidCycle if
/// phi0 is not closed to `closed_tol`.
CohomologyProbe make_probe(const std::string& label, const OneFormField& phi0, int i, double closed_tol = 1e-10);

/// Largest relative pairing change over the theta-circles whose x-index lies
/// in [i_lo, i_hi] (discrete Stokes check).
double pairing_shift_drift(const CohomologyProbe& probe, int i_lo, int i_hi);

/// Sup of the 2-form density d(phi).
double closed_residual(const OneFormField& phi, Exec exec = Exec::parallel);

struct Verdict {
    std::string name;
    bool pass = true;
    double worst_margin = 0.0;  // >= 0 when satisfied
    long checked = 0;
    long hypothesis_held = 0;  // records on which a conditional claim was asserted
    std::string detail;
};

/// Chain L_alpha * sup|phi| >= pairing - 1e-6 pairing at every record, and the
/// uniform bound L_alpha >= pairing / sup|phi(0)|. Throws ProbeNotInfiniteOrder
/// if the pairing is not positive.
std::vector<Verdict> length_bound_report(const Trajectory& traj, const std::string& label);

/// Relative drift of the pairing column against its initial value.
Verdict pairing_invariance_report(const Trajectory& traj, const std::string& label, double rel_tol = 1e-6);

/// m(t) + int_0^t int u R dv <= m(0) + tol_accum, and plain monotonicity of m
/// when R >= 0 held at every record.
std::vector<Verdict> l1_monotonicity_report(const Trajectory& traj);

/// Residual |dm/dt + 2 int|grad phi|^2 + int R|phi|^2| per record pair against
/// rel_tol * m(0), and L^2 monotonicity on records where R >= 0 held.
std::vector<Verdict> form_energy_identity_report(const Trajectory& traj, const std::string& label,
                                                 double rel_tol = 1e-3);

/// Largest identity residual in the series (absolute).
double max_energy_residual(const Trajectory& traj, const std::string& label);

/// sup|phi| non-increasing per record within 1e-8 of its initial value.
Verdict max_principle_report(const Trajectory& traj, const std::string& label);

/// Cutoff in the distance d to the base point: 1 on d <= r, (1 - s)^2 with
/// s = (d - r)/r on [r, 2r], 0 beyond. Throws DomainTooSmall if 2r is not
/// reachable inside the grid.
ScalarField cutoff_eta(const MetricField& g, double r);

/// max over nodes of |grad eta|^2 - 4 eta / r^2, with |grad eta| by the chain rule
/// through the profile derivative and the metric gradient of d.
double cutoff_gradient_excess(const MetricField& g, double r);

/// (2 / ((p - 1) r^2)) int eta u^p dv.
double lemma_cutoff_term(const ScalarField& u, const MetricField& g, double r, double p);

/// Monitor evaluation used by run_flow; see column names in monitor_columns.
struct MonitorBaseline {
    std::vector<std::uint8_t> buffer;
    std::vector<double> R0;
    std::vector<std::vector<double>> norm_sq0;  // per tracked form
};

std::vector<std::string> monitor_columns(const FlowState& state, const MonitorOptions& opts);

MonitorBaseline monitor_baseline(const FlowState& state, const MonitorOptions& opts, Exec exec = Exec::parallel);

/// Values for every column of monitor_columns; `geo` needs Christoffels when
/// energies are on, `R` is the flow curvature of state.g.
MonitorRecord measure(const FlowState& state, const Geometry& geo, const std::vector<double>& R,
                      const MonitorBaseline& base, const MonitorOptions& opts, double dt,
                      Exec exec = Exec::parallel);

}  // namespace riccilab
