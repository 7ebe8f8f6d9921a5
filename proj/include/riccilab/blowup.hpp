#pragma once

#include <string>
#include <vector>

#include "riccilab/flows.hpp"
#include "riccilab/functionals.hpp"

namespace riccilab {

/// g -> lambda g, keeping the parameterization: u + (1/2) ln lambda for
/// conformal metrics, sqrt(lambda) h and sqrt(lambda) f for warped ones.
MetricField rescale_metric(const MetricField& g, double lambda);

enum class SchedulePolicy { explicit_list, by_curvature, pow2 };

struct ScheduleEntry {
    double t = 0.0;
    double lambda = 1.0;
};

struct RescalingSchedule {
    SchedulePolicy policy = SchedulePolicy::explicit_list;
    std::vector<ScheduleEntry> entries;
};

/// Validates strictly increasing times and positive factors.
RescalingSchedule explicit_schedule(std::vector<ScheduleEntry> entries);
/// lambda_k = 2^k.
RescalingSchedule pow2_schedule(const std::vector<double>& times);
/// lambda_k = sup|R| at the snapshot nearest to t_k (scalar curvature stands in for |Rm|).
RescalingSchedule curvature_schedule(const Trajectory& traj, const std::vector<double>& times);

/// Parses "explicit:t@lambda,...", "curvature:t,..." or "pow2:t,...".
RescalingSchedule parse_schedule(const std::string& text, const Trajectory* traj = nullptr);

struct RescaledSnapshot {
    int k = 0;
    double t_k = 0.0;
    double lambda = 1.0;
    double snapshot_t = 0.0;
    double offset = 0.0;  // snapshot_t - t_k
    FlowState state;      // metric scaled by lambda; t mapped to lambda (snapshot_t - t_k)
};

/// Nearest-snapshot selection per entry. Throws EmptyTrajectory without snapshots.
std::vector<RescaledSnapshot> rescale_trajectory(const Trajectory& traj, const RescalingSchedule& schedule);

struct LengthScalingRow {
    int k = 0;
    double t_k = 0.0;
    double lambda = 1.0;
    double length = 0.0;           // L(Gamma, g(t_k))
    double rescaled_length = 0.0;  // L(Gamma, lambda g(t_k)), measured
    double sqrt_law_residual = 0.0;     // relative to sqrt(lambda) L
    double printed_law_deviation = 0.0; // relative to lambda L
};

struct LengthScalingReport {
    std::vector<LengthScalingRow> rows;
    double max_sqrt_residual = 0.0;
    bool sqrt_law_holds = true;  // max_sqrt_residual <= 1e-10
    bool diverges = false;       // rescaled lengths increase and lambda grows without bound
};

/// An empty cycle means the shortest theta-circle at each t_k.
LengthScalingReport length_scaling_check(const Trajectory& traj, const RescalingSchedule& schedule,
                                         const Cycle& cycle = {});

struct DecaySpec {
    double sigma = 1.0;
    std::vector<double> radii;  // shell edges, increasing
};

struct DecayProfile {
    std::vector<double> radii;   // lower shell edges
    std::vector<double> values;  // sup over the shell of d^sigma |field|
    bool decreasing_tail = false;
};

/// Largest distance that stays out of the truncation buffers.
double decay_reach(const MetricField& g, double buffer_fraction = 0.15);

/// Shell profile of d^sigma * |field| for a per-node magnitude. Throws
/// RadiusBeyondBuffer if the radii leave the unbuffered interior.
DecayProfile decay_profile(const std::vector<double>& magnitude, const MetricField& g, const DecaySpec& spec);
DecayProfile decay_monitor(const OneFormField& phi, const MetricField& g, const DecaySpec& spec);
DecayProfile decay_monitor(const CurvatureData& c, const MetricField& g, const DecaySpec& spec);

struct DecayReport {
    DecayProfile initial;
    DecayProfile final;
    bool preserved = false;
};

/// Curvature decay (flow curvature) at the first and last snapshot.
DecayReport curvature_decay_report(const Trajectory& traj, const DecaySpec& spec);

}  // namespace riccilab
