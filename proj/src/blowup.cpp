#include "riccilab/blowup.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "riccilab/errors.hpp"

namespace riccilab {

MetricField rescale_metric(const MetricField& g, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("scale factor must be positive and finite");
    switch (g.tag) {
        case MetricTag::conformal: {
            std::vector<double> u = g.u;
            const double shift = 0.5 * std::log(lambda);
            for (double& v : u) v += shift;
            MetricField out = conformal_metric(g.grid, std::move(u));
            // Keep the components exactly lambda g rather than exp(2u) re-rounded.
            for (std::size_t n = 0; n < out.xx.size(); ++n) {
                out.xx[n] = lambda * g.xx[n];
                out.yy[n] = lambda * g.yy[n];
            }
            return out;
        }
        case MetricTag::warped: {
            const double s = std::sqrt(lambda);
            std::vector<double> h = g.h, f = g.f;
            for (double& v : h) v *= s;
            for (double& v : f) v *= s;
            MetricField out = warped_metric(g.grid, std::move(h), std::move(f));
            for (std::size_t n = 0; n < out.xx.size(); ++n) {
                out.xx[n] = lambda * g.xx[n];
                out.yy[n] = lambda * g.yy[n];
            }
            return out;
        }
        case MetricTag::general: break;
    }
    MetricField out = g;
    for (std::size_t n = 0; n < out.xx.size(); ++n) {
        out.xx[n] *= lambda;
        out.xy[n] *= lambda;
        out.yy[n] *= lambda;
    }
    out.validate();
    return out;
}

RescalingSchedule explicit_schedule(std::vector<ScheduleEntry> entries) {
    if (entries.empty()) throw Error("rescaling schedule is empty");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (!(entries[k].lambda > 0.0)) throw Error("scale factors must be positive");
        if (!(entries[k].t >= 0.0)) throw Error("schedule times must be non-negative");
        if (k > 0 && !(entries[k].t > entries[k - 1].t)) throw Error("schedule times must increase strictly");
    }
    RescalingSchedule s;
    s.entries = std::move(entries);
    return s;
}

RescalingSchedule pow2_schedule(const std::vector<double>& times) {
    std::vector<ScheduleEntry> e;
    for (std::size_t k = 0; k < times.size(); ++k) e.push_back({times[k], std::ldexp(1.0, static_cast<int>(k))});
    RescalingSchedule s = explicit_schedule(std::move(e));
    s.policy = SchedulePolicy::pow2;
    return s;
}

namespace {

const FlowState& nearest_snapshot(const Trajectory& traj, double t) {
    if (traj.snapshots.empty()) throw EmptyTrajectory("trajectory holds no snapshots");
    const FlowState* best = &traj.snapshots.front();
    for (const auto& s : traj.snapshots)
        if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
    return *best;
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

RescalingSchedule curvature_schedule(const Trajectory& traj, const std::vector<double>& times) {
    std::vector<ScheduleEntry> e;
    for (double t : times) {
        const FlowState& s = nearest_snapshot(traj, t);
        const double lam = sup_abs(flow_curvature(s.g));
        if (!(lam > 0.0)) throw Error("curvature-selected scale is zero at t = " + std::to_string(t));
        e.push_back({t, lam});
    }
    RescalingSchedule s = explicit_schedule(std::move(e));
    s.policy = SchedulePolicy::by_curvature;
    return s;
}

namespace {

double parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("not a number: '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k)
        if (k == s.size() || s[k] == sep) {
            out.push_back(s.substr(start, k - start));
            start = k + 1;
        }
    return out;
}

}  // namespace

RescalingSchedule parse_schedule(const std::string& text, const Trajectory* traj) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("schedule must look like 'explicit:t@lambda,...', 'curvature:t,...' or 'pow2:t,...'");
    const std::string kind = text.substr(0, colon);
    const auto items = split(std::string_view(text).substr(colon + 1), ',');
    if (kind == "explicit") {
        std::vector<ScheduleEntry> e;
        for (auto item : items) {
            const auto at = item.find('@');
            if (at == std::string_view::npos) throw Error("explicit entries need the form t@lambda");
            e.push_back({parse_double(item.substr(0, at)), parse_double(item.substr(at + 1))});
        }
        return explicit_schedule(std::move(e));
    }
    std::vector<double> times;
    for (auto item : items) times.push_back(parse_double(item));
    if (kind == "pow2") return pow2_schedule(times);
    if (kind == "curvature") {
        if (!traj) throw Error("curvature schedule needs a trajectory");
        return curvature_schedule(*traj, times);
    }
    throw Error("unknown schedule policy '" + kind + "'");
}

std::vector<RescaledSnapshot> rescale_trajectory(const Trajectory& traj, const RescalingSchedule& schedule) {
    if (traj.snapshots.empty()) throw EmptyTrajectory("trajectory holds no snapshots");
    std::vector<RescaledSnapshot> out;
    for (std::size_t k = 0; k < schedule.entries.size(); ++k) {
        const auto& e = schedule.entries[k];
        const FlowState& s = nearest_snapshot(traj, e.t);
        RescaledSnapshot r;
        r.k = static_cast<int>(k);
        r.t_k = e.t;
        r.lambda = e.lambda;
        r.snapshot_t = s.t;
        r.offset = s.t - e.t;
        r.state = s;
        r.state.g = rescale_metric(s.g, e.lambda);
        // g_k(t) = lambda g(t_k + t / lambda): the snapshot sits at t = lambda (t_s - t_k).
        r.state.t = e.lambda * (s.t - e.t);
        r.state.T = e.lambda * (s.T - e.t);
        out.push_back(std::move(r));
    }
    return out;
}

LengthScalingReport length_scaling_check(const Trajectory& traj, const RescalingSchedule& schedule,
                                         const Cycle& cycle) {
    LengthScalingReport rep;
    const auto snaps = rescale_trajectory(traj, schedule);
    bool increasing = true;
    double prev = -std::numeric_limits<double>::infinity();
    double lam_min = std::numeric_limits<double>::infinity(), lam_max = 0.0;
    for (const auto& s : snaps) {
        const FlowState& orig = nearest_snapshot(traj, s.t_k);
        LengthScalingRow row;
        row.k = s.k;
        row.t_k = s.t_k;
        row.lambda = s.lambda;
        if (cycle.nodes.empty()) {
            row.length = min_circumference(orig.g).first;
            row.rescaled_length = min_circumference(s.state.g).first;
        } else {
            row.length = loop_length(cycle, orig.g);
            row.rescaled_length = loop_length(cycle, s.state.g);
        }
        const double expect = std::sqrt(s.lambda) * row.length;
        row.sqrt_law_residual = std::abs(row.rescaled_length - expect) / expect;
        row.printed_law_deviation = std::abs(row.rescaled_length - s.lambda * row.length) / (s.lambda * row.length);
        rep.max_sqrt_residual = std::max(rep.max_sqrt_residual, row.sqrt_law_residual);
        increasing = increasing && row.rescaled_length > prev;
        prev = row.rescaled_length;
        lam_min = std::min(lam_min, s.lambda);
        lam_max = std::max(lam_max, s.lambda);
        rep.rows.push_back(row);
    }
    rep.sqrt_law_holds = rep.max_sqrt_residual <= 1e-10;
    // Lengths bounded below by c > 0 times sqrt(lambda_k): divergence needs the
    // series to grow while lambda_k keeps growing.
    const bool lambda_grows = std::is_sorted(schedule.entries.begin(), schedule.entries.end(),
                                             [](const auto& a, const auto& b) { return a.lambda < b.lambda; }) &&
                              lam_max >= 4.0 * lam_min;
    rep.diverges = increasing && lambda_grows && rep.rows.size() >= 2;
    return rep;
}

double decay_reach(const MetricField& g, double buffer_fraction) {
    const auto d = axial_distance(g);
    const auto buffer = buffer_mask(g.grid, buffer_fraction);
    double reach = 0.0;
    bool any_buffer = false;
    double buffer_min = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < d.size(); ++n) {
        if (!std::isfinite(d[n])) continue;
        if (buffer[n]) {
            any_buffer = true;
            buffer_min = std::min(buffer_min, d[n]);
        } else {
            reach = std::max(reach, d[n]);
        }
    }
    return any_buffer ? std::min(reach, buffer_min) : reach;
}

DecayProfile decay_profile(const std::vector<double>& magnitude, const MetricField& g, const DecaySpec& spec) {
    if (!(spec.sigma > 0.0)) throw Error("decay order must be positive");
    if (spec.radii.size() < 2) throw Error("decay monitor needs at least two shell radii");
    for (std::size_t k = 1; k < spec.radii.size(); ++k)
        if (!(spec.radii[k] > spec.radii[k - 1])) throw Error("shell radii must increase");
    const double reach = decay_reach(g);
    if (spec.radii.back() > reach + 1e-12)
        throw RadiusBeyondBuffer("radius " + std::to_string(spec.radii.back()) +
                                 " reaches the truncation buffer (interior reach " + std::to_string(reach) + ")");
    const auto d = axial_distance(g);
    DecayProfile p;
    const std::size_t shells = spec.radii.size() - 1;
    p.radii.assign(spec.radii.begin(), spec.radii.end() - 1);
    p.values.assign(shells, 0.0);
    for (std::size_t n = 0; n < d.size(); ++n) {
        if (!std::isfinite(d[n])) continue;
        for (std::size_t k = 0; k < shells; ++k)
            if (d[n] >= spec.radii[k] && d[n] < spec.radii[k + 1]) {
                p.values[k] = std::max(p.values[k], std::pow(d[n], spec.sigma) * magnitude[n]);
                break;
            }
    }
    const auto peak = std::max_element(p.values.begin(), p.values.end()) - p.values.begin();
    p.decreasing_tail = true;
    for (std::size_t k = static_cast<std::size_t>(peak) + 1; k < shells; ++k)
        p.decreasing_tail = p.decreasing_tail && p.values[k] <= p.values[k - 1];
    // A profile that peaks in the last shell has not started to decay.
    if (shells > 1 && static_cast<std::size_t>(peak) == shells - 1 && p.values.back() > 0.0)
        p.decreasing_tail = false;
    return p;
}

DecayProfile decay_monitor(const OneFormField& phi, const MetricField& g, const DecaySpec& spec) {
    const auto sq = pointwise_norm_sq(phi, invert(g));
    std::vector<double> mag(sq.size());
    for (std::size_t n = 0; n < sq.size(); ++n) mag[n] = std::sqrt(std::max(sq[n], 0.0));
    return decay_profile(mag, g, spec);
}

DecayProfile decay_monitor(const CurvatureData& c, const MetricField& g, const DecaySpec& spec) {
    const auto& R = c.flow_scalar();
    std::vector<double> mag(R.size());
    for (std::size_t n = 0; n < R.size(); ++n) mag[n] = std::abs(R[n]);
    return decay_profile(mag, g, spec);
}

DecayReport curvature_decay_report(const Trajectory& traj, const DecaySpec& spec) {
    if (traj.snapshots.empty()) throw EmptyTrajectory("trajectory holds no snapshots");
    auto profile_of = [&](const FlowState& s) {
        const auto R = flow_curvature(s.g);
        std::vector<double> mag(R.size());
        for (std::size_t n = 0; n < R.size(); ++n) mag[n] = std::abs(R[n]);
        return decay_profile(mag, s.g, spec);
    };
    DecayReport r;
    r.initial = profile_of(traj.snapshots.front());
    r.final = profile_of(traj.snapshots.back());
    r.preserved = !r.initial.decreasing_tail || r.final.decreasing_tail;
    return r;
}

}  // namespace riccilab
