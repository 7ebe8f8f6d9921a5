#include "riccilab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "riccilab/errors.hpp"

namespace riccilab {

double integrate(const std::vector<double>& f, const MetricInverse& inv, Exec exec) {
    const Grid2D& grid = inv.grid;
    return sum_nodes(exec, grid, [&](int i, int j, std::size_t n) {
        return grid.weight_x(i) * grid.weight_y(j) * inv.sqrt_det[n] * f[n];
    });
}

double total_volume(const MetricInverse& inv, Exec exec) {
    const Grid2D& grid = inv.grid;
    return sum_nodes(exec, grid, [&](int i, int j, std::size_t n) {
        return grid.weight_x(i) * grid.weight_y(j) * inv.sqrt_det[n];
    });
}

double l2_norm_form(const OneFormField& phi, const MetricField& g, Exec exec) {
    require_same_grid(phi.grid, g.grid);
    const MetricInverse inv = invert(g, exec);
    return std::sqrt(integrate(pointwise_norm_sq(phi, inv, exec), inv, exec));
}

double lp_norm_scalar(const ScalarField& u, const MetricField& g, double p, Exec exec) {
    if (!(p >= 1.0)) throw Error("L^p exponent must be at least 1");
    require_same_grid(u.grid, g.grid);
    const auto lo = std::min_element(u.v.begin(), u.v.end());
    if (lo != u.v.end() && *lo < -1e-10) throw InvalidSubsolution("subsolution takes negative values");
    std::vector<double> up(u.v.size());
    for (std::size_t n = 0; n < up.size(); ++n) up[n] = std::pow(std::max(u.v[n], 0.0), p);
    const MetricInverse inv = invert(g, exec);
    return std::pow(integrate(up, inv, exec), 1.0 / p);
}

NodeExtremum sup_norm_form(const OneFormField& phi, const MetricField& g, Exec exec) {
    require_same_grid(phi.grid, g.grid);
    const MetricInverse inv = invert(g, exec);
    const auto sq = pointwise_norm_sq(phi, inv, exec);
    NodeExtremum m = max_nodes(exec, phi.grid, [&](int, int, std::size_t n) { return sq[n]; });
    m.value = std::sqrt(std::max(m.value, 0.0));
    return m;
}

Cycle theta_circle(const Grid2D& grid, int i) {
    if (grid.y_topology != Topology::periodic) throw InvalidCycle("theta-circle needs a periodic theta axis");
    if (i < 0 || i >= grid.nx) throw InvalidCycle("theta-circle x-index " + std::to_string(i) + " outside the grid");
    Cycle c;
    for (int j = 0; j < grid.ny; ++j) c.nodes.emplace_back(i, j);
    return c;
}

namespace {

struct Segment {
    int axis;     // 0: x, 1: theta
    double step;  // signed coordinate increment
};

Segment segment(const Grid2D& grid, std::pair<int, int> a, std::pair<int, int> b) {
    auto delta = [](int from, int to, int n, bool periodic) {
        int d = to - from;
        if (periodic) {
            if (d == n - 1) d = -1;
            if (d == -(n - 1)) d = 1;
        }
        return d;
    };
    const int di = delta(a.first, b.first, grid.nx, grid.x_topology == Topology::periodic);
    const int dj = delta(a.second, b.second, grid.ny, grid.y_topology == Topology::periodic);
    if (std::abs(di) + std::abs(dj) != 1)
        throw InvalidCycle("cycle jumps between non-adjacent nodes (" + std::to_string(a.first) + ", " +
                           std::to_string(a.second) + ") and (" + std::to_string(b.first) + ", " +
                           std::to_string(b.second) + ")");
    return di != 0 ? Segment{0, di * grid.hx()} : Segment{1, dj * grid.hy()};
}

}  // namespace

void validate_cycle(const Grid2D& grid, const Cycle& cycle) {
    if (cycle.nodes.size() < 2) throw InvalidCycle("cycle needs at least two nodes");
    for (const auto& [i, j] : cycle.nodes)
        if (i < 0 || i >= grid.nx || j < 0 || j >= grid.ny) throw InvalidCycle("cycle leaves the grid");
    for (std::size_t k = 0; k < cycle.nodes.size(); ++k)
        segment(grid, cycle.nodes[k], cycle.nodes[(k + 1) % cycle.nodes.size()]);
}

double loop_pairing(const Cycle& cycle, const OneFormField& phi) {
    const Grid2D& grid = phi.grid;
    validate_cycle(grid, cycle);
    double sum = 0.0;
    const std::size_t m = cycle.nodes.size();
    for (std::size_t k = 0; k < m; ++k) {
        const auto a = cycle.nodes[k];
        const auto b = cycle.nodes[(k + 1) % m];
        const Segment s = segment(grid, a, b);
        const auto& comp = s.axis == 0 ? phi.x : phi.y;
        sum += 0.5 * (comp[grid.index(a.first, a.second)] + comp[grid.index(b.first, b.second)]) * s.step;
    }
    return sum;
}

double loop_length(const Cycle& cycle, const MetricField& g) {
    const Grid2D& grid = g.grid;
    validate_cycle(grid, cycle);
    double sum = 0.0;
    const std::size_t m = cycle.nodes.size();
    for (std::size_t k = 0; k < m; ++k) {
        const auto a = cycle.nodes[k];
        const auto b = cycle.nodes[(k + 1) % m];
        const Segment s = segment(grid, a, b);
        const auto& comp = s.axis == 0 ? g.xx : g.yy;
        const double va = std::sqrt(comp[grid.index(a.first, a.second)]);
        const double vb = std::sqrt(comp[grid.index(b.first, b.second)]);
        sum += 0.5 * (va + vb) * std::abs(s.step);
    }
    return sum;
}

std::pair<double, int> min_circumference(const MetricField& g) {
    const Grid2D& grid = g.grid;
    if (grid.y_topology != Topology::periodic) throw InvalidCycle("circumference needs a periodic theta axis");
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int i = 0; i < grid.nx; ++i) {
        double len = 0.0;
        for (int j = 0; j < grid.ny; ++j) len += std::sqrt(g.yy[grid.index(i, j)]);
        len *= grid.hy();
        if (len < best) {
            best = len;
            arg = i;
        }
    }
    return {best, arg};
}

double closed_residual(const OneFormField& phi, Exec exec) {
    const ScalarField w = exterior_derivative(phi, exec);
    return max_nodes(exec, phi.grid, [&](int, int, std::size_t n) { return std::abs(w.v[n]); }).value;
}

CohomologyProbe make_probe(const std::string& label, const OneFormField& phi0, int i, double closed_tol) {
    const double res = closed_residual(phi0, Exec::serial);
    if (!(res <= closed_tol))
        throw InvalidCycle("probe form '" + label + "' is not closed (residual " + std::to_string(res) + ")");
    CohomologyProbe p;
    p.label = label;
    p.phi0 = phi0;
    p.cycle = theta_circle(phi0.grid, i);
    p.pairing = loop_pairing(p.cycle, phi0);
    return p;
}

double pairing_shift_drift(const CohomologyProbe& probe, int i_lo, int i_hi) {
    const double scale = std::max(std::abs(probe.pairing), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
        const double p = loop_pairing(theta_circle(probe.phi0.grid, i), probe.phi0);
        worst = std::max(worst, std::abs(p - probe.pairing) / scale);
    }
    return worst;
}

namespace {

Verdict non_increasing(const std::string& name, const std::vector<double>& series, double tol_rel,
                       const std::vector<bool>* hypothesis = nullptr) {
    Verdict v;
    v.name = name;
    v.worst_margin = std::numeric_limits<double>::infinity();
    if (series.empty()) {
        v.detail = "empty series";
        return v;
    }
    const double tol = tol_rel * std::abs(series.front());
    for (std::size_t k = 1; k < series.size(); ++k) {
        if (hypothesis && !((*hypothesis)[k - 1] && (*hypothesis)[k])) continue;
        ++v.hypothesis_held;
        ++v.checked;
        const double margin = series[k - 1] + tol - series[k];
        v.worst_margin = std::min(v.worst_margin, margin);
        if (margin < 0.0) v.pass = false;
    }
    if (v.checked == 0) v.worst_margin = 0.0;
    return v;
}

}  // namespace

std::vector<Verdict> length_bound_report(const Trajectory& traj, const std::string& label) {
    const auto L = traj.column("L_alpha");
    const auto sup = traj.column(label + ".sup");
    const auto pair = traj.column(label + ".pairing");
    if (L.empty()) throw EmptyTrajectory("no records to check");
    const double P = pair.front();
    if (!(P > 0.0))
        throw ProbeNotInfiniteOrder("probe '" + label + "' pairs to " + std::to_string(P) +
                                    "; the class is not of infinite order against the cycle");
    const double c = P / sup.front();
    Verdict chain{"length_chain", true, std::numeric_limits<double>::infinity(), 0, 0, ""};
    Verdict bound{"length_bound", true, std::numeric_limits<double>::infinity(), 0, 0, ""};
    for (std::size_t k = 0; k < L.size(); ++k) {
        const double mc = L[k] * sup[k] - (P - 1e-6 * P);
        const double mb = L[k] - c + 1e-6 * c;
        chain.worst_margin = std::min(chain.worst_margin, mc);
        bound.worst_margin = std::min(bound.worst_margin, mb);
        chain.pass = chain.pass && mc >= 0.0;
        bound.pass = bound.pass && mb >= 0.0;
        ++chain.checked;
        ++bound.checked;
    }
    chain.hypothesis_held = chain.checked;
    bound.hypothesis_held = bound.checked;
    chain.detail = "pairing " + std::to_string(P);
    bound.detail = "uniform constant c = " + std::to_string(c);
    return {chain, bound};
}

Verdict pairing_invariance_report(const Trajectory& traj, const std::string& label, double rel_tol) {
    const auto pair = traj.column(label + ".pairing");
    Verdict v{"pairing_invariance", true, std::numeric_limits<double>::infinity(), 0, 0, ""};
    if (pair.empty()) return v;
    const double scale = std::max(std::abs(pair.front()), 1e-300);
    for (double p : pair) {
        const double margin = rel_tol - std::abs(p - pair.front()) / scale;
        v.worst_margin = std::min(v.worst_margin, margin);
        v.pass = v.pass && margin >= 0.0;
        ++v.checked;
    }
    v.hypothesis_held = v.checked;
    return v;
}

std::vector<Verdict> l1_monotonicity_report(const Trajectory& traj) {
    const auto m = traj.column("u.mass");
    const auto q = traj.column("u.R_mass");
    const auto umax = traj.column("u.max");
    const auto rnn = traj.column("r_nonneg");
    const auto dts = traj.column("dt");
    const auto supR = traj.column("sup_R");
    const auto minR = traj.column("min_R");
    const auto t = traj.times();
    if (m.empty()) throw EmptyTrajectory("no records to check");
    for (double v : q)
        if (!std::isfinite(v)) throw IncompleteTrajectory("curvature record missing");

    double dt_max = 0.0, r_sup = 0.0, u_sup = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        dt_max = std::max(dt_max, dts[k]);
        r_sup = std::max({r_sup, std::abs(supR[k]), std::abs(minR[k])});
        u_sup = std::max(u_sup, umax[k]);
    }
    const double T = t.back() - t.front();
    const double tol = 1e-6 * std::abs(m.front()) + 10.0 * dt_max * dt_max * T * r_sup * u_sup;

    Verdict ineq{"lemma_inequality", true, std::numeric_limits<double>::infinity(), 0, 0, ""};
    double I = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (k > 0) I += 0.5 * (q[k] + q[k - 1]) * (t[k] - t[k - 1]);
        const double margin = m.front() + tol - (m[k] + I);
        ineq.worst_margin = std::min(ineq.worst_margin, margin);
        ineq.pass = ineq.pass && margin >= 0.0;
        ++ineq.checked;
    }
    ineq.hypothesis_held = ineq.checked;
    ineq.detail = "tol_accum " + std::to_string(tol);

    const bool r_nonneg = std::all_of(rnn.begin(), rnn.end(), [](double v) { return v != 0.0; });
    Verdict mono;
    if (r_nonneg) {
        mono = non_increasing("l1_monotone", m, 1e-8);
    } else {
        mono.name = "l1_monotone";
        mono.detail = "R >= 0 did not hold along the run; not asserted";
    }
    return {ineq, mono};
}

namespace {

std::vector<double> energy_residuals(const Trajectory& traj, const std::string& label) {
    const auto m = traj.column(label + ".l2sq");
    const auto grad = traj.column(label + ".grad_energy");
    const auto curv = traj.column(label + ".curv_energy");
    const auto t = traj.times();
    std::vector<double> r;
    for (std::size_t k = 1; k < m.size(); ++k) {
        const double dt = t[k] - t[k - 1];
        if (!(dt > 0.0)) continue;
        const double g0 = 2.0 * grad[k - 1] + curv[k - 1];
        const double g1 = 2.0 * grad[k] + curv[k];
        r.push_back(std::abs((m[k] - m[k - 1]) / dt + 0.5 * (g0 + g1)));
    }
    return r;
}

}  // namespace

double max_energy_residual(const Trajectory& traj, const std::string& label) {
    const auto r = energy_residuals(traj, label);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

std::vector<Verdict> form_energy_identity_report(const Trajectory& traj, const std::string& label,
                                                 double rel_tol) {
    const auto m = traj.column(label + ".l2sq");
    if (m.empty()) throw EmptyTrajectory("no records to check");
    const auto res = energy_residuals(traj, label);
    const double tol = rel_tol * std::abs(m.front());
    Verdict id{"energy_identity", true, std::numeric_limits<double>::infinity(), 0, 0, ""};
    for (double r : res) {
        id.worst_margin = std::min(id.worst_margin, tol - r);
        id.pass = id.pass && r <= tol;
        ++id.checked;
    }
    if (id.checked == 0) id.worst_margin = tol;
    id.hypothesis_held = id.checked;
    id.detail = "max residual " + std::to_string(res.empty() ? 0.0 : *std::max_element(res.begin(), res.end()));

    const auto rnn = traj.column("r_nonneg");
    std::vector<bool> held(rnn.size());
    for (std::size_t k = 0; k < rnn.size(); ++k) held[k] = rnn[k] != 0.0;
    Verdict mono = non_increasing("l2_monotone", traj.column(label + ".l2"), 1e-8, &held);
    if (mono.hypothesis_held == 0) mono.detail = "R >= 0 held on no step; not asserted";
    return {id, mono};
}

Verdict max_principle_report(const Trajectory& traj, const std::string& label) {
    Verdict v = non_increasing("max_principle", traj.column(label + ".sup"), 1e-8);
    return v;
}

namespace {

struct CutoffProfile {
    std::vector<double> d;
    double reach = 0.0;  // largest finite distance
};

CutoffProfile profile(const MetricField& g, double r) {
    if (!(r > 0.0)) throw DomainTooSmall("cutoff radius must be positive");
    CutoffProfile p;
    p.d = axial_distance(g);
    for (double v : p.d)
        if (std::isfinite(v)) p.reach = std::max(p.reach, v);
    if (!(2.0 * r <= p.reach))
        throw DomainTooSmall("ball of radius 2r = " + std::to_string(2.0 * r) +
                             " does not fit in the domain (reach " + std::to_string(p.reach) + ")");
    return p;
}

double eta_of(double d, double r) {
    if (d <= r) return 1.0;
    if (d >= 2.0 * r) return 0.0;
    const double s = (d - r) / r;
    return (1.0 - s) * (1.0 - s);
}

double deta_of(double d, double r) {
    if (d <= r || d >= 2.0 * r) return 0.0;
    const double s = (d - r) / r;
    return -2.0 * (1.0 - s) / r;
}

}  // namespace

ScalarField cutoff_eta(const MetricField& g, double r) {
    const CutoffProfile p = profile(g, r);
    ScalarField eta(g.grid);
    for (std::size_t n = 0; n < eta.v.size(); ++n) eta.v[n] = eta_of(p.d[n], r);
    return eta;
}

double cutoff_gradient_excess(const MetricField& g, double r) {
    const CutoffProfile p = profile(g, r);
    const Grid2D& grid = g.grid;
    const MetricInverse inv = invert(g, Exec::serial);
    const double x0 = grid.x(grid.origin_i);
    const double y0 = grid.y(grid.origin_j);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            // d grows along the unit coordinate direction e (axial on cylinders,
            // radial on planes) at the metric speed sqrt(g(e, e)).
            double ex = 1.0, ey = 0.0;
            if (grid.truncated_y()) {
                const double rx = grid.x(i) - x0;
                const double ry = grid.y(j) - y0;
                const double rho = std::hypot(rx, ry);
                if (rho > 0.0) {
                    ex = rx / rho;
                    ey = ry / rho;
                }
            }
            const double speed = std::sqrt(g.xx[n] * ex * ex + 2.0 * g.xy[n] * ex * ey + g.yy[n] * ey * ey);
            const double dx = speed * ex;
            const double dy = speed * ey;
            const double grad_d_sq = inv.xx[n] * dx * dx + 2.0 * inv.xy[n] * dx * dy + inv.yy[n] * dy * dy;
            const double deta = std::isfinite(p.d[n]) ? deta_of(p.d[n], r) : 0.0;
            const double eta = std::isfinite(p.d[n]) ? eta_of(p.d[n], r) : 0.0;
            worst = std::max(worst, deta * deta * grad_d_sq - 4.0 * eta / (r * r));
        }
    return worst;
}

double lemma_cutoff_term(const ScalarField& u, const MetricField& g, double r, double p) {
    if (!(p > 1.0)) throw Error("cutoff term needs p > 1");
    const ScalarField eta = cutoff_eta(g, r);
    std::vector<double> f(u.v.size());
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = eta.v[n] * std::pow(std::max(u.v[n], 0.0), p);
    const MetricInverse inv = invert(g, Exec::serial);
    return 2.0 / ((p - 1.0) * r * r) * integrate(f, inv, Exec::serial);
}

std::vector<std::string> monitor_columns(const FlowState& state, const MonitorOptions& opts) {
    std::vector<std::string> c{"t", "dt", "sup_R", "min_R", "vol", "r_nonneg", "buffer_drift"};
    const bool circle = state.grid().y_topology == Topology::periodic;
    if (circle) {
        c.emplace_back("L_alpha");
        c.emplace_back("L_alpha_index");
    }
    for (const auto& f : state.forms) {
        for (const char* s : {".l2", ".l2sq", ".sup"}) c.push_back(f.label + s);
        if (opts.energy) {
            c.push_back(f.label + ".grad_energy");
            c.push_back(f.label + ".curv_energy");
        }
        c.push_back(f.label + ".closed_residual");
        if (circle) c.push_back(f.label + ".pairing");
    }
    if (state.gauge) {
        c.emplace_back("gauge.F_sup");
        c.emplace_back("gauge.mismatch");
    }
    if (state.subsolution) {
        for (const char* s : {"u.mass", "u.min", "u.max", "u.R_mass"}) c.emplace_back(s);
    }
    return c;
}

MonitorBaseline monitor_baseline(const FlowState& state, const MonitorOptions& opts, Exec exec) {
    MonitorBaseline b;
    const Grid2D& grid = state.grid();
    b.buffer = buffer_mask(grid, opts.buffer_fraction);
    b.R0 = flow_curvature(state.g, exec);
    const MetricInverse inv = invert(state.g, exec);
    for (const auto& f : state.forms) b.norm_sq0.push_back(pointwise_norm_sq(f.phi, inv, exec));
    return b;
}

MonitorRecord measure(const FlowState& state, const Geometry& geo, const std::vector<double>& R,
                      const MonitorBaseline& base, const MonitorOptions& opts, double dt, Exec exec) {
    const Grid2D& grid = state.grid();
    const MetricInverse& inv = geo.inverse;
    MonitorRecord rec;
    rec.t = state.t;
    rec.dt = dt;
    rec.step = state.step;
    rec.grid_hash = grid.hash();
    auto& v = rec.values;
    v.push_back(state.t);
    v.push_back(dt);
    // Curvature extremes over the evolving nodes: frozen nodes are boundary data,
    // and their one-sided stencils straddle the evolving region.
    const bool any_active = std::any_of(state.frozen.begin(), state.frozen.end(), [](auto f) { return f == 0; });
    auto active = [&](std::size_t n) { return !any_active || state.frozen[n] == 0; };
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double sup_R = max_nodes(exec, grid, [&](int, int, std::size_t n) { return active(n) ? R[n] : -inf; }).value;
    const double min_R = min_nodes(exec, grid, [&](int, int, std::size_t n) { return active(n) ? R[n] : inf; }).value;
    v.push_back(sup_R);
    v.push_back(min_R);
    v.push_back(total_volume(inv, exec));
    v.push_back(min_R >= 0.0 ? 1.0 : 0.0);

    std::vector<std::vector<double>> norm_sq;
    for (const auto& f : state.forms) norm_sq.push_back(pointwise_norm_sq(f.phi, inv, exec));
    double drift = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!base.buffer[n]) continue;
        drift = std::max(drift, std::abs(R[n] - base.R0[n]));
        for (std::size_t q = 0; q < norm_sq.size(); ++q)
            drift = std::max(drift, std::abs(norm_sq[q][n] - base.norm_sq0[q][n]));
    }
    v.push_back(drift);

    const bool circle = grid.y_topology == Topology::periodic;
    if (circle) {
        const auto [len, arg] = min_circumference(state.g);
        v.push_back(len);
        v.push_back(static_cast<double>(arg));
    }
    const int probe_i = opts.probe_cycle_x >= 0 ? opts.probe_cycle_x : grid.origin_i;
    for (std::size_t q = 0; q < state.forms.size(); ++q) {
        const auto& f = state.forms[q];
        const auto& ns = norm_sq[q];
        const double m = integrate(ns, inv, exec);
        v.push_back(std::sqrt(std::max(m, 0.0)));
        v.push_back(m);
        v.push_back(std::sqrt(std::max(max_nodes(exec, grid, [&](int, int, std::size_t n) { return ns[n]; }).value, 0.0)));
        if (opts.energy) {
            v.push_back(integrate(gradient_norm_sq(f.phi, geo, exec), inv, exec));
            std::vector<double> rn(grid.size());
            for (std::size_t n = 0; n < rn.size(); ++n) rn[n] = R[n] * ns[n];
            v.push_back(integrate(rn, inv, exec));
        }
        v.push_back(closed_residual(f.phi, exec));
        if (circle) v.push_back(loop_pairing(theta_circle(grid, probe_i), f.phi));
    }
    if (state.gauge) {
        const auto& F = state.gauge->F.v;
        v.push_back(max_nodes(exec, grid, [&](int, int, std::size_t n) { return std::abs(F[n]); }).value);
        OneFormField diff = state.gauge_representative(exec);
        const auto& direct = state.form(state.gauge->form_label).phi;
        for (std::size_t n = 0; n < diff.x.size(); ++n) {
            diff.x[n] = direct.x[n] - diff.x[n];
            diff.y[n] = direct.y[n] - diff.y[n];
        }
        const auto sq = pointwise_norm_sq(diff, inv, exec);
        v.push_back(std::sqrt(std::max(max_nodes(exec, grid, [&](int, int, std::size_t n) { return sq[n]; }).value, 0.0)));
    }
    if (state.subsolution) {
        const auto& u = state.subsolution->u.v;
        v.push_back(integrate(u, inv, exec));
        v.push_back(min_nodes(exec, grid, [&](int, int, std::size_t n) { return u[n]; }).value);
        v.push_back(max_nodes(exec, grid, [&](int, int, std::size_t n) { return u[n]; }).value);
        std::vector<double> ur(grid.size());
        for (std::size_t n = 0; n < ur.size(); ++n) ur[n] = u[n] * R[n];
        v.push_back(integrate(ur, inv, exec));
    }
    return rec;
}

}  // namespace riccilab
