#include "riccilab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "riccilab/errors.hpp"
#include "riccilab/functionals.hpp"
#include "riccilab/stencil.hpp"

namespace riccilab {

namespace {

using Block = std::vector<std::vector<double>>;

struct Parts {
    bool metric = true;
    bool forms = true;
    bool gauge = true;
    bool scalar = true;
};

struct Tableau {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
};

const Tableau& tableau(Scheme s) {
    // Heun (SSP RK2) and the classical fourth-order method.
    static const Tableau rk2{{{}, {1.0}}, {0.5, 0.5}};
    static const Tableau rk4{{{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}}, {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6}};
    return s == Scheme::rk2 ? rk2 : rk4;
}

// Metric blocks are included only when the metric evolves.
Block pack(const FlowState& s, bool metric) {
    Block b;
    if (metric) {
        switch (s.g.tag) {
            case MetricTag::conformal: b.push_back(s.g.u); break;
            case MetricTag::warped:
                b.push_back(s.g.h);
                b.push_back(s.g.f);
                break;
            case MetricTag::general:
                b.push_back(s.g.xx);
                b.push_back(s.g.xy);
                b.push_back(s.g.yy);
                break;
        }
    }
    for (const auto& f : s.forms) {
        b.push_back(f.phi.x);
        b.push_back(f.phi.y);
    }
    if (s.gauge) b.push_back(s.gauge->F.v);
    if (s.subsolution) b.push_back(s.subsolution->u.v);
    return b;
}

// Writes the packed values back into `s`, rebuilding (and validating) the metric.
void unpack(Block b, FlowState& s, bool metric) {
    std::size_t k = 0;
    const Grid2D grid = s.g.grid;
    if (metric) {
        switch (s.g.tag) {
            case MetricTag::conformal: s.g = conformal_metric(grid, std::move(b[k++])); break;
            case MetricTag::warped: {
                auto h = std::move(b[k++]);
                auto f = std::move(b[k++]);
                s.g = warped_metric(grid, std::move(h), std::move(f));
                break;
            }
            case MetricTag::general: {
                auto xx = std::move(b[k++]);
                auto xy = std::move(b[k++]);
                auto yy = std::move(b[k++]);
                s.g = general_metric(grid, std::move(xx), std::move(xy), std::move(yy));
                break;
            }
        }
    }
    for (auto& f : s.forms) {
        f.phi.x = std::move(b[k++]);
        f.phi.y = std::move(b[k++]);
    }
    if (s.gauge) s.gauge->F.v = std::move(b[k++]);
    if (s.subsolution) s.subsolution->u.v = std::move(b[k++]);
}

// y = x + sum_j c_j k_j
Block combine(const Block& x, const std::vector<const Block*>& ks, const std::vector<double>& c, Exec exec) {
    Block y = x;
    for (std::size_t q = 0; q < y.size(); ++q) {
        auto& out = y[q];
        const int n = static_cast<int>(out.size());
        constexpr int chunk = 4096;
        for_each_row(exec, (n + chunk - 1) / chunk, [&](int r) {
            const int end = std::min(n, (r + 1) * chunk);
            for (std::size_t j = 0; j < ks.size(); ++j) {
                if (c[j] == 0.0) continue;
                const auto& kv = (*ks[j])[q];
                for (int m = r * chunk; m < end; ++m) out[m] += c[j] * kv[m];
            }
        });
    }
    return y;
}

// Reduced metric rates read only the potentials; everything else needs the inverse metric.
bool needs_geometry(const FlowState& s, const IntegratorSpec& spec, const Parts& parts) {
    const bool general_metric_rate = parts.metric && spec.evolve_metric && s.g.tag == MetricTag::general;
    return general_metric_rate || (parts.forms && !s.forms.empty()) || (parts.gauge && s.gauge) ||
           (parts.scalar && s.subsolution);
}

GeometryLevel level_for(const FlowState& s, const IntegratorSpec& spec, const Parts& parts) {
    const bool general_metric_rate = parts.metric && spec.evolve_metric && s.g.tag == MetricTag::general;
    const bool bochner = parts.forms && !s.forms.empty() && spec.form_method == HodgeMethod::via_bochner;
    return general_metric_rate || bochner ? GeometryLevel::curvature : GeometryLevel::inverse;
}

bool frozen_at(const FlowState& s, std::size_t n) { return s.frozen[n] != 0; }

Block rates(const FlowState& s, const Geometry& geo, const IntegratorSpec& spec, const Parts& parts, Exec exec) {
    const Grid2D& grid = s.grid();
    const std::size_t size = grid.size();
    Block k;
    auto zero_frozen = [&](std::vector<double>& r) {
        for (std::size_t n = 0; n < size; ++n)
            if (frozen_at(s, n)) r[n] = 0.0;
    };

    const bool metric_on = parts.metric && spec.evolve_metric;
    if (metric_on) switch (s.g.tag) {
        case MetricTag::conformal: {
            std::vector<double> r(size, 0.0);
            if (metric_on) {
                // u_t = e^{-2u} lap_0 u, with e^{2u} = g_xx already at hand
                laplacian_flat(grid, s.g.u, r, exec);
                for_each_node(exec, grid, [&](int, int, std::size_t n) { r[n] /= s.g.xx[n]; });
                zero_frozen(r);
            }
            k.push_back(std::move(r));
            break;
        }
        case MetricTag::warped: {
            const int nx = grid.nx;
            std::vector<double> ht(nx, 0.0), ft(nx, 0.0);
            if (metric_on) {
                // f_t = -K f, h_t = -K h with -K = (hf)^{-1} (f'/h)'
                std::vector<double> inv_h(nx), q(nx);
                for (int i = 0; i < nx; ++i) inv_h[i] = 1.0 / s.g.h[i];
                flux_1d(nx, grid.hx(), grid.x_topology, inv_h, s.g.f, q);
                for (int i = 0; i < nx; ++i) {
                    if (frozen_at(s, grid.index(i, 0))) continue;
                    ft[i] = q[i] / s.g.h[i];
                    ht[i] = q[i] / s.g.f[i];
                }
            }
            k.push_back(std::move(ht));
            k.push_back(std::move(ft));
            break;
        }
        case MetricTag::general: {
            std::vector<double> rxx(size, 0.0), rxy(size, 0.0), ryy(size, 0.0);
            if (metric_on) {
                const auto& c = geo.curvature;
                for_each_node(exec, grid, [&](int, int, std::size_t n) {
                    rxx[n] = -2.0 * c.ric_xx[n];
                    rxy[n] = -2.0 * c.ric_xy[n];
                    ryy[n] = -2.0 * c.ric_yy[n];
                });
                zero_frozen(rxx);
                zero_frozen(rxy);
                zero_frozen(ryy);
            }
            k.push_back(std::move(rxx));
            k.push_back(std::move(rxy));
            k.push_back(std::move(ryy));
            break;
        }
    }

    for (const auto& f : s.forms) {
        if (!parts.forms) {
            k.emplace_back(size, 0.0);
            k.emplace_back(size, 0.0);
            continue;
        }
        OneFormField r = hodge_laplacian(f.phi, geo, spec.form_method, exec);
        zero_frozen(r.x);
        zero_frozen(r.y);
        k.push_back(std::move(r.x));
        k.push_back(std::move(r.y));
    }

    if (s.gauge) {
        std::vector<double> r(size, 0.0);
        if (parts.gauge) {
            // lap F - delta(phi0) = -delta(phi0 + dF) with the cochain Laplacian
            const OneFormField rep = s.gauge_representative(exec);
            r = codifferential(rep, geo, exec).v;
            for (double& v : r) v = -v;
            zero_frozen(r);
        }
        k.push_back(std::move(r));
    }

    if (s.subsolution) {
        std::vector<double> r(size, 0.0);
        if (parts.scalar) {
            r = scalar_laplacian(s.subsolution->u, geo, ScalarStencil::compact, exec).v;
            const double c = s.subsolution->sink;
            if (c != 0.0)
                for (std::size_t n = 0; n < size; ++n) r[n] -= c * s.subsolution->u.v[n];
            zero_frozen(r);
        }
        k.push_back(std::move(r));
    }
    return k;
}

FlowState step_parts(const FlowState& state, double dt, const IntegratorSpec& spec, const Parts& parts,
                     const Geometry* cached, Exec exec) {
    if (!(dt > 0.0)) throw Error("time step must be positive");
    const Tableau& tab = tableau(spec.scheme);
    const bool metric_on = parts.metric && spec.evolve_metric;
    const Block y0 = pack(state, metric_on);
    const GeometryLevel level = level_for(state, spec, parts);
    std::optional<Geometry> fixed;
    if (!cached && !needs_geometry(state, spec, parts)) {
        fixed.emplace();
        cached = &*fixed;
    }
    if (!metric_on && !cached) {
        fixed = Geometry::build(state.g, level, exec);
        cached = &*fixed;
    }

    std::vector<Block> ks;
    ks.reserve(tab.b.size());
    std::vector<const Block*> ptrs;
    FlowState stage = state;
    for (std::size_t s = 0; s < tab.b.size(); ++s) {
        if (s > 0) {
            std::vector<double> c(tab.a[s].size());
            for (std::size_t j = 0; j < c.size(); ++j) c[j] = dt * tab.a[s][j];
            unpack(combine(y0, ptrs, c, exec), stage, metric_on);
        }
        if (cached)
            ks.push_back(rates(stage, *cached, spec, parts, exec));
        else
            ks.push_back(rates(stage, Geometry::build(stage.g, level, exec), spec, parts, exec));
        ptrs.clear();
        for (const auto& k : ks) ptrs.push_back(&k);
    }
    std::vector<double> c(tab.b.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = dt * tab.b[j];
    unpack(combine(y0, ptrs, c, exec), stage, metric_on);
    stage.t = state.t + dt;
    stage.step = state.step + 1;
    return stage;
}

bool all_finite(const FlowState& s) {
    auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!ok(s.g.xx) || !ok(s.g.xy) || !ok(s.g.yy)) return false;
    for (const auto& f : s.forms)
        if (!ok(f.phi.x) || !ok(f.phi.y)) return false;
    if (s.gauge && !ok(s.gauge->F.v)) return false;
    if (s.subsolution && !ok(s.subsolution->u.v)) return false;
    return true;
}

}  // namespace

const TrackedForm& FlowState::form(const std::string& label) const {
    for (const auto& f : forms)
        if (f.label == label) return f;
    throw Error("no tracked form labelled '" + label + "'");
}

OneFormField FlowState::gauge_representative(Exec exec) const {
    if (!gauge) throw Error("state carries no gauge function");
    OneFormField rep = exterior_derivative(gauge->F, exec);
    for (std::size_t n = 0; n < rep.x.size(); ++n) {
        rep.x[n] += gauge->phi0.x[n];
        rep.y[n] += gauge->phi0.y[n];
    }
    return rep;
}

FlowState prepare_state(FlowState state, const IntegratorSpec& spec) {
    if (!(spec.cfl > 0.0 && spec.cfl <= 0.5)) throw Error("cfl coefficient must lie in (0, 0.5]");
    if (!(spec.dt_cap > 0.0)) throw Error("dt cap must be positive");
    if (spec.cadence < 1) throw Error("output cadence must be at least 1");
    if (spec.max_steps < 0) throw Error("step budget must be non-negative");
    if (!(state.T > state.t)) throw Error("time horizon must exceed the start time");
    const Grid2D& grid = state.grid();
    state.g.validate();
    for (const auto& f : state.forms) {
        require_same_grid(grid, f.phi.grid);
        require_same_grid(grid, f.phi0.grid);
    }
    if (state.gauge) {
        require_same_grid(grid, state.gauge->F.grid);
        require_same_grid(grid, state.gauge->phi0.grid);
    }
    if (state.subsolution) {
        require_same_grid(grid, state.subsolution->u.grid);
        const auto& u = state.subsolution->u.v;
        if (*std::min_element(u.begin(), u.end()) < -1e-10)
            throw InvalidSubsolution("subsolution must be non-negative");
        if (!(state.subsolution->sink >= 0.0)) throw InvalidSubsolution("sink coefficient must be non-negative");
        state.subsolution->u.role = ScalarRole::subsolution;
    }
    if (state.frozen.empty()) state.frozen = boundary_mask(grid);
    if (state.frozen.size() != grid.size()) throw GridError("frozen mask size does not match grid");
    if (spec.metric_path == MetricPath::general) state.g = as_general(state.g);
    return state;
}

std::vector<double> flow_curvature(const MetricField& g, Exec exec) {
    if (g.tag != MetricTag::general) return reduced_scalar_curvature(g, exec);
    return curvature(g, exec).scalar;
}

double cfl_dt(const FlowState& state, const IntegratorSpec& spec, Exec exec) {
    const Grid2D& grid = state.grid();
    const std::vector<double> R = flow_curvature(state.g, exec);
    MetricInverse inv;
    const bool conformal = state.g.tag == MetricTag::conformal;
    if (conformal) {
        // Diagonal e^{-2u}; the metric was validated when it was built.
        inv.xx.resize(grid.size());
        for_each_node(exec, grid, [&](int, int, std::size_t n) { inv.xx[n] = 1.0 / state.g.xx[n]; });
    } else {
        inv = invert(state.g, exec);
    }
    const double ix = 1.0 / grid.hx();
    const double iy = 1.0 / grid.hy();
    const bool all_frozen = std::all_of(state.frozen.begin(), state.frozen.end(), [](auto v) { return v != 0; });
    auto active = [&](std::size_t n) { return all_frozen || state.frozen.empty() || state.frozen[n] == 0; };
    const double lam = max_nodes(exec, grid, [&](int, int, std::size_t n) {
                           if (!active(n)) return 0.0;
                           if (conformal) return inv.xx[n] * std::max(ix * ix, iy * iy);
                           const double a = inv.xx[n] * ix * ix;
                           const double b = inv.xy[n] * ix * iy;
                           const double c = inv.yy[n] * iy * iy;
                           return 0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + b * b);
                       }).value;
    const double rmax = max_nodes(exec, grid, [&](int, int, std::size_t n) {
                            return active(n) ? std::abs(R[n]) : 0.0;
                        }).value;
    return std::min(spec.dt_cap, spec.cfl / (lam + rmax));
}

FlowState advance(const FlowState& state, double dt, const IntegratorSpec& spec, Exec exec) {
    return step_parts(state, dt, spec, Parts{}, nullptr, exec);
}

FlowState ricci_flow_step(const FlowState& state, double dt, const IntegratorSpec& spec, Exec exec) {
    return step_parts(state, dt, spec, Parts{true, false, false, false}, nullptr, exec);
}

FlowState form_heat_step(const FlowState& state, double dt, const IntegratorSpec& spec, Exec exec) {
    return step_parts(state, dt, spec, Parts{false, true, false, false}, nullptr, exec);
}

FlowState gauge_diffusion_step(const FlowState& state, double dt, const IntegratorSpec& spec, Exec exec) {
    return step_parts(state, dt, spec, Parts{false, false, true, false}, nullptr, exec);
}

FlowState scalar_heat_step(const FlowState& state, double dt, const IntegratorSpec& spec, Exec exec) {
    return step_parts(state, dt, spec, Parts{false, false, false, true}, nullptr, exec);
}

const char* status_name(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blow_up_detected: return "blow-up-detected";
        case RunStatus::budget_exhausted: return "budget-exhausted";
        case RunStatus::boundary_flux_abort: return "boundary-flux-abort";
    }
    return "unknown";
}

bool Trajectory::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::vector<double> Trajectory::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw IncompleteTrajectory("trajectory has no column '" + name + "'");
    const auto k = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.values[k]);
    return out;
}

std::vector<double> Trajectory::times() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.t);
    return out;
}

Trajectory run_flow(FlowState initial, const IntegratorSpec& spec, const MonitorOptions& opts, Exec exec) {
    FlowState state = prepare_state(std::move(initial), spec);
    Trajectory traj;
    traj.columns = monitor_columns(state, opts);
    traj.last_valid_t = state.t;
    if (spec.max_steps == 0) {
        traj.status = RunStatus::budget_exhausted;
        traj.final_state = state;
        return traj;
    }

    const MonitorBaseline base = monitor_baseline(state, opts, exec);
    const bool static_metric = !spec.evolve_metric;
    const GeometryLevel step_level = level_for(state, spec, Parts{});
    const GeometryLevel monitor_level = opts.energy ? GeometryLevel::christoffel : GeometryLevel::inverse;
    std::optional<Geometry> cached;
    std::vector<double> cached_R;
    double cached_dt = 0.0;
    if (static_metric) {
        cached = Geometry::build(state.g, std::max(step_level, monitor_level), exec);
        cached_R = flow_curvature(state.g, exec);
        cached_dt = cfl_dt(state, spec, exec);
    }
    const auto drift_col = static_cast<std::size_t>(
        std::find(traj.columns.begin(), traj.columns.end(), "buffer_drift") - traj.columns.begin());

    long last_recorded = -1;
    auto record = [&](const FlowState& s, double dt) {
        MonitorRecord rec;
        if (static_metric) {
            rec = measure(s, *cached, cached_R, base, opts, dt, exec);
        } else {
            const Geometry geo = Geometry::build(s.g, monitor_level, exec);
            rec = measure(s, geo, flow_curvature(s.g, exec), base, opts, dt, exec);
        }
        traj.records.push_back(std::move(rec));
        last_recorded = s.step;
        return traj.records.back().values[drift_col];
    };

    record(state, 0.0);
    traj.snapshots.push_back(state);
    double last_dt = 0.0;

    while (state.t < state.T) {
        if (state.step >= spec.max_steps) {
            traj.status = RunStatus::budget_exhausted;
            traj.message = "step budget exhausted at t = " + std::to_string(state.t);
            break;
        }
        double dt = static_metric ? cached_dt : 0.0;
        if (!static_metric) {
            try {
                dt = cfl_dt(state, spec, exec);
            } catch (const DegenerateMetric& e) {
                traj.status = RunStatus::blow_up_detected;
                traj.message = e.what();
                break;
            }
        }
        if (!(dt >= 1e-12)) {
            traj.status = RunStatus::blow_up_detected;
            traj.message = "time step underflow (dt = " + std::to_string(dt) + ")";
            break;
        }
        // Absorb a sliver of the horizon into this step rather than leaving a
        // roundoff-sized final step.
        const bool last = state.t + dt * (1.0 + 1e-9) >= state.T;
        if (last) dt = state.T - state.t;
        FlowState next;
        try {
            next = step_parts(state, dt, spec, Parts{}, cached ? &*cached : nullptr, exec);
        } catch (const DegenerateMetric& e) {
            traj.status = RunStatus::blow_up_detected;
            traj.message = e.what();
            break;
        }
        if (!all_finite(next)) {
            traj.status = RunStatus::blow_up_detected;
            traj.message = "non-finite field values";
            break;
        }
        if (last) next.t = state.T;
        state = std::move(next);
        last_dt = dt;
        traj.last_valid_t = state.t;

        if (state.step % spec.cadence == 0 || last) {
            const double drift = record(state, dt);
            if (opts.buffer_abort && drift > opts.buffer_tolerance) {
                traj.status = RunStatus::boundary_flux_abort;
                traj.message = "curvature or form energy reached the truncation buffer (drift " +
                               std::to_string(drift) + ")";
                break;
            }
        }
        if (spec.snapshot_cadence > 0 && state.step % spec.snapshot_cadence == 0 && !last)
            traj.snapshots.push_back(state);
    }
    if (last_recorded != state.step) record(state, last_dt);
    if (traj.snapshots.back().step != state.step) traj.snapshots.push_back(state);
    traj.final_state = std::move(state);
    return traj;
}

}  // namespace riccilab
