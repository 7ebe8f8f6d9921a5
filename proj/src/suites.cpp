#include "riccilab/suites.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "riccilab/blowup.hpp"
#include "riccilab/errors.hpp"
#include "riccilab/functionals.hpp"
#include "riccilab/io.hpp"
#include "riccilab/oracles.hpp"

namespace riccilab {

namespace {

constexpr double kPi = std::numbers::pi;

Check check_le(std::string what, double value, double limit, std::string detail = {}) {
    return {std::move(what), value <= limit, value, limit, std::move(detail)};
}

Check check_ge(std::string what, double value, double limit, std::string detail = {}) {
    return {std::move(what), value >= limit, value, limit, std::move(detail)};
}

Check from_verdict(const std::string& where, const Verdict& v) {
    std::string detail = v.detail;
    if (v.hypothesis_held != v.checked || v.checked == 0)
        detail += (detail.empty() ? "" : "; ") + std::string("hypothesis held on ") + std::to_string(v.hypothesis_held) +
                  " of the steps";
    // Margins are >= 0 when satisfied; report as value against limit 0.
    return {where + " " + v.name, v.pass, v.worst_margin, 0.0, detail};
}

Verdict find_verdict(const std::vector<Verdict>& vs, const std::string& name) {
    for (const auto& v : vs)
        if (v.name == name) return v;
    throw Error("missing verdict " + name);
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

const Trajectory& RunCache::get(const ScenarioSpec& spec) {
    const auto key = scenario_hash(spec);
    auto it = runs_.find(key);
    if (it == runs_.end()) it = runs_.emplace(key, run_scenario(spec, exec_)).first;
    return it->second;
}

ScenarioSpec flat_torus_scenario(int n) {
    ScenarioSpec s;
    s.name = "flat-torus";
    s.family = Family::flat_torus;
    s.nx = s.ny = n;
    s.forms = {"sinx", "dtheta"};
    s.gauge_form = "sinx";
    s.probe_form = "dtheta";
    s.subsolution = SubsolutionPreset::one_plus_cos;
    s.dt_cap = 2e-4;
    s.T = 1.0;
    return s;
}

ScenarioSpec conformal_torus_scenario(int n) {
    ScenarioSpec s;
    s.name = "conformal-torus";
    s.family = Family::conformal_torus;
    s.metric = MetricPreset::sine;
    s.amplitude = 0.05;
    s.nx = s.ny = n;
    s.forms = {"sinx", "class"};
    s.gauge_form = "class";
    s.probe_form = "class";
    s.subsolution = SubsolutionPreset::one_plus_cos;
    s.T = 0.5;
    return s;
}

ScenarioSpec neck_scenario() {
    ScenarioSpec s;
    s.name = "neck";
    s.family = Family::warped_cylinder;
    s.metric = MetricPreset::neck;
    s.a = 2.0;
    s.b = 1.0;
    s.x_min = -10.0;
    s.x_max = 10.0;
    s.nx = 512;
    s.ny = 64;
    s.forms = {"dtheta"};
    s.probe_form = "dtheta";
    s.T = 0.5;
    s.snapshot_cadence = 100;
    return s;
}

ScenarioSpec cigar_scenario() {
    ScenarioSpec s;
    s.name = "cigar";
    s.family = Family::conformal_plane;
    s.metric = MetricPreset::cigar;
    s.nx = s.ny = 257;
    s.half_width = 8.0;
    s.disk_radius = 8.0;
    s.T = 0.5;
    s.energy = false;
    // The soliton moves by diffeomorphism, so its buffer data is not flat; the
    // drift is still recorded.
    s.buffer_abort = false;
    return s;
}

ScenarioSpec flat_refinement_scenario(int n) {
    ScenarioSpec s;
    s.name = "flat-refinement";
    s.family = Family::flat_torus;
    s.nx = s.ny = n;
    s.forms = {"sinx"};
    s.T = 1.0;
    return s;
}

OneFormField bochner_test_form(const Grid2D& grid) {
    OneFormField phi(grid);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            const double x = grid.x(i), y = grid.y(j);
            phi.x[n] = std::sin(x) * std::cos(y);
            phi.y[n] = std::cos(x) + 0.5 * std::sin(y);
        }
    return phi;
}

namespace {

// --- 1: L2 monotonicity ---------------------------------------------------

std::vector<Check> suite_monotonicity(RunCache& cache) {
    std::vector<Check> out;
    const Trajectory& flat = cache.get(flat_torus_scenario());
    const auto flat_v = form_energy_identity_report(flat, "sinx");
    out.push_back(from_verdict("flat sinx", find_verdict(flat_v, "l2_monotone")));
    const auto l2 = flat.column("sinx.l2");
    // Exact heat flow on the flat torus: every mode of sin(x) dx decays by e^{-t}.
    const OracleResult o0 = flat_spectral_oracle(FormSeries{{0.0, {{1.0, 1, 0, true}}}, {}}, flat.final_state.g, 0.0);
    const OracleResult o1 = flat_spectral_oracle(FormSeries{{0.0, {{1.0, 1, 0, true}}}, {}}, flat.final_state.g, 1.0);
    const Grid2D& grid = flat.final_state.grid();
    const std::size_t N = grid.size();
    auto l2_of = [&](const OracleResult& o) {
        OneFormField f(grid, {o.values.begin(), o.values.begin() + N}, {o.values.begin() + N, o.values.end()});
        return l2_norm_form(f, flat.final_state.g);
    };
    const double expect = l2_of(o1) / l2_of(o0);
    const double ratio = l2.back() / l2.front();
    out.push_back(check_le("flat |L2(1)/L2(0) - e^-1| / e^-1", std::abs(ratio - expect) / expect, 1e-3,
                           "ratio " + format_double(ratio) + ", oracle " + format_double(expect) + " at t = " +
                               format_double(flat.times().back())));
    out.push_back(check_le("flat oracle ratio vs exp(-1)", std::abs(expect - std::exp(-1.0)), 1e-14));

    const Trajectory& conf = cache.get(conformal_torus_scenario());
    for (const auto& label : {"sinx", "class"}) {
        const auto v = form_energy_identity_report(conf, label);
        out.push_back(from_verdict(std::string("conformal ") + label, find_verdict(v, "l2_monotone")));
    }
    return out;
}

// --- 2: energy identity --------------------------------------------------

std::vector<Check> suite_energy(RunCache& cache) {
    std::vector<Check> out;
    auto per_step = [&](const std::string& where, const Trajectory& t, const std::string& label) {
        const double m0 = t.column(label + ".l2sq").front();
        out.push_back(check_le(where + " " + label + " max step residual / m(0)", max_energy_residual(t, label) / m0,
                               1e-3));
    };
    per_step("flat128 dt=2e-4", cache.get(flat_torus_scenario()), "sinx");
    const Trajectory& f64 = cache.get(flat_refinement_scenario(64));
    const Trajectory& f128 = cache.get(flat_refinement_scenario(128));
    per_step("flat128", f128, "sinx");
    const Trajectory& c64 = cache.get(conformal_torus_scenario(64));
    const Trajectory& c128 = cache.get(conformal_torus_scenario(128));
    for (const auto& label : {"sinx", "class"}) per_step("conformal128", c128, label);

    auto order = [&](const std::string& where, const Trajectory& a, const Trajectory& b, const std::string& label) {
        const double ra = max_energy_residual(a, label), rb = max_energy_residual(b, label);
        const double p = std::log2(ra / rb);
        out.push_back(check_ge(where + " " + label + " refinement order 64->128", p, 1.5,
                               "residuals " + format_double(ra) + ", " + format_double(rb)));
    };
    order("flat", f64, f128, "sinx");
    for (const auto& label : {"sinx", "class"}) order("conformal", c64, c128, label);
    return out;
}

// --- 3: L1 lemma ------------------------------------------------------------

std::vector<Check> suite_lemma(RunCache& cache) {
    std::vector<Check> out;
    const Trajectory& conf = cache.get(conformal_torus_scenario());
    out.push_back(from_verdict("conformal", find_verdict(l1_monotonicity_report(conf), "lemma_inequality")));
    const Trajectory& flat = cache.get(flat_torus_scenario());
    const auto m = flat.column("u.mass");
    double worst = 0.0;
    for (double v : m) worst = std::max(worst, std::abs(v - m.front()) / std::abs(m.front()));
    out.push_back(check_le("flat |m(t) - m(0)| / m(0)", worst, 1e-6));
    // Oracle for the initial mass: int (1 + cos x) over the flat torus = 4 pi^2.
    QuadratureDomain dom{0.0, 2 * kPi, 0.0, 2 * kPi, true, true};
    const OracleResult q = quadrature_oracle([](double x, double) { return 1.0 + std::cos(x); }, dom, 32);
    out.push_back(check_le("flat m(0) vs quadrature oracle", std::abs(m.front() - q.values[0]),
                           q.error_bound + 1e-10 * q.values[0]));
    return out;
}

// --- 4: length bound --------------------------------------------------------

std::vector<Check> suite_length(RunCache& cache) {
    std::vector<Check> out;
    const Trajectory& neck = cache.get(neck_scenario());
    out.push_back(check_ge("neck run reached T", neck.times().back(), neck_scenario().T,
                           std::string("status ") + status_name(neck.status)));
    for (const auto& v : length_bound_report(neck, "dtheta")) out.push_back(from_verdict("neck", v));
    const auto L = neck.column("L_alpha");
    const double two_pi = 2 * kPi;
    double worst = std::numeric_limits<double>::infinity();
    for (double l : L) worst = std::min(worst, l - two_pi);
    out.push_back(check_ge("neck min_t L_alpha - 2 pi", worst, -1e-6 * two_pi));
    return out;
}

// --- 5: max principle -------------------------------------------------------

std::vector<Check> suite_max_principle(RunCache& cache) {
    std::vector<Check> out;
    const std::pair<const char*, ScenarioSpec> runs[] = {
        {"flat", flat_torus_scenario()}, {"conformal", conformal_torus_scenario()}, {"neck", neck_scenario()}};
    for (const auto& [where, spec] : runs) {
        const Trajectory& t = cache.get(spec);
        for (const auto& label : spec.forms) out.push_back(from_verdict(std::string(where) + " " + label,
                                                                        max_principle_report(t, label)));
    }
    return out;
}

// --- 6: gauge equivalence -------------------------------------------------------

std::vector<Check> suite_gauge(RunCache& cache) {
    std::vector<Check> out;
    auto mismatch_until = [](const Trajectory& t, double t_end) {
        const auto mm = t.column("gauge.mismatch");
        const auto ts = t.times();
        double worst = 0.0;
        for (std::size_t k = 0; k < mm.size(); ++k)
            if (ts[k] <= t_end + 1e-12) worst = std::max(worst, mm[k]);
        return worst;
    };
    out.push_back(check_le("flat sup_t<=0.5 |phi - (phi0 + dF)|", mismatch_until(cache.get(flat_torus_scenario()), 0.5),
                           1e-6));
    const Trajectory& conf = cache.get(conformal_torus_scenario());
    out.push_back(check_le("conformal |phi - (phi0 + dF)| at t = 0.5", conf.column("gauge.mismatch").back(), 1e-4,
                           "t = " + format_double(conf.times().back())));
    return out;
}

// --- 7: Bochner / d-delta cross-check -----------------------------------------------

double interior_difference(const MetricField& g) {
    const OneFormField phi = bochner_test_form(g.grid);
    const OneFormField a = hodge_laplacian(phi, g, HodgeMethod::via_d_delta);
    const OneFormField b = hodge_laplacian(phi, g, HodgeMethod::via_bochner);
    const auto mask = interior_mask(g.grid);
    double w = 0.0;
    for (std::size_t n = 0; n < mask.size(); ++n)
        if (mask[n]) w = std::max({w, std::abs(a.x[n] - b.x[n]), std::abs(a.y[n] - b.y[n])});
    return w;
}

MetricField bochner_background(const std::string& which, int n) {
    if (which == "flat-torus") return flat_metric(torus_grid(n, n));
    if (which == "flat-annulus") {
        // Polar coordinates on 1 <= r <= 4: flat, with non-zero Christoffels.
        const Grid2D grid = cylinder_grid(n, n, 1.0, 4.0);
        std::vector<double> h(n, 1.0), f(n);
        for (int i = 0; i < n; ++i) f[i] = grid.x(i);
        return warped_metric(grid, std::move(h), std::move(f));
    }
    if (which == "cigar") {
        const Grid2D grid = plane_grid(n + 1, n + 1, 8.0);
        std::vector<double> u(grid.size());
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j)
                u[grid.index(i, j)] = cigar_potential(std::hypot(grid.x(i) - grid.x(grid.origin_i),
                                                                 grid.y(j) - grid.y(grid.origin_j)));
        return conformal_metric(grid, std::move(u));
    }
    // Neck over one axial period so the spacing matches the torus.
    const Grid2D grid = cylinder_grid(n, n / 2, -kPi, kPi);
    std::vector<double> h(n, 1.0), f(n);
    for (int i = 0; i < n; ++i) f[i] = neck_profile(grid.x(i), 2.0, 1.0);
    return warped_metric(grid, std::move(h), std::move(f));
}

std::vector<Check> suite_bochner(RunCache&) {
    std::vector<Check> out;
    const int sizes[] = {64, 128, 256};
    double flat_floor = 0.0;
    for (int n : sizes) flat_floor = std::max(flat_floor, interior_difference(bochner_background("flat-torus", n)));
    // Both paths reduce to the same constant-coefficient stencil on the flat torus.
    out.push_back(check_le("flat-torus sup difference (roundoff floor)", flat_floor, 1e-10));
    for (const std::string which : {"flat-annulus", "cigar", "neck"}) {
        double d[3];
        for (int k = 0; k < 3; ++k) d[k] = interior_difference(bochner_background(which, sizes[k]));
        for (int k = 0; k < 2; ++k)
            out.push_back(check_ge(which + " order " + std::to_string(sizes[k]) + "->" + std::to_string(sizes[k + 1]),
                                   std::log2(d[k] / d[k + 1]), 1.9,
                                   "differences " + format_double(d[k]) + ", " + format_double(d[k + 1])));
    }
    return out;
}

// --- 8: cigar steadiness -----------------------------------------------------

std::vector<Check> suite_cigar(RunCache& cache) {
    std::vector<Check> out;
    const ScenarioSpec spec = cigar_scenario();
    const Trajectory& t = cache.get(spec);
    out.push_back(check_ge("cigar run reached T", t.times().back(), spec.T, std::string("status ") + status_name(t.status)));
    const auto r = t.column("sup_R");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : r) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    out.push_back(check_ge("cigar min_t sup R", lo, 3.92));
    out.push_back(check_le("cigar max_t sup R", hi, 4.08));
    // Initial data against the closed form at the origin.
    const CigarOracle oracle = cigar_oracle(t.snapshots.front().grid(), 0.07, spec.disk_radius);
    const auto R0 = flow_curvature(t.snapshots.front().g);
    const Grid2D& grid = t.snapshots.front().grid();
    const std::size_t o = grid.index(grid.origin_i, grid.origin_j);
    out.push_back(check_le("cigar R(origin, 0) vs closed form, relative", std::abs(R0[o] - oracle.curvature.values[o]) / 4.0,
                           0.01));
    return out;
}

// --- 9: scaling laws ---------------------------------------------------------

std::vector<Check> suite_scaling(RunCache& cache) {
    std::vector<Check> out;
    const double lambdas[] = {0.25, 1.0, 4.0, 100.0};
    std::vector<std::pair<std::string, MetricField>> metrics;
    {
        ScenarioSpec c = conformal_torus_scenario(64);
        metrics.emplace_back("conformal-torus", build_initial_state(c).state.g);
        metrics.emplace_back("conformal-torus general", as_general(build_initial_state(c).state.g));
        metrics.emplace_back("cigar", bochner_background("cigar", 64));
        ScenarioSpec n = neck_scenario();
        n.nx = 128;
        n.ny = 32;
        metrics.emplace_back("neck", build_initial_state(n).state.g);
    }
    for (const auto& [name, g] : metrics) {
        const auto R = flow_curvature(g);
        const double scale = sup_abs(R);
        const bool periodic = g.grid.y_topology == Topology::periodic;
        double worst_r = 0.0, worst_l = 0.0, L = 0.0;
        int at = 0;
        if (periodic) std::tie(L, at) = min_circumference(g);
        for (double lam : lambdas) {
            const MetricField gl = rescale_metric(g, lam);
            const auto Rl = flow_curvature(gl);
            for (std::size_t n = 0; n < R.size(); ++n) worst_r = std::max(worst_r, std::abs(lam * Rl[n] - R[n]) / scale);
            if (periodic) {
                const double Ll = loop_length(theta_circle(g.grid, at), gl);
                worst_l = std::max(worst_l, std::abs(Ll - std::sqrt(lam) * L) / (std::sqrt(lam) * L));
            }
        }
        out.push_back(check_le(name + " max |lambda R(lambda g) - R(g)| / sup|R|", worst_r, 1e-10));
        if (periodic)
            out.push_back(check_le(name + " max |L(lambda g) - sqrt(lambda) L(g)| / sqrt(lambda) L", worst_l, 1e-10));
    }
    const Trajectory& neck = cache.get(neck_scenario());
    const auto report = length_scaling_check(neck, pow2_schedule({0.0, 0.1, 0.2, 0.3, 0.4}));
    out.push_back(check_le("neck pow2 schedule sqrt-law residual", report.max_sqrt_residual, 1e-10));
    std::string lens;
    for (const auto& row : report.rows) lens += (lens.empty() ? "" : ", ") + format_double(row.rescaled_length);
    out.push_back({"neck pow2 rescaled lengths diverge", report.diverges, report.rows.back().rescaled_length, 0.0,
                   "lengths " + lens});
    return out;
}

// --- 10: infrastructure -------------------------------------------------------

ScenarioSpec random_spec(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ScenarioSpec s;
    s.name = "random-" + std::to_string(rng() % 100000);
    s.nx = 8 + static_cast<int>(rng() % 200);
    s.ny = 8 + static_cast<int>(rng() % 200);
    s.T = 1e-3 + unit(rng) * 3.0;
    s.cfl = 0.01 + unit(rng) * 0.49;
    s.dt_cap = unit(rng) < 0.5 ? std::numeric_limits<double>::infinity() : 1e-6 + unit(rng);
    s.cadence = 1 + static_cast<int>(rng() % 50);
    s.snapshot_cadence = static_cast<int>(rng() % 10);
    s.max_steps = static_cast<long>(rng() % 1000000);
    s.scheme = unit(rng) < 0.5 ? Scheme::rk2 : Scheme::rk4;
    s.metric_path = unit(rng) < 0.5 ? MetricPath::reduced : MetricPath::general;
    s.laplacian = unit(rng) < 0.5 ? HodgeMethod::via_d_delta : HodgeMethod::via_bochner;
    s.ricci = unit(rng) < 0.5;
    s.buffer_abort = unit(rng) < 0.5;
    s.energy = unit(rng) < 0.5;
    s.sub_sink = unit(rng);
    s.bump_width = 0.1 + unit(rng);
    s.bump_height = unit(rng);
    s.bump_center = unit(rng) - 0.5;
    s.subsolution = static_cast<SubsolutionPreset>(pick(rng));
    s.sub_value = unit(rng) * 2;
    s.class_coefficient = unit(rng);
    switch (pick(rng)) {
        case 0: s.family = Family::flat_torus; break;
        case 1:
            s.family = Family::conformal_torus;
            s.metric = MetricPreset::sine;
            s.amplitude = unit(rng) * 0.2;
            break;
        case 2:
            s.family = Family::warped_cylinder;
            s.metric = MetricPreset::neck;
            s.b = 0.1 + unit(rng);
            s.a = s.b + 0.1 + unit(rng);
            s.x_min = -5.0 - unit(rng) * 10;
            s.x_max = 5.0 + unit(rng) * 10;
            break;
        default:
            s.family = Family::conformal_plane;
            s.metric = MetricPreset::cigar;
            s.half_width = 2.0 + unit(rng) * 10;
            s.disk_radius = unit(rng) * s.half_width;
            break;
    }
    if (s.family != Family::conformal_plane) {
        s.forms = {"sinx", "dtheta"};
        if (unit(rng) < 0.5) s.forms.push_back("class");
        if (unit(rng) < 0.5) s.gauge_form = s.forms[rng() % s.forms.size()];
    } else {
        if (unit(rng) < 0.5) s.forms = {"sinx"};
    }
    return s;
}

std::vector<Check> suite_infrastructure(RunCache&) {
    std::vector<Check> out;
    ScenarioSpec small = flat_torus_scenario(32);
    small.T = 0.05;
    const std::string a = monitors_csv(run_scenario(small, Exec::parallel));
    const std::string b = monitors_csv(run_scenario(small, Exec::parallel));
    const std::string c = monitors_csv(run_scenario(small, Exec::serial));
    out.push_back({"repeated runs give byte-identical monitors.csv", a == b, static_cast<double>(a.size()), 0.0, {}});
    out.push_back({"serial and parallel kernels give byte-identical monitors.csv", a == c,
                   static_cast<double>(c.size()), 0.0, {}});

    std::mt19937_64 rng(20240611);
    int mismatches = 0, failures = 0;
    const int trials = 300;
    for (int k = 0; k < trials; ++k) {
        const ScenarioSpec s = random_spec(rng);
        const ParseResult p = parse_scenario(serialize_scenario(s));
        if (!p.ok()) {
            // Randomized specs can be semantically invalid (e.g. buffer curvature); round-trip
            // is still required for the parsed fields.
            ScenarioSpec relaxed = s;
            relaxed.buffer_abort = false;
            relaxed.probe_form.clear();
            const ParseResult q = parse_scenario(serialize_scenario(relaxed));
            if (!q.ok()) ++failures;
            else if (!(q.spec == relaxed)) ++mismatches;
            continue;
        }
        if (!(p.spec == s)) ++mismatches;
    }
    out.push_back(check_le("round-trip mismatches over random specs", mismatches + failures, 0,
                           std::to_string(trials) + " specs, " + std::to_string(failures) + " rejected"));

    const std::vector<Suite> stub = {{"ok", 1, "always passes", [](RunCache&) { return std::vector<Check>{{"x", true, 0.0, 0.0, {}}}; }},
                                     {"bad", 2, "always fails", [](RunCache&) { return std::vector<Check>{{"x", false, 0.0, 0.0, {}}}; }}};
    RunCache scratch;
    const int pass_code = verify_exit_code(run_verify("ok", stub, scratch));
    const int fail_code = verify_exit_code(run_verify("all", stub, scratch));
    bool unknown_rejected = false;
    try {
        run_verify("no-such-suite", stub, scratch);
    } catch (const UsageError&) {
        unknown_rejected = true;
    }
    out.push_back({"verify exit code 0 when every suite passes", pass_code == 0, static_cast<double>(pass_code), 0.0, {}});
    out.push_back({"verify exit code 1 when a suite fails", fail_code == 1, static_cast<double>(fail_code), 1.0, {}});
    out.push_back({"verify rejects unknown suite names", unknown_rejected, 0.0, 0.0, {}});
    return out;
}

}  // namespace

const std::vector<Suite>& acceptance_suites() {
    static const std::vector<Suite> suites = {
        {"monotonicity", 1, "L2 norm non-increasing; flat decay e^-1", suite_monotonicity},
        {"energy", 2, "energy identity residual and refinement order", suite_energy},
        {"lemma", 3, "L1 inequality for the subsolution", suite_lemma},
        {"length-bound", 4, "cycle length bounded below on the neck", suite_length},
        {"max-principle", 5, "sup |phi| non-increasing", suite_max_principle},
        {"gauge", 6, "phi = phi0 + dF", suite_gauge},
        {"bochner", 7, "Bochner and d-delta paths converge together", suite_bochner},
        {"cigar", 8, "cigar sup R stays near 4", suite_cigar},
        {"scaling", 9, "curvature and length scaling laws", suite_scaling},
        {"infrastructure", 10, "determinism, round-trip, exit codes", suite_infrastructure},
    };
    return suites;
}

std::vector<CriterionResult> run_verify(const std::string& which, const std::vector<Suite>& suites, RunCache& cache,
                                        std::ostream* progress) {
    std::vector<const Suite*> chosen;
    for (const auto& s : suites)
        if (which == "all" || which == s.name || which == std::to_string(s.id)) chosen.push_back(&s);
    if (chosen.empty()) {
        std::string names;
        for (const auto& s : suites) names += (names.empty() ? "" : ", ") + s.name;
        throw UsageError("unknown suite '" + which + "' (known: all, " + names + ")");
    }
    std::vector<CriterionResult> results;
    for (const Suite* s : chosen) {
        CriterionResult r;
        r.id = s->id;
        r.suite = s->name;
        r.title = s->title;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.checks = s->run(cache);
            for (const auto& c : r.checks) r.pass = r.pass && c.pass;
            if (r.checks.empty()) r.pass = false;
        } catch (const std::exception& e) {
            r.pass = false;
            r.error = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (progress) *progress << result_line(r) << std::endl;
        results.push_back(std::move(r));
    }
    return results;
}

int verify_exit_code(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}

std::string result_line(const CriterionResult& r) {
    std::ostringstream s;
    s << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.suite << ": " << r.title;
    std::size_t failed = 0;
    for (const auto& c : r.checks) failed += c.pass ? 0 : 1;
    s << " (" << r.checks.size() - failed << "/" << r.checks.size() << " checks";
    s << ", " << std::fixed;
    s.precision(1);
    s << r.seconds << " s)";
    if (!r.error.empty()) s << " error: " << r.error;
    return s.str();
}

std::string result_details(const CriterionResult& r) {
    std::string out;
    for (const auto& c : r.checks) {
        out += std::string("    ") + (c.pass ? "ok   " : "FAIL ") + c.what + ": " + format_double(c.value);
        if (c.limit != 0.0 || c.what.find("margin") != std::string::npos) out += " (limit " + format_double(c.limit) + ")";
        if (!c.detail.empty()) out += "  " + c.detail;
        out += "\n";
    }
    return out;
}

}  // namespace riccilab
