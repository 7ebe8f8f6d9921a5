#include <doctest.h>

#include <cmath>

#include "riccilab/errors.hpp"
#include "riccilab/flows.hpp"
#include "riccilab/oracles.hpp"
#include "riccilab/scenario.hpp"
#include "support.hpp"

using namespace riccilab;

namespace {

ScenarioSpec flat(int n, double T) {
    ScenarioSpec s;
    s.family = Family::flat_torus;
    s.nx = s.ny = n;
    s.forms = {"sinx", "dtheta"};
    s.gauge_form = "sinx";
    s.subsolution = SubsolutionPreset::one_plus_cos;
    s.T = T;
    return s;
}

}  // namespace

TEST_CASE("columns start with t, dt, sup_R, min_R, vol and the run ends exactly at T") {
    const Trajectory t = run_scenario(flat(16, 0.1));
    REQUIRE(t.columns.size() > 5);
    CHECK(t.columns[0] == "t");
    CHECK(t.columns[1] == "dt");
    CHECK(t.columns[2] == "sup_R");
    CHECK(t.columns[3] == "min_R");
    CHECK(t.columns[4] == "vol");
    CHECK(t.status == RunStatus::completed);
    CHECK(t.times().back() == 0.1);
    CHECK(t.final_state.t == 0.1);
    const auto vol = t.column("vol");
    CHECK(vol.front() == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-14));
    CHECK_THROWS_AS(t.column("no-such-column"), IncompleteTrajectory);
}

TEST_CASE("heat flow of forms and the subsolution on the flat torus follows the spectral solution") {
    auto errs = [](int n) {
        ScenarioSpec s = flat(n, 0.5);
        s.dt_cap = 1e-3;
        const Trajectory t = run_scenario(s);
        const auto& st = t.final_state;
        const auto o = flat_spectral_oracle(FormSeries{{0.0, {{1.0, 1, 0, true}}}, {}}, st.g, 0.5);
        const std::size_t N = st.grid().size();
        const std::vector<double> ox(o.values.begin(), o.values.begin() + N);
        const auto ou = flat_spectral_oracle(TrigSeries{1.0, {{1.0, 1, 0, false}}}, st.g, 0.5);
        return std::pair{test::max_abs_diff(st.form("sinx").phi.x, ox),
                         test::max_abs_diff(st.subsolution->u.v, ou.values)};
    };
    const auto [f1, u1] = errs(16);
    const auto [f2, u2] = errs(32);
    // The 1-form operator applies the wide first difference twice, so sin x decays
    // at the rate (sin h / h)^2 instead of 1.
    const double h = 2 * M_PI / 32, rate = std::pow(std::sin(h) / h, 2);
    CHECK(f2 == doctest::Approx(std::exp(-rate * 0.5) - std::exp(-0.5)).epsilon(0.02));
    CHECK(u2 < 1e-3);
    CHECK(std::log2(f1 / f2) > 1.9);
    CHECK(std::log2(u1 / u2) > 1.9);
}

TEST_CASE("dtheta is harmonic on the flat torus and stays put") {
    const Trajectory t = run_scenario(flat(16, 0.2));
    const auto& f = t.final_state.form("dtheta");
    for (double v : f.phi.y) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("gauge representative tracks the direct solution") {
    const Trajectory t = run_scenario(flat(32, 0.3));
    const auto rep = t.final_state.gauge_representative();
    const auto& phi = t.final_state.form("sinx").phi;
    CHECK(test::max_abs_diff(rep.x, phi.x) < 1e-10);
    CHECK(test::max_abs_diff(rep.y, phi.y) < 1e-10);
}

TEST_CASE("CFL step on the flat torus") {
    const ScenarioSetup s = build_initial_state(flat(32, 1.0));
    const double h = 2 * M_PI / 32;
    CHECK(cfl_dt(s.state, s.integrator) == doctest::Approx(0.2 * h * h).epsilon(1e-14));
    IntegratorSpec capped = s.integrator;
    capped.dt_cap = 1e-5;
    CHECK(cfl_dt(s.state, capped) == 1e-5);
}

TEST_CASE("serial and parallel coupled steps agree bitwise") {
    ScenarioSpec s;
    s.family = Family::conformal_torus;
    s.metric = MetricPreset::sine;
    s.nx = 24;
    s.ny = 20;
    s.forms = {"sinx", "class"};
    s.gauge_form = "class";
    s.subsolution = SubsolutionPreset::one_plus_cos;
    for (auto scheme : {Scheme::rk2, Scheme::rk4})
        for (auto path : {MetricPath::reduced, MetricPath::general}) {
            s.scheme = scheme;
            s.metric_path = path;
            const ScenarioSetup setup = build_initial_state(s);
            const FlowState st = prepare_state(setup.state, setup.integrator);
            const double dt = cfl_dt(st, setup.integrator);
            const FlowState a = advance(st, dt, setup.integrator, Exec::serial);
            const FlowState b = advance(st, dt, setup.integrator, Exec::parallel);
            CHECK(a.g.xx == b.g.xx);
            CHECK(a.forms[1].phi.x == b.forms[1].phi.x);
            CHECK(a.gauge->F.v == b.gauge->F.v);
            CHECK(a.subsolution->u.v == b.subsolution->u.v);
        }
}

TEST_CASE("reduced and general metric paths agree to discretization order") {
    ScenarioSpec s;
    s.family = Family::conformal_torus;
    s.metric = MetricPreset::sine;
    s.amplitude = 0.1;
    s.forms = {"sinx"};
    s.T = 0.1;
    auto gap = [&](int n) {
        s.nx = s.ny = n;
        s.metric_path = MetricPath::reduced;
        const auto a = run_scenario(s).final_state.g.xx;
        s.metric_path = MetricPath::general;
        const auto b = run_scenario(s).final_state.g.xx;
        return test::max_abs_diff(a, b);
    };
    const double g1 = gap(16), g2 = gap(32);
    CHECK(g2 < 1e-3);
    CHECK(std::log2(g1 / g2) > 1.8);
}

TEST_CASE("cigar evolves by the soliton diffeomorphism") {
    // In these coordinates the steady soliton reads e^{2u} = 1 / (e^{4t} + r^2).
    ScenarioSpec s;
    s.family = Family::conformal_plane;
    s.metric = MetricPreset::cigar;
    s.nx = s.ny = 65;
    s.half_width = 4.0;
    s.buffer_abort = false;
    s.energy = false;
    s.T = 0.1;
    const Trajectory t = run_scenario(s);
    const auto& g = t.final_state.grid();
    double worst = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double r = std::hypot(g.x(i), g.y(j));
            if (r < 2.0) worst = std::max(worst, std::abs(t.final_state.g.u[g.index(i, j)] - cigar_potential(r, 0.1)));
        }
    CHECK(worst < 5e-3);
    for (double R : t.column("sup_R")) CHECK(R == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("a step budget that runs out is reported, not hidden") {
    ScenarioSpec s = flat(16, 1.0);
    s.max_steps = 5;
    const Trajectory t = run_scenario(s);
    CHECK(t.status == RunStatus::budget_exhausted);
    CHECK(t.final_state.step == 5);
    CHECK(t.last_valid_t < 1.0);
}
