#include <doctest.h>

#include <cmath>
#include <random>

#include "riccilab/errors.hpp"
#include "riccilab/functionals.hpp"
#include "riccilab/oracles.hpp"
#include "riccilab/scenario.hpp"
#include "support.hpp"

using namespace riccilab;

TEST_CASE("norms of dtheta on the flat torus") {
    const Grid2D g = torus_grid(32, 32);
    const MetricField m = flat_metric(g);
    OneFormField d(g);
    std::fill(d.y.begin(), d.y.end(), 1.0);
    CHECK(l2_norm_form(d, m) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    CHECK(sup_norm_form(d, m).value == doctest::Approx(1.0));
    CHECK(sup_norm_form(d, m).index == 0);
}

TEST_CASE("integrals agree with the quadrature oracle") {
    std::mt19937_64 rng(5);
    const Grid2D g = cylinder_grid(129, 64, -3, 3);
    std::vector<double> h(129, 1.0), f(129);
    for (int i = 0; i < 129; ++i) f[i] = neck_profile(g.x(i), 2.0, 1.0);
    const MetricField m = warped_metric(g, h, f);
    ScalarField u(g, test::sample(g, [](double x, double y) { return 1.0 + 0.5 * std::cos(x) * std::sin(y); }));
    const auto exact = quadrature_oracle(
        [](double x, double y) {
            const double v = 1.0 + 0.5 * std::cos(x) * std::sin(y);
            return v * v * neck_profile(x, 2.0, 1.0);
        },
        QuadratureDomain{-3, 6, 0, 2 * M_PI, false, true}, 64);
    CHECK(exact.error_bound > 0.0);
    const double p2 = lp_norm_scalar(u, m, 2.0);
    CHECK(std::abs(p2 * p2 - exact.values[0]) < 1e-3 * exact.values[0]);
}

TEST_CASE("loop length and pairing on a flat cylinder") {
    const Grid2D g = cylinder_grid(16, 40, -1, 1);
    const MetricField m = flat_metric(g);
    const Cycle c = theta_circle(g, 7);
    CHECK_NOTHROW(validate_cycle(g, c));
    CHECK(loop_length(c, m) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    OneFormField d(g);
    std::fill(d.y.begin(), d.y.end(), 1.0);
    CHECK(loop_pairing(c, d) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    Cycle broken = c;
    broken.nodes.erase(broken.nodes.begin() + 3);
    CHECK_THROWS_AS(validate_cycle(g, broken), InvalidCycle);
}

TEST_CASE("probe pairing is independent of the circle for closed forms") {
    std::mt19937_64 rng(31);
    const Grid2D g = cylinder_grid(48, 32, -2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const test::RandomTrig F(rng);
        ScalarField s(g, test::sample(g, F));
        OneFormField phi = exterior_derivative(s);
        const double c = std::uniform_real_distribution<double>(-2, 2)(rng);
        for (auto& v : phi.y) v += c;
        const CohomologyProbe p = make_probe("p", phi, 24);
        CHECK(p.pairing == doctest::Approx(2 * M_PI * c).epsilon(1e-10).scale(1.0));
        CHECK(pairing_shift_drift(p, 0, 47) < 1e-10);
    }
    OneFormField open(g);
    open.x = test::sample(g, [](double, double y) { return std::sin(y); });
    CHECK_THROWS_AS(make_probe("bad", open, 10), InvalidCycle);
}

TEST_CASE("shortest circumference of the neck sits at the waist") {
    const Grid2D g = cylinder_grid(201, 64, -10, 10);
    std::vector<double> h(201, 1.0), f(201);
    for (int i = 0; i < 201; ++i) f[i] = neck_profile(g.x(i), 2.0, 1.0);
    const auto [L, at] = min_circumference(warped_metric(g, h, f));
    CHECK(at == 100);
    CHECK(L == doctest::Approx(2 * M_PI).epsilon(1e-12));
}

TEST_CASE("cutoff balls must fit in the domain") {
    const MetricField m = flat_metric(torus_grid(16, 16));
    CHECK_THROWS_AS(cutoff_gradient_excess(m, 1e3), DomainTooSmall);
}

TEST_CASE("verdicts on a flat-torus run") {
    ScenarioSpec s;
    s.family = Family::flat_torus;
    s.nx = s.ny = 32;
    s.forms = {"sinx", "dtheta"};
    s.probe_form = "dtheta";
    s.subsolution = SubsolutionPreset::one_plus_cos;
    s.T = 0.2;
    const Trajectory t = run_scenario(s);
    for (const auto& v : form_energy_identity_report(t, "sinx")) CHECK_MESSAGE(v.pass, v.name << " " << v.detail);
    CHECK(max_principle_report(t, "sinx").pass);
    for (const auto& v : length_bound_report(t, "dtheta")) CHECK_MESSAGE(v.pass, v.name);
    CHECK(pairing_invariance_report(t, "dtheta").pass);
    for (const auto& v : l1_monotonicity_report(t)) CHECK_MESSAGE(v.pass, v.name << " " << v.detail);
    // The energy identity holds to discretization error, not to roundoff.
    CHECK(max_energy_residual(t, "sinx") < 1e-3 * t.column("sinx.l2sq").front());
}
