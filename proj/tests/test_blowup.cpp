#include <doctest.h>

#include <cmath>
#include <random>

#include "riccilab/blowup.hpp"
#include "riccilab/errors.hpp"
#include "riccilab/functionals.hpp"
#include "riccilab/scenario.hpp"
#include "support.hpp"

using namespace riccilab;

namespace {

Trajectory short_neck() {
    ScenarioSpec s;
    s.family = Family::warped_cylinder;
    s.metric = MetricPreset::neck;
    s.nx = 128;
    s.ny = 16;
    s.forms = {"dtheta"};
    s.probe_form = "dtheta";
    s.T = 0.2;
    s.snapshot_cadence = 20;
    s.energy = false;
    return run_scenario(s);
}

}  // namespace

TEST_CASE("rescaled flat cylinder circumference") {
    const Grid2D g = cylinder_grid(8, 32, -1, 1);
    const MetricField m = flat_metric(g);
    CHECK(loop_length(theta_circle(g, 3), rescale_metric(m, 4.0)) == doctest::Approx(4 * M_PI).epsilon(1e-14));
}

TEST_CASE("rescaling keeps the metric tag and scales potentials consistently") {
    std::mt19937_64 rng(2);
    const Grid2D g = torus_grid(16, 16);
    const test::RandomTrig ur(rng);
    const MetricField m = conformal_metric(g, test::sample(g, ur));
    const MetricField s = rescale_metric(m, 9.0);
    CHECK(s.tag == MetricTag::conformal);
    for (std::size_t n = 0; n < g.size(); ++n) {
        CHECK(s.xx[n] == doctest::Approx(9.0 * m.xx[n]).epsilon(1e-15));
        CHECK(s.u[n] == doctest::Approx(m.u[n] + std::log(3.0)).epsilon(1e-15));
    }
}

TEST_CASE("schedules") {
    const auto p = pow2_schedule({0.0, 0.1, 0.2});
    REQUIRE(p.entries.size() == 3);
    CHECK(p.entries[2].lambda == 4.0);
    const auto e = parse_schedule("explicit:0.1@2,0.3@8");
    CHECK(e.entries[1].t == 0.3);
    CHECK(e.entries[1].lambda == 8.0);
    CHECK(parse_schedule("pow2:0,0.5").entries[1].lambda == 2.0);
    CHECK_THROWS_AS(parse_schedule("nonsense"), Error);
    CHECK_THROWS_AS(parse_schedule("curvature:0.1"), Error);
}

TEST_CASE("rescaled neck trajectory: time map, curvature law and length divergence") {
    const Trajectory t = short_neck();
    REQUIRE(t.snapshots.size() >= 3);
    std::vector<double> times;
    for (const auto& s : t.snapshots) times.push_back(s.t);
    const auto sched = pow2_schedule(times);
    const auto snaps = rescale_trajectory(t, sched);
    for (const auto& s : snaps) {
        CHECK(s.state.t == doctest::Approx(s.lambda * (s.snapshot_t - s.t_k)));
        const auto R = flow_curvature(t.snapshots[static_cast<std::size_t>(s.k)].g);
        const auto Rs = flow_curvature(s.state.g);
        double scale = 0.0, worst = 0.0;
        for (double r : R) scale = std::max(scale, std::abs(r));
        for (std::size_t n = 0; n < R.size(); ++n) worst = std::max(worst, std::abs(s.lambda * Rs[n] - R[n]));
        CHECK(worst / scale < 1e-10);
    }
    const auto rep = length_scaling_check(t, sched);
    CHECK(rep.sqrt_law_holds);
    CHECK(rep.diverges);
    for (const auto& row : rep.rows)
        if (row.lambda != 1.0) CHECK(row.printed_law_deviation > 1e-3);
}

TEST_CASE("empty trajectories are rejected") {
    CHECK_THROWS_AS(rescale_trajectory(Trajectory{}, pow2_schedule({0.0})), EmptyTrajectory);
}

TEST_CASE("decay profile of the cigar curvature falls off") {
    ScenarioSpec s;
    s.family = Family::conformal_plane;
    s.metric = MetricPreset::cigar;
    s.nx = s.ny = 65;
    s.half_width = 8.0;
    s.buffer_abort = false;
    s.energy = false;
    s.T = 0.02;
    const Trajectory t = run_scenario(s);
    DecaySpec d;
    d.sigma = 1.0;
    const double reach = std::min(decay_reach(t.snapshots.front().g), decay_reach(t.snapshots.back().g));
    for (int k = 0; k <= 6; ++k) d.radii.push_back(reach * k / 6.0);
    const auto rep = curvature_decay_report(t, d);
    CHECK(rep.initial.decreasing_tail);
    CHECK(rep.preserved);
    d.radii.push_back(reach * 10);
    CHECK_THROWS_AS(curvature_decay_report(t, d), RadiusBeyondBuffer);
}
