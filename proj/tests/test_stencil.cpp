#include <doctest.h>

#include <cmath>
#include <random>

#include "riccilab/errors.hpp"
#include "riccilab/functionals.hpp"
#include "riccilab/geometry.hpp"
#include "riccilab/reference.hpp"
#include "riccilab/stencil.hpp"
#include "support.hpp"

using namespace riccilab;

TEST_CASE("grid spacing and validation") {
    const Grid2D t = torus_grid(64, 32);
    CHECK(t.hx() == doctest::Approx(2 * M_PI / 64));
    const Grid2D c = cylinder_grid(21, 8, -10, 10);
    CHECK(c.hx() == 1.0);
    CHECK(c.x(20) == 10.0);
    const Grid2D p = plane_grid(17, 17, 8);
    CHECK(p.x(p.origin_i) == 0.0);
    CHECK(p.y(p.origin_j) == 0.0);
    CHECK_THROWS_AS(make_grid(1, 8, 0, 1, 0, 1, Topology::periodic, Topology::periodic), GridError);
    CHECK_THROWS_AS(make_grid(8, 8, 0, -1, 0, 1, Topology::periodic, Topology::periodic), GridError);
}

TEST_CASE("first differences converge at second order, including one-sided ends") {
    auto err = [](int n) {
        const Grid2D g = cylinder_grid(n, 16, -1.0, 2.0);
        const auto f = test::sample(g, [](double x, double y) { return std::exp(x) * std::sin(y); });
        const auto d = diff_x(g, f);
        const auto exact = test::sample(g, [](double x, double y) { return std::exp(x) * std::sin(y); });
        return test::max_abs_diff(d, exact);
    };
    const double e1 = err(64), e2 = err(128);
    CHECK(std::log2(e1 / e2) > 1.9);
}

TEST_CASE("flat Laplacian matches the unit-coefficient flux form bitwise") {
    for (const Grid2D& g : {torus_grid(32, 24), cylinder_grid(20, 16, -3, 3), plane_grid(19, 19, 4)}) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1, 1);
        std::vector<double> f(g.size()), one(g.size(), 1.0), a(g.size()), b(g.size()), lap(g.size());
        for (auto& v : f) v = u(rng);
        flux_xx(g, one, f, a);
        flux_yy(g, one, f, b);
        laplacian_flat(g, f, lap);
        for (std::size_t n = 0; n < f.size(); ++n) CHECK(lap[n] == a[n] + b[n]);
    }
}

TEST_CASE("d(dF) vanishes at stencil level for random F") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid2D g = trial % 2 ? torus_grid(24, 24) : cylinder_grid(24, 16, -2, 2);
        std::uniform_real_distribution<double> u(-1, 1);
        ScalarField F(g);
        for (auto& v : F.v) v = u(rng);
        CHECK(closed_residual(exterior_derivative(F)) < 1e-10);
    }
}

TEST_CASE("serial and parallel kernels agree bitwise") {
    const Grid2D g = cylinder_grid(40, 24, -4, 4);
    std::vector<double> h(40, 1.0), f(40);
    for (int i = 0; i < 40; ++i) f[i] = 2.0 - std::exp(-g.x(i) * g.x(i));
    const MetricField m = warped_metric(g, h, f);
    OneFormField phi(g, test::sample(g, [](double x, double y) { return std::sin(x + y); }),
                     test::sample(g, [](double x, double y) { return std::cos(2 * x - y); }));
    for (auto method : {HodgeMethod::via_d_delta, HodgeMethod::via_bochner}) {
        const auto a = hodge_laplacian(phi, m, method, Exec::serial);
        const auto b = hodge_laplacian(phi, m, method, Exec::parallel);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
    CHECK(curvature(m, Exec::serial).scalar == curvature(m, Exec::parallel).scalar);
}

TEST_CASE("optimized kernels reproduce the per-node reference") {
    std::mt19937_64 rng(3);
    const Grid2D g = torus_grid(24, 20);
    const test::RandomTrig ur(rng);
    const MetricField m = as_general(conformal_metric(g, test::sample(g, [&](double x, double y) { return 0.2 * ur(x, y); })));
    const test::RandomTrig px(rng), py(rng);
    const OneFormField phi(g, test::sample(g, px), test::sample(g, py));

    const auto c = curvature(m);
    const auto r = reference::curvature(m);
    CHECK(test::max_abs_diff(c.scalar, r.scalar) < 1e-11);
    for (int k = 0; k < 6; ++k) CHECK(test::max_abs_diff(c.gamma[k], r.gamma[k]) < 1e-12);
    for (auto method : {HodgeMethod::via_d_delta, HodgeMethod::via_bochner}) {
        const auto a = hodge_laplacian(phi, m, method);
        const auto b = reference::hodge_laplacian(phi, m, method);
        CHECK(test::max_abs_diff(a.x, b.x) < 1e-10);
        CHECK(test::max_abs_diff(a.y, b.y) < 1e-10);
    }
    CHECK(test::max_abs_diff(codifferential(phi, m).v, reference::codifferential(phi, m).v) < 1e-11);
    const Grid2D& gg = m.grid;
    for (int i : {0, 5, 23})
        for (int j : {0, 7, 19}) {
            const auto dx = diff_x(gg, phi.x);
            CHECK(reference::derivative(gg, phi.x, 0, i, j) == doctest::Approx(dx[gg.index(i, j)]).epsilon(1e-14));
        }
}
