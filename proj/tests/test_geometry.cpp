#include <doctest.h>

#include <cmath>
#include <random>

#include "riccilab/errors.hpp"
#include "riccilab/flows.hpp"
#include "riccilab/geometry.hpp"
#include "riccilab/oracles.hpp"
#include "support.hpp"

using namespace riccilab;

namespace {

MetricField neck(int nx, int ny, double x0, double x1) {
    const Grid2D g = cylinder_grid(nx, ny, x0, x1);
    std::vector<double> h(nx, 1.0), f(nx);
    for (int i = 0; i < nx; ++i) f[i] = neck_profile(g.x(i), 2.0, 1.0);
    return warped_metric(g, h, f);
}

double interior_error(const std::vector<double>& R, const Grid2D& g, const std::function<double(double, double)>& exact) {
    const auto mask = interior_mask(g);
    double e = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const std::size_t n = g.index(i, j);
            if (mask[n]) e = std::max(e, std::abs(R[n] - exact(g.x(i), g.y(j))));
        }
    return e;
}

}  // namespace

TEST_CASE("neck curvature converges to the closed form on both paths") {
    auto errs = [](int n) {
        const MetricField m = neck(n, 16, -4, 4);
        const auto exact = [](double x, double) { return neck_curvature(x, 2.0, 1.0); };
        const auto c = curvature(m);
        return std::pair{interior_error(c.scalar, m.grid, exact), interior_error(c.reduced_scalar, m.grid, exact)};
    };
    const auto [g1, r1] = errs(64);
    const auto [g2, r2] = errs(128);
    CHECK(std::log2(g1 / g2) > 1.8);
    CHECK(std::log2(r1 / r2) > 1.8);
    CHECK(r2 < 1e-2);
}

TEST_CASE("stereographic sphere has R = 2") {
    // e^{2u} = 4 / (1 + r^2)^2 is the unit round sphere.
    auto err = [](int n) {
        const Grid2D g = plane_grid(n + 1, n + 1, 2.0);
        const MetricField m = conformal_metric(g, test::sample(g, [](double x, double y) {
                                                   return std::log(2.0 / (1.0 + x * x + y * y));
                                               }));
        return interior_error(curvature(as_general(m)).scalar, g, [](double, double) { return 2.0; });
    };
    const double e1 = err(64), e2 = err(128);
    CHECK(e2 < 2e-2);
    CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("Ricci tensor approaches (R/2) g in two dimensions") {
    auto worst = [](int n) {
        const MetricField m = as_general(neck(n, 16, -3, 3));
        const auto res = einstein_residual(curvature(m), m);
        const auto mask = interior_mask(m.grid);
        double w = 0.0;
        for (std::size_t k = 0; k < res.size(); ++k)
            if (mask[k]) w = std::max(w, res[k]);
        return w;
    };
    const double w1 = worst(64), w2 = worst(128);
    CHECK(std::log2(w1 / w2) > 1.8);
}

TEST_CASE("Hodge Laplacian of sin(kx) dx on the flat torus") {
    for (int k : {1, 2, 3}) {
        auto err = [k](int n) {
            const Grid2D g = torus_grid(n, n);
            const MetricField m = flat_metric(g);
            OneFormField phi(g);
            phi.x = test::sample(g, [k](double x, double) { return std::sin(k * x); });
            const auto L = hodge_laplacian(phi, m, HodgeMethod::via_d_delta);
            return test::max_abs_diff(L.x, test::sample(g, [k](double x, double) { return -k * k * std::sin(k * x); }));
        };
        CHECK(std::log2(err(32) / err(64)) > 1.9);
    }
}

TEST_CASE("Bochner and d-delta coincide on the flat torus") {
    std::mt19937_64 rng(19);
    const Grid2D g = torus_grid(48, 48);
    const MetricField m = flat_metric(g);
    for (int trial = 0; trial < 10; ++trial) {
        const test::RandomTrig px(rng), py(rng);
        const OneFormField phi(g, test::sample(g, px), test::sample(g, py));
        const auto a = hodge_laplacian(phi, m, HodgeMethod::via_d_delta);
        const auto b = hodge_laplacian(phi, m, HodgeMethod::via_bochner);
        CHECK(test::max_abs_diff(a.x, b.x) < 1e-11);
        CHECK(test::max_abs_diff(a.y, b.y) < 1e-11);
    }
}

TEST_CASE("curvature scales as R(lambda g) = R(g) / lambda") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> loglam(-3.0, 5.0);
    const Grid2D g = torus_grid(32, 32);
    for (int trial = 0; trial < 25; ++trial) {
        const test::RandomTrig ur(rng);
        const MetricField m = conformal_metric(g, test::sample(g, [&](double x, double y) { return 0.3 * ur(x, y); }));
        const double lam = std::exp(loglam(rng));
        MetricField s = as_general(m);
        for (auto* c : {&s.xx, &s.xy, &s.yy})
            for (auto& v : *c) v *= lam;
        const auto R = curvature(as_general(m)).scalar;
        const auto Rs = curvature(s).scalar;
        double scale = 0.0, worst = 0.0;
        for (double r : R) scale = std::max(scale, std::abs(r));
        for (std::size_t n = 0; n < R.size(); ++n) worst = std::max(worst, std::abs(lam * Rs[n] - R[n]));
        CHECK(worst / scale < 1e-10);
    }
}

TEST_CASE("pointwise norm of dtheta on a warped metric is 1/f") {
    const MetricField m = neck(32, 16, -2, 2);
    OneFormField dtheta(m.grid);
    std::fill(dtheta.y.begin(), dtheta.y.end(), 1.0);
    const auto n2 = pointwise_norm_sq(dtheta, invert(m));
    for (int i = 0; i < 32; ++i) CHECK(n2[m.grid.index(i, 3)] == doctest::Approx(1.0 / (m.f[i] * m.f[i])).epsilon(1e-14));
}

TEST_CASE("degenerate metrics are rejected, never clamped") {
    const Grid2D g = torus_grid(16, 16);
    std::vector<double> xx(g.size(), 1.0), xy(g.size(), 0.0), yy(g.size(), 1.0);
    xy[g.index(4, 5)] = 1.0;
    try {
        general_metric(g, xx, xy, yy);
        FAIL("a degenerate metric was accepted");
    } catch (const DegenerateMetric& e) {
        CHECK(e.i == 4);
        CHECK(e.j == 5);
    }
}
