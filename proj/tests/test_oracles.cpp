#include <doctest.h>

#include <cmath>

#include "riccilab/errors.hpp"
#include "riccilab/oracles.hpp"

using namespace riccilab;

TEST_CASE("cigar closed form") {
    CHECK(cigar_curvature(0.0) == 4.0);
    CHECK(cigar_curvature(0.0, 0.3) == doctest::Approx(4.0));
    CHECK(cigar_curvature(1.0) == doctest::Approx(2.0));
    CHECK(cigar_potential(0.0) == 0.0);
    // R = -2 e^{-2u} lap u for the radial potential, checked by central differences.
    const double r = 0.7, h = 1e-4;
    auto u = [](double s) { return cigar_potential(s); };
    const double lap = (u(r + h) - 2 * u(r) + u(r - h)) / (h * h) + (u(r + h) - u(r - h)) / (2 * h) / r;
    CHECK(-2 * std::exp(-2 * u(r)) * lap == doctest::Approx(cigar_curvature(r)).epsilon(1e-6));
}

TEST_CASE("cigar oracle on a grid") {
    const Grid2D g = plane_grid(257, 257, 8.0);
    const CigarOracle o = cigar_oracle(g, 0.07);
    CHECK(o.sup_curvature == 4.0);
    CHECK(o.curvature.error_bound > 0.0);
    CHECK(o.curvature.values[g.index(g.origin_i, g.origin_j)] == doctest::Approx(4.0));
    CHECK_THROWS_AS(cigar_oracle(plane_grid(33, 33, 1.0), 1e-3), DomainTooSmall);
}

TEST_CASE("neck curvature against the profile") {
    for (double x : {-2.0, -0.5, 0.0, 0.3, 1.5}) {
        const double h = 1e-4;
        const double f2 = (neck_profile(x + h, 2, 1) - 2 * neck_profile(x, 2, 1) + neck_profile(x - h, 2, 1)) / (h * h);
        CHECK(neck_curvature(x, 2, 1) == doctest::Approx(-2 * f2 / neck_profile(x, 2, 1)).epsilon(1e-6));
    }
    CHECK(neck_profile(0.0, 2, 1) == 1.0);
}

TEST_CASE("spectral oracle applies only to the flat torus") {
    const Grid2D g = torus_grid(16, 16);
    const auto o = flat_spectral_oracle(TrigSeries{0.0, {{1.0, 2, 1, true}}}, flat_metric(g), 0.25);
    CHECK(o.error_bound > 0.0);
    const std::size_t n = g.index(3, 5);
    CHECK(o.values[n] == doctest::Approx(std::exp(-5 * 0.25) * std::sin(2 * g.x(3) + g.y(5))));
    std::vector<double> u(g.size(), 0.1);
    CHECK_THROWS_AS(flat_spectral_oracle(TrigSeries{}, conformal_metric(g, u), 0.1), OracleInapplicable);
}

TEST_CASE("quadrature oracle") {
    const auto o = quadrature_oracle([](double x, double y) { return x * x * std::cos(y) * std::cos(y); },
                                     QuadratureDomain{0, 1, 0, 2 * M_PI, false, true}, 16);
    CHECK(o.values[0] == doctest::Approx(M_PI / 3).epsilon(1e-10));
    CHECK(o.error_bound > 0.0);
    CHECK(std::abs(o.values[0] - M_PI / 3) <= o.error_bound + 1e-14);
}
