#include "riccilab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "riccilab/errors.hpp"

namespace riccilab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_flat_torus(const MetricField& g) {
    const Grid2D& grid = g.grid;
    auto full_circle = [](double l) { return std::abs(l - kTwoPi) < 1e-12; };
    if (grid.x_topology != Topology::periodic || grid.y_topology != Topology::periodic || !full_circle(grid.lx) ||
        !full_circle(grid.ly))
        throw OracleInapplicable("spectral oracle needs the periodic [0, 2pi)^2 torus");
    for (std::size_t n = 0; n < grid.size(); ++n)
        if (g.xx[n] != 1.0 || g.xy[n] != 0.0 || g.yy[n] != 1.0)
            throw OracleInapplicable("spectral oracle needs the flat metric");
}

double series_at(const TrigSeries& s, double x, double y, double t) {
    double v = s.constant;
    for (const auto& m : s.modes) {
        const double k2 = static_cast<double>(m.kx * m.kx + m.ky * m.ky);
        const double arg = m.kx * x + m.ky * y;
        v += m.amplitude * std::exp(-k2 * t) * (m.sine ? std::sin(arg) : std::cos(arg));
    }
    return v;
}

double series_scale(const TrigSeries& s) {
    double a = std::abs(s.constant);
    for (const auto& m : s.modes) a += std::abs(m.amplitude);
    return a;
}

}  // namespace

OracleResult flat_spectral_oracle(const TrigSeries& u0, const MetricField& g, double t) {
    require_flat_torus(g);
    const Grid2D& grid = g.grid;
    OracleResult r;
    r.label = "flat-spectral-scalar";
    r.method = "modewise exp(-|k|^2 t)";
    r.values.resize(grid.size());
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) r.values[grid.index(i, j)] = series_at(u0, grid.x(i), grid.y(j), t);
    r.error_bound = 64.0 * kEps * std::max(series_scale(u0), 1.0);
    return r;
}

OracleResult flat_spectral_oracle(const FormSeries& phi0, const MetricField& g, double t) {
    require_flat_torus(g);
    const Grid2D& grid = g.grid;
    OracleResult r;
    r.label = "flat-spectral-form";
    r.method = "modewise exp(-|k|^2 t) per component";
    r.values.resize(2 * grid.size());
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            r.values[n] = series_at(phi0.x, grid.x(i), grid.y(j), t);
            r.values[grid.size() + n] = series_at(phi0.y, grid.x(i), grid.y(j), t);
        }
    r.error_bound = 64.0 * kEps * std::max({series_scale(phi0.x), series_scale(phi0.y), 1.0});
    return r;
}

double cigar_potential(double r, double t) { return -0.5 * std::log(std::exp(4.0 * t) + r * r); }

double cigar_curvature(double r, double t) {
    const double e = std::exp(4.0 * t);
    return 4.0 * e / (e + r * r);
}

CigarOracle cigar_oracle(const Grid2D& grid, double support_level, double support_radius) {
    if (!grid.truncated_x() || !grid.truncated_y()) throw OracleInapplicable("cigar oracle needs a truncated plane grid");
    const double x0 = grid.x(grid.origin_i);
    const double y0 = grid.y(grid.origin_j);
    const double inscribed = std::min({x0 - grid.x_min, grid.x_min + grid.lx - x0, y0 - grid.y_min,
                                       grid.y_min + grid.ly - y0});
    const double rs = support_radius > 0.0 ? support_radius : inscribed;
    const double edge = cigar_curvature(rs);
    if (edge > support_level)
        throw DomainTooSmall("cigar curvature at radius " + std::to_string(rs) + " is " + std::to_string(edge) +
                             ", above the support level " + std::to_string(support_level));
    std::vector<double> u(grid.size());
    CigarOracle out;
    out.curvature.label = "cigar-curvature";
    out.curvature.method = "closed form 4/(1+r^2)";
    out.curvature.values.resize(grid.size());
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const double r = std::hypot(grid.x(i) - x0, grid.y(j) - y0);
            u[grid.index(i, j)] = cigar_potential(r);
            out.curvature.values[grid.index(i, j)] = cigar_curvature(r);
        }
    out.curvature.error_bound = 16.0 * kEps * 4.0;
    out.metric = conformal_metric(grid, std::move(u));
    return out;
}

double neck_profile(double x, double a, double b) { return a - b * std::exp(-x * x); }

double neck_curvature(double x, double a, double b) {
    // f'' = b e^{-x^2} (2 - 4x^2)
    const double fpp = b * std::exp(-x * x) * (2.0 - 4.0 * x * x);
    return -2.0 * fpp / neck_profile(x, a, b);
}

namespace {

double trapezoid(const std::function<double(double, double)>& f, const QuadratureDomain& d, int n) {
    const int mx = d.periodic_x ? n : n + 1;
    const int my = d.periodic_y ? n : n + 1;
    const double hx = d.lx / n;
    const double hy = d.ly / n;
    double sum = 0.0;
    for (int i = 0; i < mx; ++i) {
        const double wx = (!d.periodic_x && (i == 0 || i == n)) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j < my; ++j) {
            const double wy = (!d.periodic_y && (j == 0 || j == n)) ? 0.5 : 1.0;
            row += wy * f(d.x0 + i * hx, d.y0 + j * hy);
        }
        sum += wx * row;
    }
    return sum * hx * hy;
}

}  // namespace

OracleResult quadrature_oracle(const std::function<double(double, double)>& f, const QuadratureDomain& dom, int n) {
    if (n < 2 || !(dom.lx > 0.0) || !(dom.ly > 0.0)) throw OracleInapplicable("quadrature needs a non-empty domain");
    const double i1 = trapezoid(f, dom, n);
    const double i2 = trapezoid(f, dom, 2 * n);
    const double i4 = trapezoid(f, dom, 4 * n);
    const double scale = std::max({std::abs(i1), std::abs(i2), std::abs(i4), 1.0});
    const double e12 = std::abs(i2 - i1);
    const double e24 = std::abs(i4 - i2);
    const double floor = 64.0 * kEps * scale * (4.0 * n);
    if (e24 > floor && e24 > 0.5 * e12)
        throw UnreliableOracle("trapezoid refinement does not converge (differences " + std::to_string(e12) + ", " +
                               std::to_string(e24) + ")");
    OracleResult r;
    r.label = "quadrature";
    r.method = "trapezoid n/2n/4n with Richardson";
    const double richardson = i4 + (i4 - i2) / 3.0;
    r.values = {richardson};
    // The extrapolation error is bounded by the last correction, which for a
    // converging second-order rule dominates the remaining terms.
    r.error_bound = std::abs(richardson - i4) + e24 * e24 / std::max(e12, floor) + floor;
    return r;
}

}  // namespace riccilab
