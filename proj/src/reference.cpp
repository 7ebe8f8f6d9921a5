#include "riccilab/reference.hpp"

#include <cmath>

#include "riccilab/errors.hpp"

namespace riccilab::reference {

namespace {

using Tensor2 = double[2][2];

void metric_at(const MetricField& g, std::size_t n, Tensor2 low, Tensor2 up, double& sqrt_det) {
    low[0][0] = g.xx[n];
    low[0][1] = low[1][0] = g.xy[n];
    low[1][1] = g.yy[n];
    const double det = low[0][0] * low[1][1] - low[0][1] * low[1][0];
    if (!(low[0][0] > 0.0) || !(det > kDegenerateDet)) throw Error("reference: degenerate metric");
    up[0][0] = low[1][1] / det;
    up[1][1] = low[0][0] / det;
    up[0][1] = up[1][0] = -low[0][1] / det;
    sqrt_det = std::sqrt(det);
}

std::vector<double> component(const MetricField& g, int a, int b) {
    if (a == 0 && b == 0) return g.xx;
    if (a == 1 && b == 1) return g.yy;
    return g.xy;
}

}  // namespace

double derivative(const Grid2D& grid, const std::vector<double>& f, int axis, int i, int j) {
    const int n = axis == 0 ? grid.nx : grid.ny;
    const int k = axis == 0 ? i : j;
    const bool periodic = (axis == 0 ? grid.x_topology : grid.y_topology) == Topology::periodic;
    const double h = axis == 0 ? grid.hx() : grid.hy();
    auto at = [&](int m) { return axis == 0 ? f[grid.index(m, j)] : f[grid.index(i, m)]; };
    if (periodic || (k > 0 && k < n - 1)) return (at((k + 1) % n) - at((k - 1 + n) % n)) / (2.0 * h);
    if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
}

CurvatureData curvature(const MetricField& g) {
    const Grid2D& grid = g.grid;
    const std::size_t N = grid.size();
    std::vector<double> gc[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) gc[a][b] = component(g, a, b);

    CurvatureData out;
    out.grid = grid;
    for (auto& s : out.gamma) s.assign(N, 0.0);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            Tensor2 low, up;
            double sd;
            metric_at(g, n, low, up, sd);
            double dg[2][2][2];  // dg[c][a][b] = d_c g_ab
            for (int c = 0; c < 2; ++c)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) dg[c][a][b] = derivative(grid, gc[a][b], c, i, j);
            for (int k = 0; k < 2; ++k)
                for (int a = 0; a < 2; ++a)
                    for (int b = a; b < 2; ++b) {
                        double s = 0.0;
                        for (int l = 0; l < 2; ++l) s += 0.5 * up[k][l] * (dg[a][l][b] + dg[b][l][a] - dg[l][a][b]);
                        out.gamma[CurvatureData::slot(k, a, b)][n] = s;
                    }
        }

    out.ric_xx.assign(N, 0.0);
    out.ric_xy.assign(N, 0.0);
    out.ric_yy.assign(N, 0.0);
    out.scalar.assign(N, 0.0);
    for (auto& e : out.endo) e.assign(N, 0.0);
    auto G = [&](int k, int a, int b, std::size_t n) { return out.gamma[CurvatureData::slot(k, a, b)][n]; };
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            Tensor2 low, up;
            double sd;
            metric_at(g, n, low, up, sd);
            double ric[2][2];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double r = 0.0;
                    for (int k = 0; k < 2; ++k) {
                        r += derivative(grid, out.gamma[CurvatureData::slot(k, a, b)], k, i, j);
                        r -= derivative(grid, out.gamma[CurvatureData::slot(k, a, k)], b, i, j);
                        for (int l = 0; l < 2; ++l) r += G(k, k, l, n) * G(l, a, b, n) - G(k, b, l, n) * G(l, a, k, n);
                    }
                    ric[a][b] = r;
                }
            ric[0][1] = ric[1][0] = 0.5 * (ric[0][1] + ric[1][0]);
            out.ric_xx[n] = ric[0][0];
            out.ric_xy[n] = ric[0][1];
            out.ric_yy[n] = ric[1][1];
            double R = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) R += up[a][b] * ric[a][b];
            out.scalar[n] = R;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double e = 0.0;
                    for (int k = 0; k < 2; ++k) e += up[b][k] * ric[k][a];
                    out.endo[2 * a + b][n] = e;
                }
        }
    out.has_ricci = true;
    return out;
}

ScalarField codifferential(const OneFormField& phi, const MetricField& g) {
    const Grid2D& grid = g.grid;
    const std::size_t N = grid.size();
    std::vector<double> v[2] = {std::vector<double>(N), std::vector<double>(N)};
    std::vector<double> sdet(N);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            Tensor2 low, up;
            metric_at(g, n, low, up, sdet[n]);
            const double p[2] = {phi.x[n], phi.y[n]};
            for (int a = 0; a < 2; ++a) v[a][n] = sdet[n] * (up[a][0] * p[0] + up[a][1] * p[1]);
        }
    ScalarField out(grid);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            out.v[n] = -(derivative(grid, v[0], 0, i, j) + derivative(grid, v[1], 1, i, j)) / sdet[n];
        }
    return out;
}

OneFormField rough_laplacian(const OneFormField& phi, const MetricField& g) {
    const Grid2D& grid = g.grid;
    const std::size_t N = grid.size();
    const CurvatureData c = reference::curvature(g);
    auto G = [&](int k, int a, int b, std::size_t n) { return c.gamma[CurvatureData::slot(k, a, b)][n]; };
    const std::vector<double>* p[2] = {&phi.x, &phi.y};
    // T[k][a] = nabla_k phi_a
    std::vector<double> T[2][2];
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a) T[k][a].assign(N, 0.0);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            for (int k = 0; k < 2; ++k)
                for (int a = 0; a < 2; ++a) {
                    double t = derivative(grid, *p[a], k, i, j);
                    for (int l = 0; l < 2; ++l) t -= G(l, k, a, n) * (*p[l])[n];
                    T[k][a][n] = t;
                }
        }
    OneFormField out(grid);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            Tensor2 low, up;
            double sd;
            metric_at(g, n, low, up, sd);
            double res[2] = {0.0, 0.0};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int k = 0; k < 2; ++k) {
                        // nabla_b nabla_k phi_a
                        double s = derivative(grid, T[k][a], b, i, j);
                        for (int l = 0; l < 2; ++l) s -= G(l, b, k, n) * T[l][a][n] + G(l, b, a, n) * T[k][l][n];
                        res[a] += up[b][k] * s;
                    }
            out.x[n] = res[0];
            out.y[n] = res[1];
        }
    return out;
}

OneFormField hodge_laplacian(const OneFormField& phi, const MetricField& g, HodgeMethod method) {
    const Grid2D& grid = g.grid;
    OneFormField out(grid);
    if (method == HodgeMethod::via_bochner) {
        const CurvatureData c = reference::curvature(g);
        out = reference::rough_laplacian(phi, g);
        for (std::size_t n = 0; n < grid.size(); ++n) {
            out.x[n] -= c.endo[0][n] * phi.x[n] + c.endo[1][n] * phi.y[n];
            out.y[n] -= c.endo[2][n] * phi.x[n] + c.endo[3][n] * phi.y[n];
        }
        return out;
    }
    const ScalarField div = reference::codifferential(phi, g);
    // Curl density w = d_x phi_theta - d_theta phi_x, then s = w / sqrt g.
    std::vector<double> s(grid.size());
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            Tensor2 low, up;
            double sd;
            metric_at(g, n, low, up, sd);
            s[n] = (derivative(grid, phi.y, 0, i, j) - derivative(grid, phi.x, 1, i, j)) / sd;
        }
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            Tensor2 low, up;
            double sd;
            metric_at(g, n, low, up, sd);
            // delta of the 2-form: lower (d_theta s, -d_x s) and divide by sqrt g.
            const double v[2] = {derivative(grid, s, 1, i, j), -derivative(grid, s, 0, i, j)};
            double curl[2];
            for (int a = 0; a < 2; ++a) curl[a] = (low[a][0] * v[0] + low[a][1] * v[1]) / sd;
            out.x[n] = -(derivative(grid, div.v, 0, i, j) + curl[0]);
            out.y[n] = -(derivative(grid, div.v, 1, i, j) + curl[1]);
        }
    return out;
}

}  // namespace riccilab::reference
