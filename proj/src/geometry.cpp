#include "riccilab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riccilab/errors.hpp"
#include "riccilab/stencil.hpp"

namespace riccilab {

namespace {

using Array = std::vector<double>;

// Lower-index metric component g_{ab} by index pair.
inline double lower(const MetricField& g, int a, int b, std::size_t n) {
    const int s = a + b;
    return s == 0 ? g.xx[n] : (s == 1 ? g.xy[n] : g.yy[n]);
}

inline double upper(const MetricInverse& inv, int a, int b, std::size_t n) {
    const int s = a + b;
    return s == 0 ? inv.xx[n] : (s == 1 ? inv.xy[n] : inv.yy[n]);
}

Array diff(const Grid2D& grid, const Array& f, int axis, Exec exec) {
    return axis == 0 ? diff_x(grid, f, exec) : diff_y(grid, f, exec);
}

void require_level(const Geometry& geo, GeometryLevel need) {
    if (static_cast<int>(geo.level) < static_cast<int>(need))
        throw Error("geometry was built without the curvature data this operator needs");
}

}  // namespace

MetricInverse invert(const MetricField& g, Exec exec) {
    const Grid2D& grid = g.grid;
    MetricInverse inv;
    inv.grid = grid;
    inv.xx.resize(grid.size());
    inv.xy.resize(grid.size());
    inv.yy.resize(grid.size());
    inv.sqrt_det.resize(grid.size());
    // Degeneracy is checked serially so the reported node is deterministic.
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double d = g.det(n);
        if (!(g.xx[n] > 0.0) || !(d > kDegenerateDet) || !std::isfinite(d))
            throw DegenerateMetric(static_cast<int>(n / grid.ny), static_cast<int>(n % grid.ny), d);
    }
    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        const double d = g.det(n);
        inv.xx[n] = g.yy[n] / d;
        inv.xy[n] = -g.xy[n] / d;
        inv.yy[n] = g.xx[n] / d;
        inv.sqrt_det[n] = std::sqrt(d);
    });
    return inv;
}

CurvatureData christoffel(const MetricField& g, Exec exec) {
    const Grid2D& grid = g.grid;
    const MetricInverse inv = invert(g, exec);
    // dg[c][a] = d_a g_c with c = 0 (xx), 1 (xy), 2 (yy).
    std::array<std::array<Array, 2>, 3> dg;
    const Array* comps[3] = {&g.xx, &g.xy, &g.yy};
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 2; ++a) dg[c][a] = diff(grid, *comps[c], a, exec);

    CurvatureData out;
    out.grid = grid;
    for (auto& arr : out.gamma) arr.resize(grid.size());
    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        auto dlow = [&](int a, int b, int axis) { return dg[a + b][axis][n]; };
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                double low[2];
                for (int l = 0; l < 2; ++l) low[l] = 0.5 * (dlow(j, l, i) + dlow(i, l, j) - dlow(i, j, l));
                for (int k = 0; k < 2; ++k)
                    out.gamma[CurvatureData::slot(k, i, j)][n] = upper(inv, k, 0, n) * low[0] + upper(inv, k, 1, n) * low[1];
            }
    });
    return out;
}

CurvatureData curvature(const MetricField& g, Exec exec) {
    const Grid2D& grid = g.grid;
    CurvatureData out = christoffel(g, exec);
    const MetricInverse inv = invert(g, exec);

    // dgam[s][a] = d_a Gamma at slot s.
    std::array<std::array<Array, 2>, 6> dgam;
    for (int s = 0; s < 6; ++s)
        for (int a = 0; a < 2; ++a) dgam[s][a] = diff(grid, out.gamma[s], a, exec);

    out.ric_xx.resize(grid.size());
    out.ric_xy.resize(grid.size());
    out.ric_yy.resize(grid.size());
    out.scalar.resize(grid.size());
    for (auto& e : out.endo) e.resize(grid.size());

    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        auto G = [&](int k, int i, int j) { return out.gamma[CurvatureData::slot(k, i, j)][n]; };
        auto dG = [&](int k, int i, int j, int a) { return dgam[CurvatureData::slot(k, i, j)][a][n]; };
        double ric[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double r = 0.0;
                for (int k = 0; k < 2; ++k) {
                    r += dG(k, i, j, k) - dG(k, i, k, j);
                    for (int l = 0; l < 2; ++l) r += G(k, k, l) * G(l, i, j) - G(k, j, l) * G(l, i, k);
                }
                ric[i][j] = r;
            }
        const double rxy = 0.5 * (ric[0][1] + ric[1][0]);
        out.ric_xx[n] = ric[0][0];
        out.ric_xy[n] = rxy;
        out.ric_yy[n] = ric[1][1];
        const double sym[2][2] = {{ric[0][0], rxy}, {rxy, ric[1][1]}};
        out.scalar[n] = inv.xx[n] * sym[0][0] + 2.0 * inv.xy[n] * sym[0][1] + inv.yy[n] * sym[1][1];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out.endo[2 * i + j][n] = upper(inv, j, 0, n) * sym[0][i] + upper(inv, j, 1, n) * sym[1][i];
    });
    out.has_ricci = true;

    out.reduced_scalar = reduced_scalar_curvature(g, exec);
    if (!out.reduced_scalar.empty()) {
        const auto mask = interior_mask(grid);
        double worst = 0.0;
        for (std::size_t n = 0; n < grid.size(); ++n)
            if (mask[n]) worst = std::max(worst, std::abs(out.scalar[n] - out.reduced_scalar[n]));
        out.reduced_residual = worst;
    }
    return out;
}

std::vector<double> reduced_scalar_curvature(const MetricField& g, Exec exec) {
    const Grid2D& grid = g.grid;
    if (g.tag == MetricTag::conformal) {
        Array r(grid.size());
        laplacian_flat(grid, g.u, r, exec);
        for_each_node(exec, grid, [&](int, int, std::size_t n) { r[n] = -2.0 * r[n] / g.xx[n]; });
        return r;
    }
    if (g.tag == MetricTag::warped) {
        const int nx = grid.nx;
        Array inv_h(nx), flux(nx);
        for (int i = 0; i < nx; ++i) inv_h[i] = 1.0 / g.h[i];
        flux_1d(nx, grid.hx(), grid.x_topology, inv_h, g.f, flux);
        Array r(grid.size());
        for (int i = 0; i < nx; ++i) {
            const double k = -flux[i] / (g.h[i] * g.f[i]);
            for (int j = 0; j < grid.ny; ++j) r[grid.index(i, j)] = 2.0 * k;
        }
        return r;
    }
    return {};
}

std::vector<double> einstein_residual(const CurvatureData& c, const MetricField& g) {
    std::vector<double> out(g.grid.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double half = 0.5 * c.scalar[n];
        out[n] = std::max({std::abs(c.ric_xx[n] - half * g.xx[n]), std::abs(c.ric_xy[n] - half * g.xy[n]),
                           std::abs(c.ric_yy[n] - half * g.yy[n])});
    }
    return out;
}

std::vector<std::uint8_t> interior_mask(const Grid2D& grid) {
    auto mask = buffer_mask(grid, 0.15);
    for (auto& m : mask) m = m ? 0 : 1;
    return mask;
}

Geometry Geometry::build(const MetricField& g, GeometryLevel level, Exec exec) {
    Geometry geo;
    geo.metric = g;
    geo.inverse = invert(g, exec);
    geo.level = level;
    if (level == GeometryLevel::christoffel) geo.curvature = riccilab::christoffel(g, exec);
    if (level == GeometryLevel::curvature) geo.curvature = riccilab::curvature(g, exec);
    return geo;
}

OneFormField exterior_derivative(const ScalarField& f, Exec exec) {
    return OneFormField(f.grid, diff_x(f.grid, f.v, exec), diff_y(f.grid, f.v, exec));
}

ScalarField exterior_derivative(const OneFormField& phi, Exec exec) {
    const Grid2D& grid = phi.grid;
    Array a = diff_x(grid, phi.y, exec);
    const Array b = diff_y(grid, phi.x, exec);
    for_each_node(exec, grid, [&](int, int, std::size_t n) { a[n] -= b[n]; });
    return ScalarField(grid, std::move(a));
}

ScalarField codifferential(const OneFormField& phi, const Geometry& geo, Exec exec) {
    const Grid2D& grid = geo.grid();
    require_same_grid(grid, phi.grid);
    const MetricInverse& inv = geo.inverse;
    Array vx(grid.size()), vy(grid.size());
    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        const double s = inv.sqrt_det[n];
        vx[n] = s * (inv.xx[n] * phi.x[n] + inv.xy[n] * phi.y[n]);
        vy[n] = s * (inv.xy[n] * phi.x[n] + inv.yy[n] * phi.y[n]);
    });
    Array dvx = diff_x(grid, vx, exec);
    const Array dvy = diff_y(grid, vy, exec);
    for_each_node(exec, grid, [&](int, int, std::size_t n) { dvx[n] = -(dvx[n] + dvy[n]) / inv.sqrt_det[n]; });
    return ScalarField(grid, std::move(dvx));
}

ScalarField codifferential(const OneFormField& phi, const MetricField& g, Exec exec) {
    return codifferential(phi, Geometry::build(g, GeometryLevel::inverse, exec), exec);
}

OneFormField codifferential_2form(const ScalarField& density, const Geometry& geo, Exec exec) {
    const Grid2D& grid = geo.grid();
    const MetricInverse& inv = geo.inverse;
    const MetricField& g = geo.metric;
    Array s(grid.size());
    for_each_node(exec, grid, [&](int, int, std::size_t n) { s[n] = density.v[n] / inv.sqrt_det[n]; });
    const Array sx = diff_x(grid, s, exec);
    const Array sy = diff_y(grid, s, exec);
    OneFormField out(grid);
    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        // v = (d_theta s, -d_x s) raised; lower with g and divide by sqrt g.
        const double vx = sy[n];
        const double vy = -sx[n];
        out.x[n] = (g.xx[n] * vx + g.xy[n] * vy) / inv.sqrt_det[n];
        out.y[n] = (g.xy[n] * vx + g.yy[n] * vy) / inv.sqrt_det[n];
    });
    return out;
}

namespace {

// T[k][i] = nabla_k phi_i.
std::array<std::array<Array, 2>, 2> covariant_derivative(const OneFormField& phi, const Geometry& geo, Exec exec) {
    const Grid2D& grid = geo.grid();
    const auto& gam = geo.curvature.gamma;
    const Array* comp[2] = {&phi.x, &phi.y};
    std::array<std::array<Array, 2>, 2> t;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i) t[k][i] = diff(grid, *comp[i], k, exec);
    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                t[k][i][n] -= gam[CurvatureData::slot(0, k, i)][n] * phi.x[n] +
                              gam[CurvatureData::slot(1, k, i)][n] * phi.y[n];
    });
    return t;
}

}  // namespace

OneFormField rough_laplacian(const OneFormField& phi, const Geometry& geo, Exec exec) {
    require_level(geo, GeometryLevel::christoffel);
    const Grid2D& grid = geo.grid();
    require_same_grid(grid, phi.grid);
    const auto t = covariant_derivative(phi, geo, exec);
    // dt[a][k][i] = d_a T_{ki}
    std::array<std::array<std::array<Array, 2>, 2>, 2> dt;
    for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i) dt[a][k][i] = diff(grid, t[k][i], a, exec);
    const auto& gam = geo.curvature.gamma;
    const MetricInverse& inv = geo.inverse;
    OneFormField out(grid);
    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        auto G = [&](int l, int a, int b) { return gam[CurvatureData::slot(l, a, b)][n]; };
        double res[2];
        for (int i = 0; i < 2; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    double second = dt[j][k][i][n];
                    for (int l = 0; l < 2; ++l) second -= G(l, j, k) * t[l][i][n] + G(l, j, i) * t[k][l][n];
                    acc += upper(inv, j, k, n) * second;
                }
            res[i] = acc;
        }
        out.x[n] = res[0];
        out.y[n] = res[1];
    });
    return out;
}

OneFormField rough_laplacian(const OneFormField& phi, const MetricField& g, Exec exec) {
    return rough_laplacian(phi, Geometry::build(g, GeometryLevel::christoffel, exec), exec);
}

OneFormField hodge_laplacian(const OneFormField& phi, const Geometry& geo, HodgeMethod method, Exec exec) {
    const Grid2D& grid = geo.grid();
    require_same_grid(grid, phi.grid);
    if (method == HodgeMethod::via_bochner) {
        require_level(geo, GeometryLevel::curvature);
        OneFormField out = rough_laplacian(phi, geo, exec);
        const auto& e = geo.curvature.endo;
        for_each_node(exec, grid, [&](int, int, std::size_t n) {
            out.x[n] -= e[0][n] * phi.x[n] + e[1][n] * phi.y[n];
            out.y[n] -= e[2][n] * phi.x[n] + e[3][n] * phi.y[n];
        });
        return out;
    }
    const ScalarField div = codifferential(phi, geo, exec);
    const OneFormField grad = exterior_derivative(div, exec);
    const OneFormField curl = codifferential_2form(exterior_derivative(phi, exec), geo, exec);
    OneFormField out(grid);
    for_each_node(exec, grid, [&](int, int, std::size_t n) {
        out.x[n] = -(grad.x[n] + curl.x[n]);
        out.y[n] = -(grad.y[n] + curl.y[n]);
    });
    return out;
}

OneFormField hodge_laplacian(const OneFormField& phi, const MetricField& g, HodgeMethod method, Exec exec) {
    const auto level = method == HodgeMethod::via_bochner ? GeometryLevel::curvature : GeometryLevel::inverse;
    return hodge_laplacian(phi, Geometry::build(g, level, exec), method, exec);
}

ScalarField scalar_laplacian(const ScalarField& f, const Geometry& geo, ScalarStencil stencil, Exec exec) {
    const Grid2D& grid = geo.grid();
    require_same_grid(grid, f.grid);
    if (stencil == ScalarStencil::cochain) {
        ScalarField out = codifferential(exterior_derivative(f, exec), geo, exec);
        for (double& v : out.v) v = -v;
        return out;
    }
    const MetricInverse& inv = geo.inverse;
    Array axx(grid.size()), ayy(grid.size()), axy(grid.size());
    bool mixed = false;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        axx[n] = inv.sqrt_det[n] * inv.xx[n];
        ayy[n] = inv.sqrt_det[n] * inv.yy[n];
        axy[n] = inv.sqrt_det[n] * inv.xy[n];
        mixed = mixed || axy[n] != 0.0;
    }
    Array out(grid.size()), tmp(grid.size());
    flux_xx(grid, axx, f.v, out, exec);
    flux_yy(grid, ayy, f.v, tmp, exec);
    for_each_node(exec, grid, [&](int, int, std::size_t n) { out[n] += tmp[n]; });
    if (mixed) {
        Array fx = diff_x(grid, f.v, exec);
        Array fy = diff_y(grid, f.v, exec);
        for_each_node(exec, grid, [&](int, int, std::size_t n) {
            fx[n] *= axy[n];
            fy[n] *= axy[n];
        });
        const Array cx = diff_x(grid, fy, exec);
        const Array cy = diff_y(grid, fx, exec);
        for_each_node(exec, grid, [&](int, int, std::size_t n) { out[n] += cx[n] + cy[n]; });
    }
    for_each_node(exec, grid, [&](int, int, std::size_t n) { out[n] /= inv.sqrt_det[n]; });
    return ScalarField(grid, std::move(out));
}

ScalarField volume_element(const MetricField& g) {
    ScalarField out(g.grid);
    for (std::size_t n = 0; n < out.v.size(); ++n) {
        const double d = g.det(n);
        if (!(d > kDegenerateDet))
            throw DegenerateMetric(static_cast<int>(n / g.grid.ny), static_cast<int>(n % g.grid.ny), d);
        out.v[n] = std::sqrt(d);
    }
    return out;
}

std::vector<double> pointwise_norm_sq(const OneFormField& phi, const MetricInverse& inv, Exec exec) {
    std::vector<double> out(phi.grid.size());
    for_each_node(exec, phi.grid, [&](int, int, std::size_t n) {
        out[n] = inv.xx[n] * phi.x[n] * phi.x[n] + 2.0 * inv.xy[n] * phi.x[n] * phi.y[n] +
                 inv.yy[n] * phi.y[n] * phi.y[n];
    });
    return out;
}

std::vector<double> gradient_norm_sq(const OneFormField& phi, const Geometry& geo, Exec exec) {
    require_level(geo, GeometryLevel::christoffel);
    const auto t = covariant_derivative(phi, geo, exec);
    const MetricInverse& inv = geo.inverse;
    std::vector<double> out(phi.grid.size());
    for_each_node(exec, phi.grid, [&](int, int, std::size_t n) {
        double acc = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        acc += upper(inv, k, a, n) * upper(inv, i, b, n) * t[k][i][n] * t[a][b][n];
        out[n] = acc;
    });
    return out;
}

std::vector<double> axial_distance(const MetricField& g) {
    const Grid2D& grid = g.grid;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> out(grid.size(), inf);
    const int oi = grid.origin_i;
    const int oj = grid.origin_j;
    const double hx = grid.hx();
    // Arclength profile along the x axis through the base point, row oj.
    auto speed = [&](int i) { return std::sqrt(g.xx[grid.index(i, oj)]); };
    std::vector<double> fwd(grid.nx, inf), bwd(grid.nx, inf);
    fwd[oi] = bwd[oi] = 0.0;
    const bool periodic = grid.x_topology == Topology::periodic;
    for (int s = 1; s < grid.nx; ++s) {
        const int i = oi + s;
        const int ip = oi + s - 1;
        if (i < grid.nx || periodic) {
            const int a = i % grid.nx, b = ip % grid.nx;
            fwd[a] = std::min(fwd[a], fwd[b] + 0.5 * hx * (speed(a) + speed(b)));
        }
        const int k = oi - s;
        const int kp = oi - s + 1;
        if (k >= 0 || periodic) {
            const int a = (k + grid.nx) % grid.nx, b = (kp + grid.nx) % grid.nx;
            bwd[a] = std::min(bwd[a], bwd[b] + 0.5 * hx * (speed(a) + speed(b)));
        }
    }
    std::vector<double> along(grid.nx);
    for (int i = 0; i < grid.nx; ++i) along[i] = std::min(fwd[i], bwd[i]);

    if (grid.truncated_y()) {
        // Plane: rotationally symmetric about the base point; interpolate the
        // positive-ray profile at each node's coordinate radius.
        const double x0 = grid.x(oi);
        const double y0 = grid.y(oj);
        const int last = grid.nx - 1;
        const double r_max = grid.x(last) - x0;
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                const double r = std::hypot(grid.x(i) - x0, grid.y(j) - y0);
                if (r > r_max + 1e-12) continue;
                const double pos = r / hx;
                const int k = std::min(static_cast<int>(pos), last - oi - 1);
                const double w = pos - k;
                out[grid.index(i, j)] = (1.0 - w) * along[oi + k] + w * along[oi + k + 1];
            }
        return out;
    }
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) out[grid.index(i, j)] = along[i];
    return out;
}

}  // namespace riccilab
