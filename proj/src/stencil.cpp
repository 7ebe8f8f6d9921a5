#include "riccilab/stencil.hpp"

#include <cassert>

namespace riccilab {

namespace {

// Strided 1-D first derivative of f[k * stride] for k = 0..n-1.
inline double first(const double* f, int k, int n, std::size_t stride, double inv2h, bool periodic) {
    if (k > 0 && k < n - 1) return (f[(k + 1) * stride] - f[(k - 1) * stride]) * inv2h;
    if (periodic) {
        const int kp = (k + 1) % n;
        const int km = (k - 1 + n) % n;
        return (f[kp * stride] - f[km * stride]) * inv2h;
    }
    if (k == 0) return (-3.0 * f[0] + 4.0 * f[stride] - f[2 * stride]) * inv2h;
    const std::size_t e = static_cast<std::size_t>(n - 1) * stride;
    return (3.0 * f[e] - 4.0 * f[e - stride] + f[e - 2 * stride]) * inv2h;
}

inline double flux(const double* a, const double* f, int k, int n, std::size_t stride, double h,
                   bool periodic) {
    const double inv_h2 = 1.0 / (h * h);
    if ((k > 0 && k < n - 1) || periodic) {
        const int kp = (k + 1) % n;
        const int km = (k - 1 + n) % n;
        const double ap = 0.5 * (a[k * stride] + a[kp * stride]);
        const double am = 0.5 * (a[km * stride] + a[k * stride]);
        return (ap * (f[kp * stride] - f[k * stride]) - am * (f[k * stride] - f[km * stride])) * inv_h2;
    }
    // One-sided a f'' + a' f' at a truncated end.
    const double inv2h = 0.5 / h;
    const int s = k == 0 ? 1 : -1;
    auto at = [&](const double* v, int m) { return v[static_cast<std::size_t>(k + s * m) * stride]; };
    const double f2 = (2.0 * at(f, 0) - 5.0 * at(f, 1) + 4.0 * at(f, 2) - at(f, 3)) * inv_h2;
    const double f1 = s * (-3.0 * at(f, 0) + 4.0 * at(f, 1) - at(f, 2)) * inv2h;
    const double a1 = s * (-3.0 * at(a, 0) + 4.0 * at(a, 1) - at(a, 2)) * inv2h;
    return at(a, 0) * f2 + a1 * f1;
}

// flux() with a identically 1.
inline double unit_flux(const double* f, int k, int n, std::size_t stride, double h, bool periodic) {
    const double inv_h2 = 1.0 / (h * h);
    if ((k > 0 && k < n - 1) || periodic) {
        const int kp = (k + 1) % n;
        const int km = (k - 1 + n) % n;
        return ((f[kp * stride] - f[k * stride]) - (f[k * stride] - f[km * stride])) * inv_h2;
    }
    const int s = k == 0 ? 1 : -1;
    auto at = [&](int m) { return f[static_cast<std::size_t>(k + s * m) * stride]; };
    return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * inv_h2;
}

}  // namespace

void diff_x(const Grid2D& grid, std::span<const double> f, std::span<double> out, Exec exec) {
    assert(f.size() == grid.size() && out.size() == grid.size());
    const double inv2h = 0.5 / grid.hx();
    const bool periodic = grid.x_topology == Topology::periodic;
    const int nx = grid.nx;
    const int ny = grid.ny;
    for_each_row(exec, nx, [&](int i) {
        double* dst = out.data() + grid.index(i, 0);
        if (i > 0 && i < nx - 1) {
            // Whole rows are contiguous: difference the neighbouring rows.
            const double* up = f.data() + grid.index(i + 1, 0);
            const double* dn = f.data() + grid.index(i - 1, 0);
            for (int j = 0; j < ny; ++j) dst[j] = (up[j] - dn[j]) * inv2h;
            return;
        }
        for (int j = 0; j < ny; ++j)
            dst[j] = first(f.data() + j, i, nx, static_cast<std::size_t>(ny), inv2h, periodic);
    });
}

void diff_y(const Grid2D& grid, std::span<const double> f, std::span<double> out, Exec exec) {
    assert(f.size() == grid.size() && out.size() == grid.size());
    const double inv2h = 0.5 / grid.hy();
    const bool periodic = grid.y_topology == Topology::periodic;
    const int ny = grid.ny;
    for_each_row(exec, grid.nx, [&](int i) {
        const double* row = f.data() + grid.index(i, 0);
        double* dst = out.data() + grid.index(i, 0);
        for (int j = 1; j < ny - 1; ++j) dst[j] = (row[j + 1] - row[j - 1]) * inv2h;
        dst[0] = first(row, 0, ny, 1, inv2h, periodic);
        dst[ny - 1] = first(row, ny - 1, ny, 1, inv2h, periodic);
    });
}

std::vector<double> diff_x(const Grid2D& grid, std::span<const double> f, Exec exec) {
    std::vector<double> out(grid.size());
    diff_x(grid, f, out, exec);
    return out;
}

std::vector<double> diff_y(const Grid2D& grid, std::span<const double> f, Exec exec) {
    std::vector<double> out(grid.size());
    diff_y(grid, f, out, exec);
    return out;
}

void flux_xx(const Grid2D& grid, std::span<const double> a, std::span<const double> f,
             std::span<double> out, Exec exec) {
    const double h = grid.hx();
    const bool periodic = grid.x_topology == Topology::periodic;
    const int nx = grid.nx;
    const int ny = grid.ny;
    for_each_row(exec, nx, [&](int i) {
        for (int j = 0; j < ny; ++j)
            out[grid.index(i, j)] =
                flux(a.data() + j, f.data() + j, i, nx, static_cast<std::size_t>(ny), h, periodic);
    });
}

void flux_yy(const Grid2D& grid, std::span<const double> a, std::span<const double> f,
             std::span<double> out, Exec exec) {
    const double h = grid.hy();
    const bool periodic = grid.y_topology == Topology::periodic;
    const int ny = grid.ny;
    for_each_row(exec, grid.nx, [&](int i) {
        const std::size_t base = grid.index(i, 0);
        for (int j = 0; j < ny; ++j) out[base + j] = flux(a.data() + base, f.data() + base, j, ny, 1, h, periodic);
    });
}

void laplacian_flat(const Grid2D& grid, std::span<const double> f, std::span<double> out, Exec exec) {
    assert(f.size() == grid.size() && out.size() == grid.size());
    const double hx = grid.hx(), hy = grid.hy();
    const double ix2 = 1.0 / (hx * hx), iy2 = 1.0 / (hy * hy);
    const bool px = grid.x_topology == Topology::periodic;
    const bool py = grid.y_topology == Topology::periodic;
    const int nx = grid.nx;
    const int ny = grid.ny;
    for_each_row(exec, nx, [&](int i) {
        const std::size_t base = grid.index(i, 0);
        const double* row = f.data() + base;
        double* dst = out.data() + base;
        if (i > 0 && i < nx - 1) {
            const double* up = row + ny;
            const double* dn = row - ny;
            for (int j = 0; j < ny; ++j) dst[j] = ((up[j] - row[j]) - (row[j] - dn[j])) * ix2;
        } else {
            for (int j = 0; j < ny; ++j) dst[j] = unit_flux(f.data() + j, i, nx, static_cast<std::size_t>(ny), hx, px);
        }
        for (int j = 1; j < ny - 1; ++j) dst[j] += ((row[j + 1] - row[j]) - (row[j] - row[j - 1])) * iy2;
        dst[0] += unit_flux(row, 0, ny, 1, hy, py);
        dst[ny - 1] += unit_flux(row, ny - 1, ny, 1, hy, py);
    });
}

void flux_1d(int n, double h, Topology topology, std::span<const double> a, std::span<const double> f,
             std::span<double> out) {
    const bool periodic = topology == Topology::periodic;
    for (int k = 0; k < n; ++k) out[k] = flux(a.data(), f.data(), k, n, 1, h, periodic);
}

}  // namespace riccilab
