#include "riccilab/grid.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "riccilab/errors.hpp"

namespace riccilab {

namespace {

double weight(int k, int n, double h, Topology topology) {
    if (topology == Topology::truncated && (k == 0 || k == n - 1)) return 0.5 * h;
    return h;
}

std::uint64_t fnv1a(std::uint64_t state, const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < bytes; ++k) {
        state ^= p[k];
        state *= 1099511628211ULL;
    }
    return state;
}

}  // namespace

double Grid2D::weight_x(int i) const { return weight(i, nx, hx(), x_topology); }
double Grid2D::weight_y(int j) const { return weight(j, ny, hy(), y_topology); }

std::uint64_t Grid2D::hash() const {
    std::uint64_t s = 14695981039346656037ULL;
    const int ints[] = {nx, ny, static_cast<int>(x_topology), static_cast<int>(y_topology), origin_i,
                        origin_j};
    const double reals[] = {x_min, lx, y_min, ly};
    s = fnv1a(s, ints, sizeof(ints));
    s = fnv1a(s, reals, sizeof(reals));
    return s;
}

Grid2D make_grid(int nx, int ny, double x_min, double lx, double y_min, double ly,
                 Topology x_topology, Topology y_topology) {
    if (nx < 8 || ny < 8)
        throw GridError("grid needs at least 8 nodes per axis, got " + std::to_string(nx) + " x " +
                        std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw GridError("grid extents must be positive and finite");
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.x_min = x_min;
    g.lx = lx;
    g.y_min = y_min;
    g.ly = ly;
    g.x_topology = x_topology;
    g.y_topology = y_topology;
    g.origin_i = nx / 2;
    g.origin_j = ny / 2;
    if (!(g.hx() > 0.0) || !(g.hy() > 0.0)) throw GridError("grid spacing must be positive");
    return g;
}

Grid2D torus_grid(int nx, int ny) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Grid2D g = make_grid(nx, ny, 0.0, two_pi, 0.0, two_pi, Topology::periodic, Topology::periodic);
    g.origin_i = 0;
    g.origin_j = 0;
    return g;
}

Grid2D cylinder_grid(int nx, int ny, double x_min, double x_max) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Grid2D g = make_grid(nx, ny, x_min, x_max - x_min, 0.0, two_pi, Topology::truncated,
                         Topology::periodic);
    // Base point on the circle closest to x = 0 when the domain contains it.
    int best = 0;
    for (int i = 1; i < nx; ++i)
        if (std::abs(g.x(i)) < std::abs(g.x(best))) best = i;
    g.origin_i = best;
    g.origin_j = 0;
    return g;
}

Grid2D plane_grid(int nx, int ny, double half_width) {
    Grid2D g = make_grid(nx, ny, -half_width, 2.0 * half_width, -half_width, 2.0 * half_width,
                         Topology::truncated, Topology::truncated);
    g.origin_i = (nx - 1) / 2;
    g.origin_j = (ny - 1) / 2;
    return g;
}

std::vector<std::uint8_t> boundary_mask(const Grid2D& grid) {
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const bool bx = grid.truncated_x() && (i == 0 || i == grid.nx - 1);
            const bool by = grid.truncated_y() && (j == 0 || j == grid.ny - 1);
            if (bx || by) mask[grid.index(i, j)] = 1;
        }
    return mask;
}

std::vector<std::uint8_t> buffer_mask(const Grid2D& grid, double fraction) {
    std::vector<std::uint8_t> mask(grid.size(), 0);
    const double wx = fraction * grid.lx;
    const double wy = fraction * grid.ly;
    const double x_max = grid.x_min + grid.lx;
    const double y_max = grid.y_min + grid.ly;
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const double x = grid.x(i);
            const double y = grid.y(j);
            const bool bx = grid.truncated_x() && (x - grid.x_min <= wx + 1e-12 || x_max - x <= wx + 1e-12);
            const bool by = grid.truncated_y() && (y - grid.y_min <= wy + 1e-12 || y_max - y <= wy + 1e-12);
            if (bx || by) mask[grid.index(i, j)] = 1;
        }
    return mask;
}

void require_same_grid(const Grid2D& a, const Grid2D& b) {
    if (!(a == b)) throw GridError("fields live on different grids");
}

}  // namespace riccilab
