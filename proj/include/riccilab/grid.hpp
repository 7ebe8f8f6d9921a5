#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace riccilab {

enum class Topology { periodic, truncated };

/**
 * Uniform node-centred 2-D grid. The first axis is the axial coordinate x,
 * the second the angular coordinate theta (called y in code).
 *
 * Storage order is row-major x-then-theta: node (i, j) lives at i * ny + j.
 * Periodic axes have spacing L/n, truncated axes L/(n-1) with nodes on both
 * end points.
 */
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double x_min = 0.0;
    double lx = 0.0;
    double y_min = 0.0;
    double ly = 0.0;
    Topology x_topology = Topology::periodic;
    Topology y_topology = Topology::periodic;
    // Base point o for distances d_g(x, o).
    int origin_i = 0;
    int origin_j = 0;

    double hx() const { return x_topology == Topology::periodic ? lx / nx : lx / (nx - 1); }
    double hy() const { return y_topology == Topology::periodic ? ly / ny : ly / (ny - 1); }
    double x(int i) const { return x_min + i * hx(); }
    double y(int j) const { return y_min + j * hy(); }

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }

    // Trapezoid weights; equal to the spacing on periodic axes.
    double weight_x(int i) const;
    double weight_y(int j) const;

    bool truncated_x() const { return x_topology == Topology::truncated; }
    bool truncated_y() const { return y_topology == Topology::truncated; }

    std::uint64_t hash() const;

    bool operator==(const Grid2D&) const = default;
};

/// Validates the node counts and extents; throws GridError.
Grid2D make_grid(int nx, int ny, double x_min, double lx, double y_min, double ly,
                 Topology x_topology, Topology y_topology);

/// Flat torus [0, 2pi)^2.
Grid2D torus_grid(int nx, int ny);

/// Cylinder [x_min, x_max] x S^1, truncated in x, periodic in theta.
Grid2D cylinder_grid(int nx, int ny, double x_min, double x_max);

/// Square [-half, half]^2 truncated in both axes, origin at the centre node.
Grid2D plane_grid(int nx, int ny, double half_width);

/// Nodes lying on a truncated boundary (first/last row or column of a truncated axis).
std::vector<std::uint8_t> boundary_mask(const Grid2D& grid);

/// Nodes within `fraction` of the axis length from each truncated end.
std::vector<std::uint8_t> buffer_mask(const Grid2D& grid, double fraction);

void require_same_grid(const Grid2D& a, const Grid2D& b);

}  // namespace riccilab
