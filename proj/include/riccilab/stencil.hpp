#pragma once

#include <span>
#include <vector>

#include "riccilab/exec.hpp"
#include "riccilab/grid.hpp"

namespace riccilab {

// First derivatives: centred second-order differences, one-sided second-order
// at the end nodes of a truncated axis. The x and theta operators act on
// different indices, so they commute exactly and d(dF) = 0 holds at the stencil level.
void diff_x(const Grid2D& grid, std::span<const double> f, std::span<double> out,
            Exec exec = Exec::parallel);
void diff_y(const Grid2D& grid, std::span<const double> f, std::span<double> out,
            Exec exec = Exec::parallel);

std::vector<double> diff_x(const Grid2D& grid, std::span<const double> f, Exec exec = Exec::parallel);
std::vector<double> diff_y(const Grid2D& grid, std::span<const double> f, Exec exec = Exec::parallel);

/// Compact conservative second difference d/dx (a df/dx), a at half nodes by averaging.
void flux_xx(const Grid2D& grid, std::span<const double> a, std::span<const double> f,
             std::span<double> out, Exec exec = Exec::parallel);
void flux_yy(const Grid2D& grid, std::span<const double> a, std::span<const double> f,
             std::span<double> out, Exec exec = Exec::parallel);

/// flux_xx + flux_yy with a = 1: the flat five-point Laplacian.
void laplacian_flat(const Grid2D& grid, std::span<const double> f, std::span<double> out,
                    Exec exec = Exec::parallel);

/// 1-D compact d/dx (a df/dx) on n points; the 1-D analogue of flux_xx.
void flux_1d(int n, double h, Topology topology, std::span<const double> a,
             std::span<const double> f, std::span<double> out);

}  // namespace riccilab
