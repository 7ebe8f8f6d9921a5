#pragma once

#include <vector>

#include "riccilab/geometry.hpp"

// Straight-line serial versions of the geometry kernels: one node at a time,
// full index loops, no shared temporaries. Slow; used to check the optimized
// kernels and as the baseline in benchmarks.
namespace riccilab::reference {

/// Same first-difference stencil as diff_x/diff_y, evaluated at a single node.
double derivative(const Grid2D& grid, const std::vector<double>& f, int axis, int i, int j);

/// Christoffels, Ricci tensor, scalar curvature and endomorphism (no reduced data).
CurvatureData curvature(const MetricField& g);

ScalarField codifferential(const OneFormField& phi, const MetricField& g);
OneFormField rough_laplacian(const OneFormField& phi, const MetricField& g);
OneFormField hodge_laplacian(const OneFormField& phi, const MetricField& g, HodgeMethod method);

}  // namespace riccilab::reference
