#pragma once

#include <span>
#include <vector>

#include "riccilab/grid.hpp"

namespace riccilab {

enum class ScalarRole { generic, gauge, subsolution, conformal_factor };

struct ScalarField {
    Grid2D grid;
    std::vector<double> v;
    ScalarRole role = ScalarRole::generic;

    ScalarField() = default;
    explicit ScalarField(const Grid2D& g, double value = 0.0, ScalarRole r = ScalarRole::generic)
        : grid(g), v(g.size(), value), role(r) {}
    ScalarField(const Grid2D& g, std::vector<double> values, ScalarRole r = ScalarRole::generic);

    double operator()(int i, int j) const { return v[grid.index(i, j)]; }
    double& operator()(int i, int j) { return v[grid.index(i, j)]; }
};

/// Covariant components (phi_x, phi_theta) of a 1-form.
struct OneFormField {
    Grid2D grid;
    std::vector<double> x;
    std::vector<double> y;

    OneFormField() = default;
    explicit OneFormField(const Grid2D& g) : grid(g), x(g.size(), 0.0), y(g.size(), 0.0) {}
    OneFormField(const Grid2D& g, std::vector<double> cx, std::vector<double> cy);
};

enum class MetricTag { general, conformal, warped };

/**
 * Symmetric metric g_xx dx^2 + 2 g_xy dx dtheta + g_yy dtheta^2 per node.
 *
 * Conformal metrics also carry the potential u (g = e^{2u} delta, per node);
 * warped metrics carry h(x) and f(x) (g = h^2 dx^2 + f^2 dtheta^2, per x index).
 * The reduced potentials drive the tag-preserving flow paths.
 */
struct MetricField {
    Grid2D grid;
    std::vector<double> xx;
    std::vector<double> xy;
    std::vector<double> yy;
    MetricTag tag = MetricTag::general;
    std::vector<double> u;
    std::vector<double> h;
    std::vector<double> f;

    double det(std::size_t n) const { return xx[n] * yy[n] - xy[n] * xy[n]; }

    /// Throws DegenerateMetric at the first node with g_xx <= 0 or det g <= 1e-12.
    void validate() const;
};

inline constexpr double kDegenerateDet = 1e-12;

MetricField flat_metric(const Grid2D& grid);
MetricField general_metric(const Grid2D& grid, std::vector<double> xx, std::vector<double> xy,
                           std::vector<double> yy);
MetricField conformal_metric(const Grid2D& grid, std::vector<double> u);
MetricField warped_metric(const Grid2D& grid, std::vector<double> h, std::vector<double> f);

/// Copy with the reduced potentials dropped; forces every computation down the general path.
MetricField as_general(const MetricField& g);

}  // namespace riccilab
