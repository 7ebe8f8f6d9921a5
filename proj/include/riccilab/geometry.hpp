#pragma once

#include <array>
#include <vector>

#include "riccilab/exec.hpp"
#include "riccilab/fields.hpp"

namespace riccilab {

struct MetricInverse {
    Grid2D grid;
    std::vector<double> xx;
    std::vector<double> xy;
    std::vector<double> yy;
    std::vector<double> sqrt_det;
};

/// Inverse metric and volume density; throws DegenerateMetric.
MetricInverse invert(const MetricField& g, Exec exec = Exec::parallel);

/**
 * Christoffel symbols, Ricci tensor, scalar curvature and the Ricci endomorphism
 * R^j_i = g^{jk} R_{ki}, all from the general coordinate formulas.
 *
 * For conformal and warped metrics `reduced_scalar` holds the closed-form
 * curvature (compact stencil on the potentials) and `reduced_residual` the sup
 * distance to the general-stencil value away from truncated-boundary buffers.
 */
struct CurvatureData {
    Grid2D grid;
    // Gamma^k_ij at slot(k, i, j); symmetric in (i, j) by construction.
    std::array<std::vector<double>, 6> gamma;
    bool has_ricci = false;
    std::vector<double> ric_xx;
    std::vector<double> ric_xy;
    std::vector<double> ric_yy;
    std::vector<double> scalar;
    // R^j_i at endo[2 * i + j].
    std::array<std::vector<double>, 4> endo;
    std::vector<double> reduced_scalar;
    double reduced_residual = 0.0;

    static constexpr int slot(int k, int i, int j) { return 3 * k + i + j; }

    /// Curvature consistent with the tag-preserving flow: reduced if available.
    const std::vector<double>& flow_scalar() const { return reduced_scalar.empty() ? scalar : reduced_scalar; }
};

CurvatureData christoffel(const MetricField& g, Exec exec = Exec::parallel);
CurvatureData curvature(const MetricField& g, Exec exec = Exec::parallel);

/// Closed-form scalar curvature of a conformal (-2 e^{-2u} lap u) or warped
/// (-2 (hf)^{-1} (f'/h)') metric. Empty for general metrics.
std::vector<double> reduced_scalar_curvature(const MetricField& g, Exec exec = Exec::parallel);

/// Per-node sup of |R_ij - (R/2) g_ij| over the three components.
std::vector<double> einstein_residual(const CurvatureData& c, const MetricField& g);

/// Nodes away from the 15% buffers of truncated axes (everything on periodic axes).
std::vector<std::uint8_t> interior_mask(const Grid2D& grid);

enum class GeometryLevel { inverse, christoffel, curvature };

/// Derived quantities of one metric shared by the operators below.
struct Geometry {
    MetricField metric;
    MetricInverse inverse;
    CurvatureData curvature;
    GeometryLevel level = GeometryLevel::inverse;

    static Geometry build(const MetricField& g, GeometryLevel level, Exec exec = Exec::parallel);
    const Grid2D& grid() const { return metric.grid; }
};

/// dF = (dF/dx, dF/dtheta).
OneFormField exterior_derivative(const ScalarField& f, Exec exec = Exec::parallel);
/// d(phi) as the coordinate density d_x phi_theta - d_theta phi_x of the 2-form.
ScalarField exterior_derivative(const OneFormField& phi, Exec exec = Exec::parallel);

/// delta(phi) = -(1/sqrt g) d_i(sqrt g g^{ij} phi_j).
ScalarField codifferential(const OneFormField& phi, const Geometry& geo, Exec exec = Exec::parallel);
ScalarField codifferential(const OneFormField& phi, const MetricField& g, Exec exec = Exec::parallel);

/// Metric adjoint of d on 2-forms, applied to a coordinate density.
OneFormField codifferential_2form(const ScalarField& density, const Geometry& geo, Exec exec = Exec::parallel);

/// Trace of the second covariant derivative (nonpositive spectrum). Needs Christoffels.
OneFormField rough_laplacian(const OneFormField& phi, const Geometry& geo, Exec exec = Exec::parallel);
OneFormField rough_laplacian(const OneFormField& phi, const MetricField& g, Exec exec = Exec::parallel);

enum class HodgeMethod { via_d_delta, via_bochner };

/// Delta_d = -(d delta + delta d); via_bochner evaluates rough_laplacian - Ric(phi).
OneFormField hodge_laplacian(const OneFormField& phi, const Geometry& geo, HodgeMethod method,
                             Exec exec = Exec::parallel);
OneFormField hodge_laplacian(const OneFormField& phi, const MetricField& g, HodgeMethod method,
                             Exec exec = Exec::parallel);

enum class ScalarStencil {
    cochain,  // -delta(dF), wide stencil, exact partner of the 1-form operators
    compact   // flux form with half-node coefficients
};

ScalarField scalar_laplacian(const ScalarField& f, const Geometry& geo, ScalarStencil stencil,
                             Exec exec = Exec::parallel);

/// sqrt(det g) per node; multiply by the grid weights for the integration measure.
ScalarField volume_element(const MetricField& g);

/// |phi|_g^2 per node.
std::vector<double> pointwise_norm_sq(const OneFormField& phi, const MetricInverse& inv,
                                      Exec exec = Exec::parallel);

/// |nabla phi|_g^2 per node; needs Christoffels.
std::vector<double> gradient_norm_sq(const OneFormField& phi, const Geometry& geo, Exec exec = Exec::parallel);

/// d_g(x, o) per node by 1-D arclength from the base point: along x on
/// cylinders and tori, along the x-axis ray then by coordinate radius on planes.
/// Nodes outside the profiled range get +infinity.
std::vector<double> axial_distance(const MetricField& g);

}  // namespace riccilab
