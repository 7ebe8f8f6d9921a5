#pragma once

#include <functional>
#include <string>
#include <vector>

#include "riccilab/fields.hpp"

// Reference values computed without the finite-difference stencils: closed
// forms, modewise exact heat solutions and refined quadrature.
namespace riccilab {

struct OracleResult {
    std::string label;
    std::vector<double> values;
    std::string method;
    double error_bound = 0.0;  // always > 0
};

/// a * cos(kx x + ky y) or a * sin(kx x + ky y).
struct TrigMode {
    double amplitude = 1.0;
    int kx = 0;
    int ky = 0;
    bool sine = true;
};

struct TrigSeries {
    double constant = 0.0;
    std::vector<TrigMode> modes;
};

struct FormSeries {
    TrigSeries x;
    TrigSeries y;
};

/// Exact heat solution on the static flat torus [0, 2pi)^2: each mode decays by
/// e^{-|k|^2 t}. Throws OracleInapplicable unless g is the flat torus metric.
OracleResult flat_spectral_oracle(const TrigSeries& u0, const MetricField& g, double t);
/// Components are stored x block then theta block.
OracleResult flat_spectral_oracle(const FormSeries& phi0, const MetricField& g, double t);

/// Cigar soliton e^{2u} = 1/(e^{4t} + r^2) with R = 4 e^{4t}/(e^{4t} + r^2); sup R = 4 for all t.
double cigar_potential(double r, double t = 0.0);
double cigar_curvature(double r, double t = 0.0);

struct CigarOracle {
    MetricField metric;  // conformal, sampled on the grid
    OracleResult curvature;
    double sup_curvature = 4.0;
    bool steady = true;
};

/// Cigar on a truncated plane grid. `support_radius` limits where the data
/// must have decayed (defaults to the inscribed disk); throws DomainTooSmall if
/// R exceeds `support_level` there.
CigarOracle cigar_oracle(const Grid2D& grid, double support_level = 1e-3, double support_radius = -1.0);

/// Warped neck f = a - b e^{-x^2}, h = 1: K = -f''/f, R = 2K.
double neck_profile(double x, double a, double b);
double neck_curvature(double x, double a, double b);

/// Integral of `f` over [x0, x0+lx] x [y0, y0+ly] by the trapezoid rule at n,
/// 2n and 4n nodes per axis with Richardson extrapolation. Periodic axes use
/// the periodic rule. Throws UnreliableOracle if the refinement does not converge.
struct QuadratureDomain {
    double x0 = 0.0;
    double lx = 0.0;
    double y0 = 0.0;
    double ly = 0.0;
    bool periodic_x = true;
    bool periodic_y = true;
};

OracleResult quadrature_oracle(const std::function<double(double, double)>& f, const QuadratureDomain& dom, int n);

}  // namespace riccilab
