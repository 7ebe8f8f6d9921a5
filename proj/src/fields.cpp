#include "riccilab/fields.hpp"

#include <cmath>

#include "riccilab/errors.hpp"

namespace riccilab {

ScalarField::ScalarField(const Grid2D& g, std::vector<double> values, ScalarRole r)
    : grid(g), v(std::move(values)), role(r) {
    if (v.size() != g.size()) throw GridError("scalar field size does not match grid");
}

OneFormField::OneFormField(const Grid2D& g, std::vector<double> cx, std::vector<double> cy)
    : grid(g), x(std::move(cx)), y(std::move(cy)) {
    if (x.size() != g.size() || y.size() != g.size())
        throw GridError("1-form component size does not match grid");
}

void MetricField::validate() const {
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            const double d = det(n);
            if (!(xx[n] > 0.0) || !(d > kDegenerateDet) || !std::isfinite(d))
                throw DegenerateMetric(i, j, d);
        }
}

MetricField flat_metric(const Grid2D& grid) {
    return general_metric(grid, std::vector<double>(grid.size(), 1.0), std::vector<double>(grid.size(), 0.0),
                          std::vector<double>(grid.size(), 1.0));
}

MetricField general_metric(const Grid2D& grid, std::vector<double> xx, std::vector<double> xy,
                           std::vector<double> yy) {
    if (xx.size() != grid.size() || xy.size() != grid.size() || yy.size() != grid.size())
        throw GridError("metric component size does not match grid");
    MetricField g;
    g.grid = grid;
    g.xx = std::move(xx);
    g.xy = std::move(xy);
    g.yy = std::move(yy);
    g.tag = MetricTag::general;
    g.validate();
    return g;
}

MetricField conformal_metric(const Grid2D& grid, std::vector<double> u) {
    if (u.size() != grid.size()) throw GridError("conformal potential size does not match grid");
    MetricField g;
    g.grid = grid;
    g.tag = MetricTag::conformal;
    g.xx.resize(grid.size());
    g.xy.assign(grid.size(), 0.0);
    g.yy.resize(grid.size());
    for (std::size_t n = 0; n < u.size(); ++n) {
        const double e = std::exp(2.0 * u[n]);
        g.xx[n] = e;
        g.yy[n] = e;
    }
    g.u = std::move(u);
    g.validate();
    return g;
}

MetricField warped_metric(const Grid2D& grid, std::vector<double> h, std::vector<double> f) {
    if (h.size() != static_cast<std::size_t>(grid.nx) || f.size() != static_cast<std::size_t>(grid.nx))
        throw GridError("warped profiles need one value per x index");
    MetricField g;
    g.grid = grid;
    g.tag = MetricTag::warped;
    g.xx.resize(grid.size());
    g.xy.assign(grid.size(), 0.0);
    g.yy.resize(grid.size());
    for (int i = 0; i < grid.nx; ++i) {
        if (!(h[i] > 0.0) || !(f[i] > 0.0)) throw DegenerateMetric(i, 0, h[i] * h[i] * f[i] * f[i]);
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            g.xx[n] = h[i] * h[i];
            g.yy[n] = f[i] * f[i];
        }
    }
    g.h = std::move(h);
    g.f = std::move(f);
    g.validate();
    return g;
}

MetricField as_general(const MetricField& g) {
    MetricField out = g;
    out.tag = MetricTag::general;
    out.u.clear();
    out.h.clear();
    out.f.clear();
    return out;
}

}  // namespace riccilab
