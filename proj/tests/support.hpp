#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "riccilab/fields.hpp"

namespace test {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

inline std::vector<double> sample(const riccilab::Grid2D& g, const std::function<double(double, double)>& f) {
    std::vector<double> v(g.size());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) v[g.index(i, j)] = f(g.x(i), g.y(j));
    return v;
}

// Random trigonometric polynomial of low degree; smooth and periodic on [0, 2pi)^2.
struct RandomTrig {
    std::vector<double> a, kx, ky, phase;
    RandomTrig(std::mt19937_64& rng, int terms = 4) {
        std::uniform_real_distribution<double> amp(-1.0, 1.0), ph(0.0, 6.283185307179586);
        std::uniform_int_distribution<int> k(0, 3);
        for (int t = 0; t < terms; ++t) {
            a.push_back(amp(rng));
            kx.push_back(k(rng));
            ky.push_back(k(rng));
            phase.push_back(ph(rng));
        }
    }
    double operator()(double x, double y) const {
        double s = 0.0;
        for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * std::sin(kx[t] * x + ky[t] * y + phase[t]);
        return s;
    }
};

}  // namespace test
