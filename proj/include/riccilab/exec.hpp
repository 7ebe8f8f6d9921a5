#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "riccilab/grid.hpp"

namespace riccilab {

/// Loop driver for node kernels. `serial` is the reference path kept for testing;
/// both produce bit-identical results because reductions are row-blocked.
enum class Exec { serial, parallel };

/// Keeps grid-sized temporaries on the heap instead of fresh mmap regions, which
/// otherwise page-fault on every stage. Call once from main; glibc only.
void configure_allocator();

template <class Body>
void for_each_row(Exec exec, int rows, Body&& body) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < rows; ++i) body(i);
    } else {
        for (int i = 0; i < rows; ++i) body(i);
    }
}

template <class Body>
void for_each_node(Exec exec, const Grid2D& grid, Body&& body) {
    const int ny = grid.ny;
    for_each_row(exec, grid.nx, [&](int i) {
        for (int j = 0; j < ny; ++j) body(i, j, grid.index(i, j));
    });
}

/// Fixed-order sum: each row summed left to right, then rows summed in order.
template <class Value>
double sum_nodes(Exec exec, const Grid2D& grid, Value&& value) {
    std::vector<double> rows(static_cast<std::size_t>(grid.nx), 0.0);
    const int ny = grid.ny;
    for_each_row(exec, grid.nx, [&](int i) {
        double s = 0.0;
        for (int j = 0; j < ny; ++j) s += value(i, j, grid.index(i, j));
        rows[static_cast<std::size_t>(i)] = s;
    });
    double total = 0.0;
    for (double r : rows) total += r;
    return total;
}

struct NodeExtremum {
    double value = 0.0;
    std::size_t index = 0;
};

/// Maximum with ties resolved to the first node in row-major order.
template <class Value>
NodeExtremum max_nodes(Exec exec, const Grid2D& grid, Value&& value) {
    std::vector<NodeExtremum> rows(static_cast<std::size_t>(grid.nx));
    const int ny = grid.ny;
    for_each_row(exec, grid.nx, [&](int i) {
        NodeExtremum best{-std::numeric_limits<double>::infinity(), grid.index(i, 0)};
        for (int j = 0; j < ny; ++j) {
            const std::size_t n = grid.index(i, j);
            const double v = value(i, j, n);
            if (v > best.value) best = {v, n};
        }
        rows[static_cast<std::size_t>(i)] = best;
    });
    NodeExtremum best = rows.front();
    for (const auto& r : rows)
        if (r.value > best.value) best = r;
    return best;
}

template <class Value>
NodeExtremum min_nodes(Exec exec, const Grid2D& grid, Value&& value) {
    auto m = max_nodes(exec, grid, [&](int i, int j, std::size_t n) { return -value(i, j, n); });
    m.value = -m.value;
    return m;
}

}  // namespace riccilab
