#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gbc/chart.hpp"

namespace gbc {

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for polynomials of
/// degree 2*order - 1.
struct GaussRule {
    std::vector<double> nodes, weights;
};
GaussRule gauss_legendre(int order);

/// Tensor-product quadrature grid over a chart's coordinate box:
/// Gauss-Legendre of the given order on each axis, except that periodic
/// axes use the uniform midpoint rule of the same node count (exact for
/// trigonometric polynomials of frequency below the order, which
/// Gauss-Legendre is not). Nodes are stored flat, node-major
/// (count x dim); weights carry the per-axis box scaling but not the
/// metric volume density, so integrands must multiply by sqrt(det g)
/// themselves when integrating over the manifold. Node count grows as
/// order^dim. excluded_measure copies the chart's omitted volume
/// fraction for error budgeting.
struct QuadratureAtlas {
    MetricChart chart;
    int order = 0;
    std::size_t count = 0;
    double excluded_measure = 0.0;
    std::vector<double> coords;
    std::vector<double> weights;
};
QuadratureAtlas make_atlas(const MetricChart& chart, int order);

/// Thread budget for parallel kernels: the OpenMP default, optionally
/// capped by the GBC_THREADS environment variable.
int thread_cap();

/// sum_i w_i f(x_i). The parallel version evaluates nodes concurrently
/// into a per-node buffer and accumulates in index order, so its result
/// is bitwise identical to the serial reference.
double quad_sum(const QuadratureAtlas& atlas,
                const std::function<double(const std::vector<double>&)>& f);
double quad_sum_serial(const QuadratureAtlas& atlas,
                       const std::function<double(const std::vector<double>&)>& f);

/// integral of sqrt(det g) over the box: the chart's Riemannian volume
double chart_volume(const QuadratureAtlas& atlas);

} // namespace gbc
