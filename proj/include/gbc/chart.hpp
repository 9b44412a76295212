#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gbc/linalg.hpp"
#include "gbc/trig.hpp"

namespace gbc {

// Steps for the 4th-order central-difference fallbacks. First derivatives
// follow the cbrt(eps)*(1+|x|) rule; second-derivative stencils divide by
// step^2, which amplifies rounding noise to ~eps/step^2, so they use the
// larger eps^(1/6)*(1+|x|) step (error ~1e-9 instead of ~1e-4).
double fd_step_first(double coordinate);
double fd_step_second(double coordinate);

// Single-chart description of a Riemannian manifold: a smooth SPD metric
// over a rectangular coordinate box, with optional analytic first and
// second derivative callbacks (FD fallbacks otherwise). All evaluators
// must be pure; every operation built on a chart is reentrant.
struct MetricChart {
    int dim = 0;
    std::string name;
    std::vector<double> lo, hi;      // quadrature box in chart coordinates
    std::vector<std::uint8_t> periodic; // per-axis; empty means none
    double sample_margin = 0.05;     // box-width fraction avoided by random points
    double excluded_fraction = 0.0;  // manifold volume fraction the box omits
    std::function<Mat(const std::vector<double>&)> metric;
    std::function<std::vector<Mat>(const std::vector<double>&)> d_metric;
    std::function<std::vector<std::vector<Mat>>(const std::vector<double>&)> dd_metric;

    Mat metric_at(const std::vector<double>& x) const;
    // [a](i,j) = d_a g_ij
    std::vector<Mat> d_metric_at(const std::vector<double>& x) const;
    // [a][b](i,j) = d_a d_b g_ij
    std::vector<std::vector<Mat>> dd_metric_at(const std::vector<double>& x) const;
};

// Orthonormal frame from the Cholesky factorization g = L L^T: the frame
// vectors are the columns of basis = L^{-T} (the Gram-Schmidt frame of
// the coordinate basis in index order), inverse = L^T maps frame
// components back to coordinate components, and sqrt_det = prod diag(L)
// is the volume density.
struct PointFrame {
    Mat g, basis, inverse;
    double sqrt_det = 0.0;
};
PointFrame point_frame(const Mat& g);

// Uniform draw from the box shrunk by sample_margin on every axis.
std::vector<double> random_point(const MetricChart& chart, std::mt19937_64& rng);

// Ambient coordinate functions z_i, i = 0..n, of the radius-r sphere in
// hyperspherical angles, and their first derivatives. Smooth across the
// poles; used to build deformations that respect the chart degeneracies.
double sphere_coordinate(int i, double r, const std::vector<double>& angles);
double sphere_coordinate_d1(int i, double r, const std::vector<double>& angles, int a);

// --- chart catalog ---------------------------------------------------------

// g = identity on [0, period_a]^n (default periods 2pi)
MetricChart flat_torus(int n, std::vector<double> periods = {});

// round sphere of radius r in hyperspherical angles; polar axes excised
// at 1e-3 from the poles (the omitted bands are tracked in
// excluded_fraction)
MetricChart sphere(int n, double r);

// block-diagonal product metric on the concatenated coordinate box
MetricChart product_chart(const MetricChart& a, const MetricChart& b);
inline MetricChart product(const MetricChart& a, const MetricChart& b) {
    return product_chart(a, b);
}

// g = exp(2u) * identity on the 2pi-torus; analytic derivatives from u
MetricChart conformal_flat(int n, const TrigScalar& u);

// round sphere plus amplitude * (pullback of a seeded random constant
// ambient 2-tensor modulated by an ambient coordinate). The pullback
// scales like the metric near the poles, so the result stays SPD for
// amplitude <= 0.5.
MetricChart perturbed_sphere(int n, double r, double amplitude, std::uint64_t seed);

} // namespace gbc
