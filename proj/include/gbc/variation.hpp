#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gbc/chart.hpp"
#include "gbc/double_form.hpp"
#include "gbc/quadrature.hpp"

namespace gbc {

/// @file First variations of the integrated Gauss-Bonnet curvatures
/// H_2k = integral of h_2k. A deformation bundles a base chart with a
/// symmetric direction h given in chart components; the finite-difference
/// derivative of H_2k along h is compared against the gradient pairing
/// (1/2) <T_2k, h>, and the pointwise curvature-variation and conformal
/// statements are verified the same way.

inline constexpr int kDefaultQuadOrder = 16;
inline constexpr double kDefaultFdStep = 1e-3;
inline constexpr double kRelErrFloor = 1e-4;

enum class DeformationKind { general, conformal, volume_normalized };

struct MetricDeformation {
    MetricChart base;
    // symmetric chart-component direction h_ab(x)
    std::function<Mat(const std::vector<double>&)> direction;
    DeformationKind kind = DeformationKind::general;
    // set when kind == conformal; then direction == factor * metric
    std::function<double(const std::vector<double>&)> conformal_factor;
};

MetricDeformation deform_metric_direction(MetricChart base,
                                          std::function<Mat(const std::vector<double>&)> h);
MetricDeformation deform_conformal(MetricChart base,
                                   std::function<double(const std::vector<double>&)> factor);
/// trig-polynomial entries, zero mean per entry
MetricDeformation deform_random_torus(const MetricChart& base, double amplitude,
                                      std::uint64_t seed);
/// pullback of a random constant ambient symmetric tensor, so the frame
/// norm of h stays bounded up to the excised poles
MetricDeformation deform_random_sphere(int n, double radius, double amplitude,
                                       std::uint64_t seed);
/// block-diagonal direction on the product of the two base charts
MetricDeformation deform_block(const MetricDeformation& a, const MetricDeformation& b);

/// chart carrying g + t h; analytic base jets are kept where available
/// and the h jets are filled by central differences
MetricChart deform(const MetricDeformation& def, double t);

/// h at x in the orthonormal frame of the base metric; throws
/// NumericalError when the direction is not symmetric there
DoubleForm deformation_frame(const MetricDeformation& def, const std::vector<double>& x);

/// H_2k over the atlas chart (quadrature sum of h_2k times the volume
/// density); pre 2k <= n
double integrate_invariant(const QuadratureAtlas& atlas, int k);

/// d/dt H_2k(g + t h) at t = 0: central differences at step and step/2
/// combined by Richardson extrapolation
double fd_functional_derivative(const MetricDeformation& def, int k,
                                int order = kDefaultQuadOrder, double step = kDefaultFdStep);

/// integral of (1/2) <T_2k, h> over the base
double gradient_pairing(const MetricDeformation& def, int k, int order = kDefaultQuadOrder);

struct VariationReport {
    int k = 0;
    double fd_value = 0.0;
    double pairing_value = 0.0;
    double abs_err = 0.0;
    // |fd - pairing| / max(|fd|, |pairing|, floor)
    double rel_err = 0.0;
    double fd_step = 0.0;
    int quadrature_order = 0;
};

VariationReport verify_main_theorem(const MetricDeformation& def, int k,
                                    int order = kDefaultQuadOrder,
                                    double step = kDefaultFdStep);

/// Derivative along h split against the pure volume direction: the
/// component of h proportional to g in the L2 sense contributes
/// (integral of tr h / (n vol)) times the derivative along g itself,
/// which is (1/2)(n - 2k) H_2k; `projected` is the derivative along the
/// volume-neutral remainder. Critical-point statements over the
/// unit-volume and fixed-conformal classes reduce to this split.
struct ProjectedDerivative {
    double raw = 0.0;
    double volume_component = 0.0;
    double projected = 0.0;
};
ProjectedDerivative volume_projected_derivative(const MetricDeformation& def, int k,
                                                int order = kDefaultQuadOrder,
                                                double step = kDefaultFdStep);

/// Pointwise curvature variation at x: max-norm of the difference between
/// the t-derivative of the coordinate curvature of g + t h (lowered with
/// g + t h, expressed in the base frame, symmetrized) and
/// -(1/4)(D Dt + Dt D)h + (1/4) F_h(R).
double verify_lemma1(const MetricDeformation& def, const std::vector<double>& x,
                     double step = kDefaultFdStep);

/// Conformal direction h = f g with 2k < n: the finite-difference
/// derivative against (1/2)(n - 2k) integral of f h_2k (the gradient
/// pairing after the trace identity).
VariationReport verify_conformal_variation(const QuadratureAtlas& atlas,
                                           const std::function<double(const std::vector<double>&)>& factor,
                                           int k, double step = kDefaultFdStep);

/// H_n across the round sphere and seeded perturbed spheres; only the
/// invariance (max pairwise relative deviation) is asserted by callers,
/// the proportionality to the Euler characteristic is reported as the
/// empirical sphere normalization.
struct GbInvarianceReport {
    int n = 0;
    double amplitude = 0.0;
    std::vector<double> values; // round sphere first, then the seeds
    double max_rel_deviation = 0.0;
    double sphere_normalization = 0.0; // values[0] / (4 pi), n = 2 only
};
GbInvarianceReport verify_gb_invariance(int n_even, double amplitude, std::uint64_t seed,
                                        int order = kDefaultQuadOrder);

/// generalized-Einstein survey of the catalog product examples
struct EinsteinExampleRow {
    std::string name;
    int k = 0;
    double lambda = 0.0;      // best proportionality factor in T_2k ~ lambda g
    double residual = 0.0;    // max |T_2k - lambda g| over sampled points
    double tensor_norm = 0.0; // max-norm of T_2k itself
};
struct EinsteinSuiteReport {
    std::vector<EinsteinExampleRow> rows;
};
EinsteinSuiteReport einstein_examples_suite();

} // namespace gbc
