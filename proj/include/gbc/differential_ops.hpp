#pragma once

#include <functional>
#include <vector>

#include "gbc/chart.hpp"
#include "gbc/double_form.hpp"

namespace gbc {

/// @file Covariant calculus over a chart: Christoffel symbols, the Riemann
/// curvature, covariant derivatives of double-form fields, the two second
/// Bianchi sums D and D-tilde, their second-order compositions, and the
/// divergences delta and delta-tilde, each with an independent
/// star-conjugated route for cross-checking.

/// Levi-Civita connection coefficients: gamma[l](a, b) = Gamma^l_ab.
std::vector<Mat> christoffel(const MetricChart& chart, const std::vector<double>& x);

/// Connection coefficients together with their coordinate derivatives,
/// dgamma[c][l](a, b) = d_c Gamma^l_ab.
struct ChristoffelJet {
    std::vector<Mat> gamma;
    std::vector<std::vector<Mat>> dgamma;
};
ChristoffelJet christoffel_jet(const MetricChart& chart, const std::vector<double>& x);

/// Riemann curvature as a symmetric (2,2) double form in the orthonormal
/// frame at x; the sign convention makes the round sphere of radius r
/// equal to (1/(2r^2)) g^2. Throws NumericalError when block symmetry or
/// the first Bianchi identity fail beyond tol (scaled by the magnitude).
CurvatureStructure riemann(const MetricChart& chart, const std::vector<double>& x,
                           double tol = 1e-6);

/// Raw curvature in coordinate components, lowered with the chart's own
/// metric, before the frame transform, symmetrization and identity
/// checks. Differentiating this through a metric family keeps the
/// comparison frame fixed.
DoubleForm riemann_coordinate(const MetricChart& chart, const std::vector<double>& x);

/// Smooth field of (p,q) double forms over a chart. The evaluator returns
/// components in the orthonormal frame of the evaluation point (the
/// Cholesky frame of the coordinate basis, in index order).
struct FormField {
    int n = 0, p = 0, q = 0;
    std::function<DoubleForm(const std::vector<double>&)> frame_value;
};

/// the metric as a field (identity (1,1) form in every frame)
FormField metric_field(int n);
/// the Riemann curvature of the chart as a (2,2) field
FormField riemann_field(const MetricChart& chart);
/// 2k-th Gauss-Bonnet curvature of the chart as a scalar (0,0) field
FormField gauss_bonnet_field(const MetricChart& chart, int k);
/// 2k-th Einstein-Lovelock tensor of the chart as a (1,1) field
FormField lovelock_field(const MetricChart& chart, int k);
/// pointwise image of a field; fn must map to the declared bidegree
FormField map_field(const FormField& src, int p, int q,
                    std::function<DoubleForm(const DoubleForm&)> fn);

/// Cached coordinate-component derivatives of a field at a base point,
/// from 4th-order central differences of the frame evaluator pulled back
/// through the per-point frames. Stencil points may leave the coordinate
/// box by a few steps; every catalog evaluator extends smoothly.
struct JetStencil {
    std::vector<double> x;
    DoubleForm value;                        // coordinate components at x
    std::vector<DoubleForm> d1;              // [a] = d_a
    std::vector<std::vector<DoubleForm>> d2; // [a][b] = d_a d_b (on request)
};
JetStencil make_jet_stencil(const FormField& f, const MetricChart& chart,
                            const std::vector<double>& x, bool second_order);

/// Covariant derivative at x: out[a] = nabla_{e_a} f along the a-th frame
/// vector, in frame components.
std::vector<DoubleForm> covariant_derivative(const FormField& f, const MetricChart& chart,
                                             const std::vector<double>& x);

/// Second Bianchi sum over the first block,
///   (D w)(x_1..x_{p+1}, Y) = sum_j (-1)^j (nabla_{x_j} w)(.. x_j omitted .., Y),
/// and its mirror over the second block. On (p,0) fields D coincides
/// with -d. Frame components at x.
DoubleForm bianchi_D(const FormField& f, const MetricChart& chart,
                     const std::vector<double>& x);
DoubleForm bianchi_Dtilde(const FormField& f, const MetricChart& chart,
                          const std::vector<double>& x);

/// Second-order compositions, assembled from one analytic second
/// covariant derivative per direction pair (no nested differencing):
///   (D Dt w)(X, Y) = sum_{i,j} (-1)^{i+j} (nabla^2_{x_i y_j} w)(.., ..),
/// dtilde_d with the derivative order reversed. hessian_operator is
/// their sum, the operator appearing in the curvature linearization.
DoubleForm dd_tilde(const FormField& f, const MetricChart& chart, const std::vector<double>& x);
DoubleForm dtilde_d(const FormField& f, const MetricChart& chart, const std::vector<double>& x);
DoubleForm hessian_operator(const FormField& f, const MetricChart& chart,
                            const std::vector<double>& x);

/// Divergences, normalized so that (-1)^(n+p) delta_op is the formal L2
/// adjoint of the first Bianchi sum D (and (-1)^(n+q) delta_tilde_op the
/// adjoint of D-tilde). delta_op needs p >= 1, delta_tilde_op q >= 1.
/// Each is assembled two independent ways, as a signed contraction
/// composition (c Dt + Dt c, respectively c D + D c) and by star
/// conjugation, and throws NumericalError when the two routes disagree
/// beyond tol scaled by the magnitude.
DoubleForm delta_op(const FormField& f, const MetricChart& chart, const std::vector<double>& x,
                    double tol = 1e-6);
DoubleForm delta_tilde_op(const FormField& f, const MetricChart& chart,
                          const std::vector<double>& x, double tol = 1e-6);

/// Star-conjugated divergences alone: (-1)^((p+q)(n-p-q)) * D (*w) and
/// the D-tilde mirror.
DoubleForm delta_via_star(const FormField& f, const MetricChart& chart,
                          const std::vector<double>& x);
DoubleForm delta_tilde_via_star(const FormField& f, const MetricChart& chart,
                                const std::vector<double>& x);

/// both divergences of a symmetric field (p >= 1 and q >= 1)
struct DeltaPair {
    DoubleForm delta, delta_tilde;
};
DeltaPair delta_ops(const FormField& f, const MetricChart& chart, const std::vector<double>& x,
                    double tol = 1e-6);

/// delta delta_tilde + delta_tilde delta through its star conjugation
/// with the second-order composition, avoiding nested differencing.
DoubleForm laplace_divergence(const FormField& f, const MetricChart& chart,
                              const std::vector<double>& x);

} // namespace gbc
