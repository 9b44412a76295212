#pragma once

#include "gbc/double_form.hpp"

namespace gbc {

// Scalar 2k-th Gauss-Bonnet curvature of a curvature structure R:
// evaluated both as (1/(n-2k)!) * (g^(n-2k) R^k) and as
// (1/(2k)!) c^(2k) R^k; the two routes are cross-checked to 1e-10
// relative on every call (NumericalError on disagreement) and the first
// is returned. Requires 2 <= 2k <= n.
double gauss_bonnet_curvature(const CurvatureStructure& r, int k);

// The (1,1) Einstein-Lovelock tensor: *(1/(n-2k-1)!)(g^(n-2k-1) R^k) for
// 2k < n, identically zero for 2k = n. Cross-checked against
// h_2k g - (1/(2k-1)!) c^(2k-1) R^k on every call.
CurvatureStructure lovelock_tensor(const CurvatureStructure& r, int k);

// (p,q)-curvature tensor (1/(n-2q-p)!) * (g^(n-2q-p) R^q), a (p,p)
// curvature structure; requires p + 2q <= n.
CurvatureStructure pq_curvature_tensor(const CurvatureStructure& r, int p, int q);

// h_2k together with T_2k and the contracted power c^(2k-1)R^k/(2k-1)!
// that plays the role of the Ricci tensor at level k.
struct InvariantBundle {
    int n = 0;
    int k = 0;
    double h2k = 0.0;
    CurvatureStructure t2k;
    CurvatureStructure generalized_ricci;
};
InvariantBundle invariant_bundle(const CurvatureStructure& r, int k);

// How far T_2k is from a multiple of g, plus the trace-free (1,1)
// component of R^k that controls it. For 2k = n the component is not
// defined (T_n vanishes identically) and ricci_part_defined is false.
struct EinsteinDeviation {
    double lambda = 0.0;         // trace(T_2k)/n
    double residual = 0.0;       // max |T_2k - lambda g|
    double ricci_part_norm = 0.0;
    bool ricci_part_defined = false;
};
EinsteinDeviation einstein_deviation(const CurvatureStructure& r, int k);

} // namespace gbc
