#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbc/combinatorics.hpp"
#include "gbc/linalg.hpp"

namespace gbc {

// Element of Lambda^p x Lambda^q over an n-dimensional inner-product
// space, stored densely as coefficients on pairs of increasing
// multi-indices in an orthonormal frame. All algebra below is exact in
// that frame; geometry layers convert to and from coordinate bases via
// transform().
class DoubleForm {
public:
    DoubleForm() = default;
    DoubleForm(int n, int p, int q);

    int n() const { return n_; }
    int p() const { return p_; }
    int q() const { return q_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int rp, int rq) { return c_[static_cast<std::size_t>(rp) * cols_ + rq]; }
    double at(int rp, int rq) const { return c_[static_cast<std::size_t>(rp) * cols_ + rq]; }

    // lookup / store by increasing-multi-index bitmasks
    double coeff(std::uint32_t mi, std::uint32_t mj) const;
    void set_coeff(std::uint32_t mi, std::uint32_t mj, double v);

    const std::vector<double>& data() const { return c_; }
    std::vector<double>& data() { return c_; }

    DoubleForm& operator+=(const DoubleForm& o);
    DoubleForm& operator-=(const DoubleForm& o);
    DoubleForm& operator*=(double s);

    double max_abs() const;
    double norm() const; // sqrt of the frame coefficient sum of squares
    bool same_shape(const DoubleForm& o) const;
    bool is_symmetric(double tol) const; // p == q and block swap invariance
    DoubleForm block_transpose() const;  // swap the two blocks
    DoubleForm symmetrized() const;      // (w + w^T)/2, p == q only

    static DoubleForm unit(int n);   // the (0,0) form with value 1
    static DoubleForm metric(int n); // identity (1,1) form

private:
    int n_ = 0, p_ = 0, q_ = 0, rows_ = 0, cols_ = 0;
    std::vector<double> c_;
};

DoubleForm operator+(DoubleForm a, const DoubleForm& b);
DoubleForm operator-(DoubleForm a, const DoubleForm& b);
DoubleForm operator*(DoubleForm a, double s);
DoubleForm operator*(double s, DoubleForm a);

// Exterior product of double forms as a shuffle sum (no factorial
// denominators): with this normalization metric(n)^2 evaluates to 2 on
// (e1^e2, e1^e2) and a constant-curvature structure is kappa/2 * g^2.
// Degree overflow beyond n yields the zero form with degrees clamped to n.
DoubleForm wedge(const DoubleForm& a, const DoubleForm& b);

// k-th wedge power; k = 0 gives the unit (0,0) form.
DoubleForm wedge_power(const DoubleForm& a, int k);

// Contraction (c w)(x..., y...) = sum_m w(e_m^x..., e_m^y...);
// requires p >= 1 and q >= 1.
DoubleForm contract(const DoubleForm& a);
DoubleForm contract_power(const DoubleForm& a, int m);

// Multiplication by the metric, g.w.
DoubleForm metric_mul(const DoubleForm& a);

// Generalized Hodge star, applied blockwise. Satisfies
// **w = (-1)^((p+q)(n-p-q)) w and g.w = *c*w.
DoubleForm hodge_star(const DoubleForm& a);

// Pointwise inner product <w, t> (coefficient dot product in an
// orthonormal frame; equals *(w . *t)).
double inner(const DoubleForm& a, const DoubleForm& b);

// Action of a matrix M on each first-block slot plus a matrix N on each
// second-block slot, extended as a derivation:
//   (D w)(e_I, e_J) = sum_{i in I, m} M(m,i) w(..i->m.., e_J) + second block.
DoubleForm derivation_action(const DoubleForm& a, const Mat& m_first, const Mat& m_second);

// The derivation F_h extending symmetric multiplication by h on (1,1)
// forms (h k = h o k + k o h as operators). h must be a symmetric (1,1)
// form and a must have p == q with symmetric coefficients.
DoubleForm h_derivation(const DoubleForm& h, const DoubleForm& a);

// Base change: columns of A express the new basis vectors in the old
// basis; returns the coefficients of `a` on the new basis.
DoubleForm transform(const DoubleForm& a, const Mat& basis);

// Max violation of the first Bianchi identity over basis tuples;
// requires p == q >= 2.
double first_bianchi_residual(const DoubleForm& a);

// Value on the pair of simple p-/q-vectors spanned by the given vectors
// after Gram-Schmidt; throws NumericalError when the span is
// rank-deficient (relative tolerance 1e-10).
double sectional_value(const DoubleForm& a, const std::vector<std::vector<double>>& span_p,
                       const std::vector<std::vector<double>>& span_q);
// Symmetric convenience: both blocks on the same span.
double sectional_value(const DoubleForm& a, const std::vector<std::vector<double>>& span);

// Orthogonal splitting w = sum_j g^j w_j with c w_j = 0, component j of
// bidegree (p-j, p-j). Requires p == q, symmetric coefficients and
// n >= 2p.
std::vector<DoubleForm> primitive_decompose(const DoubleForm& a);

// The trace-free (1,1) part of the splitting above, available whenever
// n >= p+1 (it only needs the two deepest contractions).
DoubleForm traceless_ricci_component(const DoubleForm& a);

// One line per nonzero coefficient: "(i1,..,ip|j1,..,jq) value", in
// lexicographic order of the index pairs.
std::string debug_dump(const DoubleForm& a);

// --- curvature structures ------------------------------------------------

enum class BianchiFlag { unchecked, verified, violated };

// Symmetric (p,p) double form with a first-Bianchi bookkeeping flag.
struct CurvatureStructure {
    DoubleForm form;
    BianchiFlag bianchi = BianchiFlag::unchecked;

    int n() const { return form.n(); }
    int degree() const { return form.p(); }
};

// Validates symmetry (throws DimensionError) and, for p >= 2, evaluates
// the Bianchi residual against tol to set the flag.
CurvatureStructure make_curvature(DoubleForm form, double tol = 1e-12);

} // namespace gbc
