#include "gbc/double_form.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "gbc/errors.hpp"

namespace gbc {

DoubleForm::DoubleForm(int n, int p, int q) : n_(n), p_(p), q_(q) {
    if (n < 0 || n > kMaxDim || p < 0 || p > n || q < 0 || q > n)
        throw DimensionError("DoubleForm: invalid (n, p, q)");
    rows_ = binom(n, p);
    cols_ = binom(n, q);
    c_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
}

double DoubleForm::coeff(std::uint32_t mi, std::uint32_t mj) const {
    const IndexTable& ti = index_table(n_, p_);
    const IndexTable& tj = index_table(n_, q_);
    int ri = ti.rank[mi], rj = tj.rank[mj];
    if (ri < 0 || rj < 0) throw DimensionError("DoubleForm::coeff: mask of wrong degree");
    return at(ri, rj);
}

void DoubleForm::set_coeff(std::uint32_t mi, std::uint32_t mj, double v) {
    const IndexTable& ti = index_table(n_, p_);
    const IndexTable& tj = index_table(n_, q_);
    int ri = ti.rank[mi], rj = tj.rank[mj];
    if (ri < 0 || rj < 0) throw DimensionError("DoubleForm::set_coeff: mask of wrong degree");
    at(ri, rj) = v;
}

bool DoubleForm::same_shape(const DoubleForm& o) const {
    return n_ == o.n_ && p_ == o.p_ && q_ == o.q_;
}

DoubleForm& DoubleForm::operator+=(const DoubleForm& o) {
    if (!same_shape(o)) throw DimensionError("DoubleForm: shape mismatch in +=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

DoubleForm& DoubleForm::operator-=(const DoubleForm& o) {
    if (!same_shape(o)) throw DimensionError("DoubleForm: shape mismatch in -=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

DoubleForm& DoubleForm::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

double DoubleForm::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

double DoubleForm::norm() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(s);
}

bool DoubleForm::is_symmetric(double tol) const {
    if (p_ != q_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    return true;
}

DoubleForm DoubleForm::block_transpose() const {
    DoubleForm out(n_, q_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

DoubleForm DoubleForm::symmetrized() const {
    if (p_ != q_) throw DimensionError("symmetrized: p != q");
    DoubleForm out = *this;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = 0.5 * (at(i, j) + at(j, i));
    return out;
}

DoubleForm DoubleForm::unit(int n) {
    DoubleForm u(n, 0, 0);
    u.at(0, 0) = 1.0;
    return u;
}

DoubleForm DoubleForm::metric(int n) {
    DoubleForm g(n, 1, 1);
    for (int i = 0; i < n; ++i) g.at(i, i) = 1.0;
    return g;
}

DoubleForm operator+(DoubleForm a, const DoubleForm& b) { return a += b; }
DoubleForm operator-(DoubleForm a, const DoubleForm& b) { return a -= b; }
DoubleForm operator*(DoubleForm a, double s) { return a *= s; }
DoubleForm operator*(double s, DoubleForm a) { return a *= s; }

DoubleForm wedge(const DoubleForm& a, const DoubleForm& b) {
    if (a.n() != b.n()) throw DimensionError("wedge: dimension mismatch");
    int n = a.n();
    int pp = a.p() + b.p(), qq = a.q() + b.q();
    if (pp > n || qq > n) return DoubleForm(n, std::min(pp, n), std::min(qq, n));
    DoubleForm out(n, pp, qq);
    const IndexTable& ti = index_table(n, pp);
    const IndexTable& tj = index_table(n, qq);
    const IndexTable& tai = index_table(n, a.p());
    const IndexTable& taj = index_table(n, a.q());
    const IndexTable& tbi = index_table(n, b.p());
    const IndexTable& tbj = index_table(n, b.q());
    for (int ri = 0; ri < out.rows(); ++ri) {
        std::uint32_t mk = ti.masks[ri];
        const auto& sp_i = subset_splits(mk, a.p());
        for (int rj = 0; rj < out.cols(); ++rj) {
            std::uint32_t ml = tj.masks[rj];
            const auto& sp_j = subset_splits(ml, a.q());
            double s = 0.0;
            for (const auto& si : sp_i) {
                int rai = tai.rank[si.sub];
                int rbi = tbi.rank[mk & ~si.sub];
                for (const auto& sj : sp_j) {
                    double av = a.at(rai, taj.rank[sj.sub]);
                    if (av == 0.0) continue;
                    s += si.sign * sj.sign * av * b.at(rbi, tbj.rank[ml & ~sj.sub]);
                }
            }
            out.at(ri, rj) = s;
        }
    }
    return out;
}

DoubleForm wedge_power(const DoubleForm& a, int k) {
    if (k < 0) throw DimensionError("wedge_power: negative power");
    DoubleForm out = DoubleForm::unit(a.n());
    for (int i = 0; i < k; ++i) out = wedge(out, a);
    return out;
}

DoubleForm contract(const DoubleForm& a) {
    if (a.p() < 1 || a.q() < 1) throw DimensionError("contract: needs p >= 1 and q >= 1");
    int n = a.n();
    DoubleForm out(n, a.p() - 1, a.q() - 1);
    const IndexTable& ti = index_table(n, a.p() - 1);
    const IndexTable& tj = index_table(n, a.q() - 1);
    const IndexTable& tip = index_table(n, a.p());
    const IndexTable& tjp = index_table(n, a.q());
    for (int ri = 0; ri < out.rows(); ++ri) {
        std::uint32_t mi = ti.masks[ri];
        for (int rj = 0; rj < out.cols(); ++rj) {
            std::uint32_t mj = tj.masks[rj];
            double s = 0.0;
            for (int m = 0; m < n; ++m) {
                std::uint32_t bit = 1u << m;
                if ((mi & bit) || (mj & bit)) continue;
                double sign = insert_sign(m, mi) * insert_sign(m, mj);
                s += sign * a.at(tip.rank[mi | bit], tjp.rank[mj | bit]);
            }
            out.at(ri, rj) = s;
        }
    }
    return out;
}

DoubleForm contract_power(const DoubleForm& a, int m) {
    DoubleForm out = a;
    for (int i = 0; i < m; ++i) out = contract(out);
    return out;
}

DoubleForm metric_mul(const DoubleForm& a) { return wedge(DoubleForm::metric(a.n()), a); }

DoubleForm hodge_star(const DoubleForm& a) {
    int n = a.n();
    DoubleForm out(n, n - a.p(), n - a.q());
    const IndexTable& ti = index_table(n, a.p());
    const IndexTable& tj = index_table(n, a.q());
    const IndexTable& tic = index_table(n, n - a.p());
    const IndexTable& tjc = index_table(n, n - a.q());
    std::uint32_t full = (1u << n) - 1;
    for (int ri = 0; ri < a.rows(); ++ri) {
        std::uint32_t mi = ti.masks[ri];
        int si = shuffle_sign(mi, full);
        for (int rj = 0; rj < a.cols(); ++rj) {
            std::uint32_t mj = tj.masks[rj];
            double v = a.at(ri, rj);
            if (v == 0.0) continue;
            int sj = shuffle_sign(mj, full);
            out.at(tic.rank[full & ~mi], tjc.rank[full & ~mj]) = si * sj * v;
        }
    }
    return out;
}

double inner(const DoubleForm& a, const DoubleForm& b) {
    if (!a.same_shape(b)) throw DimensionError("inner: shape mismatch");
    double s = 0.0;
    const auto& x = a.data();
    const auto& y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

namespace {

// sign of the in-place replacement of element `from` by `to` in `mask`
// (both 0-based, `from` in mask, `to` not in mask\{from}), followed by
// re-sorting.
inline int replace_sign(std::uint32_t mask, int from, int to) {
    std::uint32_t rest = mask & ~(1u << from);
    int pos_from = std::popcount(mask & ((1u << from) - 1));
    int pos_to = std::popcount(rest & ((1u << to) - 1));
    return ((pos_from + pos_to) & 1) ? -1 : 1;
}

} // namespace

DoubleForm derivation_action(const DoubleForm& a, const Mat& m_first, const Mat& m_second) {
    int n = a.n();
    if (m_first.rows != n || m_first.cols != n || m_second.rows != n || m_second.cols != n)
        throw DimensionError("derivation_action: matrix size mismatch");
    DoubleForm out(n, a.p(), a.q());
    const IndexTable& ti = index_table(n, a.p());
    const IndexTable& tj = index_table(n, a.q());
    for (int ri = 0; ri < a.rows(); ++ri) {
        std::uint32_t mi = ti.masks[ri];
        for (int rj = 0; rj < a.cols(); ++rj) {
            std::uint32_t mj = tj.masks[rj];
            double s = 0.0;
            for (std::uint32_t bits = mi; bits; bits &= bits - 1) {
                int i = std::countr_zero(bits);
                std::uint32_t rest = mi & ~(1u << i);
                for (int m = 0; m < n; ++m) {
                    if (rest & (1u << m)) continue;
                    double c = m_first(m, i);
                    if (c == 0.0) continue;
                    s += c * replace_sign(mi, i, m) * a.at(ti.rank[rest | (1u << m)], rj);
                }
            }
            for (std::uint32_t bits = mj; bits; bits &= bits - 1) {
                int j = std::countr_zero(bits);
                std::uint32_t rest = mj & ~(1u << j);
                for (int m = 0; m < n; ++m) {
                    if (rest & (1u << m)) continue;
                    double c = m_second(m, j);
                    if (c == 0.0) continue;
                    s += c * replace_sign(mj, j, m) * a.at(ri, tj.rank[rest | (1u << m)]);
                }
            }
            out.at(ri, rj) = s;
        }
    }
    return out;
}

DoubleForm h_derivation(const DoubleForm& h, const DoubleForm& a) {
    if (h.n() != a.n() || h.p() != 1 || h.q() != 1)
        throw DimensionError("h_derivation: h must be a (1,1) form");
    constexpr double tol = 1e-9;
    if (!h.is_symmetric(tol * (1.0 + h.max_abs())))
        throw DimensionError("h_derivation: h must be symmetric");
    if (a.p() != a.q() || !a.is_symmetric(tol * (1.0 + a.max_abs())))
        throw DimensionError("h_derivation: argument must be a symmetric (p,p) form");
    int n = a.n();
    Mat hm(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) hm(i, j) = h.at(i, j);
    return derivation_action(a, hm, hm);
}

DoubleForm transform(const DoubleForm& a, const Mat& basis) {
    int n = a.n();
    if (basis.rows != n || basis.cols != n)
        throw DimensionError("transform: basis matrix size mismatch");
    Mat cp = compound(basis, a.p());
    Mat cq = compound(basis, a.q());
    // out = cp^T * a * cq with a as a rows x cols matrix
    DoubleForm out(n, a.p(), a.q());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            double s = 0.0;
            for (int k = 0; k < a.rows(); ++k) {
                double ck = cp(k, i);
                if (ck == 0.0) continue;
                for (int l = 0; l < a.cols(); ++l) s += ck * a.at(k, l) * cq(l, j);
            }
            out.at(i, j) = s;
        }
    return out;
}

double first_bianchi_residual(const DoubleForm& a) {
    if (a.p() != a.q() || a.p() < 2)
        throw DimensionError("first_bianchi_residual: needs p == q >= 2");
    int n = a.n(), p = a.p();
    if (p + 1 > n) return 0.0; // alternating over p+1 slots in dimension n <= p
    const IndexTable& tm = index_table(n, p + 1);
    const IndexTable& tn = index_table(n, p - 1);
    const IndexTable& tp = index_table(n, p);
    double res = 0.0;
    for (std::uint32_t mm : tm.masks) {
        auto xs = mask_to_indices(mm); // 1-based
        for (std::uint32_t mn : tn.masks) {
            double s = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                int xj = xs[j] - 1;
                if (mn & (1u << xj)) continue; // e_xj ^ e_N = 0
                std::uint32_t rest = mm & ~(1u << xj);
                double sign = ((j + 1) & 1 ? -1.0 : 1.0) * insert_sign(xj, mn);
                s += sign * a.at(tp.rank[rest], tp.rank[mn | (1u << xj)]);
            }
            res = std::max(res, std::abs(s));
        }
    }
    return res;
}

namespace {

std::vector<std::vector<double>> gram_schmidt(const std::vector<std::vector<double>>& v, int n) {
    std::vector<std::vector<double>> u;
    double scale = 0.0;
    for (const auto& x : v)
        for (double c : x) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) throw NumericalError("sectional_value: zero input span");
    for (const auto& x : v) {
        if (static_cast<int>(x.size()) != n)
            throw DimensionError("sectional_value: vector length != n");
        std::vector<double> w = x;
        for (const auto& e : u) {
            double d = 0.0;
            for (int i = 0; i < n; ++i) d += w[i] * e[i];
            for (int i = 0; i < n; ++i) w[i] -= d * e[i];
        }
        double nrm = 0.0;
        for (double c : w) nrm += c * c;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-10 * scale)
            throw NumericalError("sectional_value: rank-deficient span");
        for (double& c : w) c /= nrm;
        u.push_back(std::move(w));
    }
    return u;
}

// coefficients of u_1 ^ ... ^ u_k on increasing multi-indices
std::vector<double> simple_vector_coeffs(const std::vector<std::vector<double>>& u, int n) {
    int k = static_cast<int>(u.size());
    const IndexTable& t = index_table(n, k);
    Mat m(n, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = u[j][i];
    std::vector<double> out(t.masks.size());
    std::uint32_t colmask = (1u << k) - 1;
    for (std::size_t r = 0; r < t.masks.size(); ++r)
        out[r] = minor_det(m, t.masks[r], colmask);
    return out;
}

} // namespace

double sectional_value(const DoubleForm& a, const std::vector<std::vector<double>>& span_p,
                       const std::vector<std::vector<double>>& span_q) {
    int n = a.n();
    if (static_cast<int>(span_p.size()) != a.p() || static_cast<int>(span_q.size()) != a.q())
        throw DimensionError("sectional_value: span sizes must match (p, q)");
    auto up = gram_schmidt(span_p, n);
    auto uq = gram_schmidt(span_q, n);
    auto vp = simple_vector_coeffs(up, n);
    auto vq = simple_vector_coeffs(uq, n);
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += vp[i] * a.at(i, j) * vq[j];
    return s;
}

double sectional_value(const DoubleForm& a, const std::vector<std::vector<double>>& span) {
    return sectional_value(a, span, span);
}

namespace {

// c(g^m t) = alpha(m, d) g^(m-1) t for t trace-free of bidegree (d, d)
inline double alpha_contract(int n, int m, int d) {
    return static_cast<double>(m) * (n - 2 * d - m + 1);
}

} // namespace

std::vector<DoubleForm> primitive_decompose(const DoubleForm& a) {
    int n = a.n(), p = a.p();
    if (a.p() != a.q()) throw DimensionError("primitive_decompose: needs p == q");
    if (n < 2 * p) throw DimensionError("primitive_decompose: needs n >= 2p");
    if (!a.is_symmetric(1e-9 * (1.0 + a.max_abs())))
        throw DimensionError("primitive_decompose: needs symmetric coefficients");
    // taus[d]: trace-free component of bidegree (d, d)
    std::vector<DoubleForm> taus(p + 1);
    std::vector<DoubleForm> cpow(p + 1, a); // cpow[k] = c^k a
    for (int k = 1; k <= p; ++k) cpow[k] = contract(cpow[k - 1]);
    DoubleForm g = DoubleForm::metric(n);
    for (int dp = 0; dp <= p; ++dp) {
        DoubleForm rhs = cpow[p - dp];
        for (int d = 0; d < dp; ++d) {
            double beta = 1.0;
            for (int i = 0; i < p - dp; ++i) beta *= alpha_contract(n, p - d - i, d);
            DoubleForm term = taus[d];
            for (int j = 0; j < dp - d; ++j) term = wedge(g, term);
            rhs -= beta * term;
        }
        double beta_diag = 1.0;
        for (int i = 0; i < p - dp; ++i) beta_diag *= alpha_contract(n, p - dp - i, dp);
        taus[dp] = rhs * (1.0 / beta_diag);
    }
    // component j of bidegree (p-j, p-j)
    std::vector<DoubleForm> out(p + 1);
    for (int j = 0; j <= p; ++j) out[j] = taus[p - j];
    return out;
}

DoubleForm traceless_ricci_component(const DoubleForm& a) {
    int n = a.n(), p = a.p();
    if (a.p() != a.q() || p < 1) throw DimensionError("traceless_ricci_component: needs p == q >= 1");
    if (n < p + 1) throw DimensionError("traceless_ricci_component: needs n >= p+1");
    DoubleForm rho = contract_power(a, p - 1); // (1,1)
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += rho.at(i, i);
    DoubleForm dev = rho - (tr / n) * DoubleForm::metric(n);
    double gamma = 1.0;
    for (int m = 1; m <= p - 1; ++m) gamma *= alpha_contract(n, m, 1);
    return dev * (1.0 / gamma);
}

std::string debug_dump(const DoubleForm& a) {
    const IndexTable& ti = index_table(a.n(), a.p());
    const IndexTable& tj = index_table(a.n(), a.q());
    std::string out;
    char buf[128];
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            double v = a.at(i, j);
            if (v == 0.0) continue;
            out += '(';
            auto xs = mask_to_indices(ti.masks[i]);
            for (std::size_t k = 0; k < xs.size(); ++k) {
                if (k) out += ',';
                out += std::to_string(xs[k]);
            }
            out += '|';
            auto ys = mask_to_indices(tj.masks[j]);
            for (std::size_t k = 0; k < ys.size(); ++k) {
                if (k) out += ',';
                out += std::to_string(ys[k]);
            }
            std::snprintf(buf, sizeof(buf), ") %.17g\n", v);
            out += buf;
        }
    return out;
}

CurvatureStructure make_curvature(DoubleForm form, double tol) {
    if (form.p() != form.q()) throw DimensionError("make_curvature: needs p == q");
    if (!form.is_symmetric(tol * (1.0 + form.max_abs())))
        throw DimensionError("make_curvature: coefficients not symmetric");
    CurvatureStructure cs{std::move(form), BianchiFlag::unchecked};
    if (cs.form.p() >= 2) {
        double r = first_bianchi_residual(cs.form);
        cs.bianchi = (r <= tol * (1.0 + cs.form.max_abs())) ? BianchiFlag::verified
                                                            : BianchiFlag::violated;
    } else {
        cs.bianchi = BianchiFlag::verified;
    }
    return cs;
}

} // namespace gbc
