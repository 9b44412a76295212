#include "gbc/differential_ops.hpp"

#include <bit>
#include <cmath>

#include "gbc/combinatorics.hpp"
#include "gbc/errors.hpp"
#include "gbc/invariants.hpp"

namespace gbc {

namespace {

constexpr int kD1Off[4] = {-2, -1, 1, 2};
constexpr double kD1W[4] = {1.0, -8.0, 8.0, -1.0};

std::vector<double> shifted(const std::vector<double>& x, int a, double da, int b = -1,
                            double db = 0.0) {
    std::vector<double> y = x;
    y[a] += da;
    if (b >= 0) y[b] += db;
    return y;
}

// coordinate components of the field at y (frame value pulled back)
DoubleForm coord_value(const FormField& f, const MetricChart& chart,
                       const std::vector<double>& y) {
    PointFrame fr = point_frame(chart.metric_at(y));
    return transform(f.frame_value(y), fr.inverse);
}

// matrix of the connection along coordinate direction c: (m, i) -> Gamma^m_ci
Mat gamma_dir(const std::vector<Mat>& gamma, int c) {
    int n = static_cast<int>(gamma.size());
    Mat m(n, n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i) m(l, i) = gamma[l](c, i);
    return m;
}

// coordinate-direction covariant derivatives in coordinate components
std::vector<DoubleForm> coordinate_nabla(const JetStencil& js, const std::vector<Mat>& gamma) {
    int dim = static_cast<int>(js.d1.size());
    std::vector<DoubleForm> nabla(dim);
    for (int c = 0; c < dim; ++c) {
        Mat gc = gamma_dir(gamma, c);
        nabla[c] = js.d1[c] - derivation_action(js.value, gc, gc);
    }
    return nabla;
}

// alternating sum inserting the derivative direction into the first block
DoubleForm first_block_sum(const std::vector<DoubleForm>& nabla, int n, int p, int q) {
    DoubleForm out(n, p + 1, q);
    for (std::uint32_t mi : index_table(n, p + 1).masks)
        for (std::uint32_t mj : index_table(n, q).masks) {
            double acc = 0.0;
            for (std::uint32_t s = mi; s; s &= s - 1) {
                int i = std::countr_zero(s);
                std::uint32_t rest = mi & ~(1u << i);
                acc -= insert_sign(i, rest) * nabla[i].coeff(rest, mj);
            }
            out.set_coeff(mi, mj, acc);
        }
    return out;
}

DoubleForm second_block_sum(const std::vector<DoubleForm>& nabla, int n, int p, int q) {
    DoubleForm out(n, p, q + 1);
    for (std::uint32_t mi : index_table(n, p).masks)
        for (std::uint32_t mj : index_table(n, q + 1).masks) {
            double acc = 0.0;
            for (std::uint32_t s = mj; s; s &= s - 1) {
                int j = std::countr_zero(s);
                std::uint32_t rest = mj & ~(1u << j);
                acc -= insert_sign(j, rest) * nabla[j].coeff(mi, rest);
            }
            out.set_coeff(mi, mj, acc);
        }
    return out;
}

// all second covariant derivatives nabla^2_{a,b} in coordinate components:
//   d_a d_b w - (d_a Gamma_b) . w - Gamma_b . d_a w - Gamma_a . d_b w
//   + Gamma_a . (Gamma_b . w) - Gamma^c_ab nabla_c w
std::vector<std::vector<DoubleForm>> second_covariant(const JetStencil& js,
                                                      const ChristoffelJet& cj) {
    int dim = static_cast<int>(js.d1.size());
    std::vector<Mat> gd(dim);
    for (int c = 0; c < dim; ++c) gd[c] = gamma_dir(cj.gamma, c);
    std::vector<DoubleForm> t(dim);
    for (int c = 0; c < dim; ++c) t[c] = js.d1[c] - derivation_action(js.value, gd[c], gd[c]);
    int n = js.value.n();
    Mat dg(n, n);
    std::vector<std::vector<DoubleForm>> out(dim, std::vector<DoubleForm>(dim));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i) dg(l, i) = cj.dgamma[a][l](b, i);
            DoubleForm w = js.d2[a][b];
            w -= derivation_action(js.value, dg, dg);
            w -= derivation_action(js.d1[a], gd[b], gd[b]);
            w -= derivation_action(js.d1[b], gd[a], gd[a]);
            w += derivation_action(derivation_action(js.value, gd[b], gd[b]), gd[a], gd[a]);
            for (int c = 0; c < dim; ++c) w -= cj.gamma[c](a, b) * t[c];
            out[a][b] = w;
        }
    return out;
}

// sum_{i in row, j in col} (-1)^{i+j} nabla2[i][j] (row \ i, col \ j);
// `reversed` swaps the derivative order (D-tilde then D)
DoubleForm assemble_second(const std::vector<std::vector<DoubleForm>>& nabla2, int n, int p,
                           int q, bool reversed) {
    DoubleForm out(n, p + 1, q + 1);
    for (std::uint32_t mi : index_table(n, p + 1).masks)
        for (std::uint32_t mj : index_table(n, q + 1).masks) {
            double acc = 0.0;
            for (std::uint32_t s = mi; s; s &= s - 1) {
                int i = std::countr_zero(s);
                std::uint32_t ri = mi & ~(1u << i);
                int si = insert_sign(i, ri);
                for (std::uint32_t t = mj; t; t &= t - 1) {
                    int j = std::countr_zero(t);
                    std::uint32_t rj = mj & ~(1u << j);
                    const DoubleForm& w = reversed ? nabla2[j][i] : nabla2[i][j];
                    acc += si * insert_sign(j, rj) * w.coeff(ri, rj);
                }
            }
            out.set_coeff(mi, mj, acc);
        }
    return out;
}

DoubleForm second_composition(const FormField& f, const MetricChart& chart,
                              const std::vector<double>& x, bool with_ddt, bool with_dtd) {
    if (f.p + 1 > f.n || f.q + 1 > f.n)
        throw DimensionError("second-order Bianchi composition: degree overflow");
    JetStencil js = make_jet_stencil(f, chart, x, true);
    ChristoffelJet cj = christoffel_jet(chart, x);
    auto nabla2 = second_covariant(js, cj);
    DoubleForm out(f.n, f.p + 1, f.q + 1);
    if (with_ddt) out += assemble_second(nabla2, f.n, f.p, f.q, false);
    if (with_dtd) out += assemble_second(nabla2, f.n, f.p, f.q, true);
    PointFrame fr = point_frame(chart.metric_at(x));
    return transform(out, fr.basis);
}

// c Dt w + Dt(c w) or the mirror, in frame components at x
DoubleForm delta_definitional(const FormField& f, const MetricChart& chart,
                              const std::vector<double>& x, bool tilde) {
    DoubleForm out =
        tilde ? contract(bianchi_D(f, chart, x)) : contract(bianchi_Dtilde(f, chart, x));
    if (f.p >= 1 && f.q >= 1) {
        FormField cf = map_field(f, f.p - 1, f.q - 1,
                                 [](const DoubleForm& w) { return contract(w); });
        out += tilde ? bianchi_D(cf, chart, x) : bianchi_Dtilde(cf, chart, x);
    }
    // the raw contraction composition satisfies integration by parts with a
    // universal -1; rescale so the divergence matches the star-conjugated
    // operator, whose adjointness sign is the documented (-1)^(n+degree)
    int parity = tilde ? f.n + f.q : f.n + f.p;
    return parity % 2 ? out * -1.0 : out;
}

int star_sign(int n, int p, int q) {
    return ((p + q) * (n - p - q)) % 2 != 0 ? -1 : 1;
}

void check_delta_routes(const DoubleForm& def_route, const DoubleForm& star_route, double tol,
                        const char* what) {
    double scale = 1.0 + std::max(def_route.max_abs(), star_route.max_abs());
    if ((def_route - star_route).max_abs() > tol * scale)
        throw NumericalError(std::string(what) + ": definitional and star routes disagree");
}

} // namespace

std::vector<Mat> christoffel(const MetricChart& chart, const std::vector<double>& x) {
    int n = chart.dim;
    Mat ginv = spd_inverse(chart.metric_at(x));
    std::vector<Mat> dg = chart.d_metric_at(x);
    std::vector<Mat> gamma(n, Mat(n, n));
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int l = 0; l < n; ++l) {
                double s = 0.0;
                for (int m = 0; m < n; ++m)
                    s += ginv(l, m) * (dg[a](m, b) + dg[b](m, a) - dg[m](a, b));
                gamma[l](a, b) = 0.5 * s;
                gamma[l](b, a) = gamma[l](a, b);
            }
    return gamma;
}

ChristoffelJet christoffel_jet(const MetricChart& chart, const std::vector<double>& x) {
    int n = chart.dim;
    Mat ginv = spd_inverse(chart.metric_at(x));
    std::vector<Mat> dg = chart.d_metric_at(x);
    auto ddg = chart.dd_metric_at(x);
    ChristoffelJet jet;
    jet.gamma.assign(n, Mat(n, n));
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int l = 0; l < n; ++l) {
                double s = 0.0;
                for (int m = 0; m < n; ++m)
                    s += ginv(l, m) * (dg[a](m, b) + dg[b](m, a) - dg[m](a, b));
                jet.gamma[l](a, b) = 0.5 * s;
                jet.gamma[l](b, a) = jet.gamma[l](a, b);
            }
    jet.dgamma.assign(n, std::vector<Mat>(n, Mat(n, n)));
    for (int c = 0; c < n; ++c) {
        // d_c g^{-1} = -g^{-1} (d_c g) g^{-1}
        Mat dginv = mat_scale(mat_mul(ginv, mat_mul(dg[c], ginv)), -1.0);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) {
                        s += dginv(l, m) * (dg[a](m, b) + dg[b](m, a) - dg[m](a, b));
                        s += ginv(l, m) *
                             (ddg[c][a](m, b) + ddg[c][b](m, a) - ddg[c][m](a, b));
                    }
                    jet.dgamma[c][l](a, b) = 0.5 * s;
                    jet.dgamma[c][l](b, a) = jet.dgamma[c][l](a, b);
                }
    }
    return jet;
}

DoubleForm riemann_coordinate(const MetricChart& chart, const std::vector<double>& x) {
    int n = chart.dim;
    ChristoffelJet cj = christoffel_jet(chart, x);
    Mat g = chart.metric_at(x);
    // F^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik
    //         + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
    auto curv4 = [&](int i, int j, int k, int l) {
        double s = cj.dgamma[i][l](j, k) - cj.dgamma[j][l](i, k);
        for (int m = 0; m < n; ++m)
            s += cj.gamma[l](i, m) * cj.gamma[m](j, k) - cj.gamma[l](j, m) * cj.gamma[m](i, k);
        return s;
    };
    DoubleForm rc(n, 2, 2);
    const IndexTable& pairs = index_table(n, 2);
    for (std::uint32_t mi : pairs.masks) {
        auto ij = mask_to_indices(mi); // 1-based labels
        for (std::uint32_t mk : pairs.masks) {
            auto kl = mask_to_indices(mk);
            // lowered tensor with the plane pairing (ij | kl) -> R4(i,j,l,k)
            double v = 0.0;
            for (int m = 0; m < n; ++m)
                v += g(kl[0] - 1, m) * curv4(ij[0] - 1, ij[1] - 1, kl[1] - 1, m);
            rc.set_coeff(mi, mk, v);
        }
    }
    return rc;
}

CurvatureStructure riemann(const MetricChart& chart, const std::vector<double>& x, double tol) {
    DoubleForm rc = riemann_coordinate(chart, x);
    PointFrame fr = point_frame(chart.metric_at(x));
    DoubleForm rf = transform(rc, fr.basis);
    double scale = 1.0 + rf.max_abs();
    DoubleForm sym = rf.symmetrized();
    if ((rf - sym).max_abs() > tol * scale)
        throw NumericalError("riemann: block symmetry residual above tolerance at " + chart.name);
    CurvatureStructure cs = make_curvature(sym, tol);
    if (cs.bianchi == BianchiFlag::violated)
        throw NumericalError("riemann: first Bianchi residual above tolerance at " + chart.name);
    return cs;
}

FormField metric_field(int n) {
    FormField f;
    f.n = n;
    f.p = f.q = 1;
    f.frame_value = [n](const std::vector<double>&) { return DoubleForm::metric(n); };
    return f;
}

FormField riemann_field(const MetricChart& chart) {
    FormField f;
    f.n = chart.dim;
    f.p = f.q = 2;
    f.frame_value = [chart](const std::vector<double>& x) { return riemann(chart, x).form; };
    return f;
}

FormField gauss_bonnet_field(const MetricChart& chart, int k) {
    FormField f;
    f.n = chart.dim;
    f.p = f.q = 0;
    f.frame_value = [chart, k](const std::vector<double>& x) {
        DoubleForm s(chart.dim, 0, 0);
        s.at(0, 0) = gauss_bonnet_curvature(riemann(chart, x), k);
        return s;
    };
    return f;
}

FormField lovelock_field(const MetricChart& chart, int k) {
    FormField f;
    f.n = chart.dim;
    f.p = f.q = 1;
    f.frame_value = [chart, k](const std::vector<double>& x) {
        return lovelock_tensor(riemann(chart, x), k).form;
    };
    return f;
}

FormField map_field(const FormField& src, int p, int q,
                    std::function<DoubleForm(const DoubleForm&)> fn) {
    FormField f;
    f.n = src.n;
    f.p = p;
    f.q = q;
    auto eval = src.frame_value;
    f.frame_value = [eval, fn, p, q](const std::vector<double>& x) {
        DoubleForm w = fn(eval(x));
        if (w.p() != p || w.q() != q)
            throw DimensionError("map_field: mapping produced the wrong bidegree");
        return w;
    };
    return f;
}

JetStencil make_jet_stencil(const FormField& f, const MetricChart& chart,
                            const std::vector<double>& x, bool second_order) {
    int dim = chart.dim;
    auto val = [&](const std::vector<double>& y) { return coord_value(f, chart, y); };
    JetStencil js;
    js.x = x;
    js.value = val(x);
    js.d1.resize(dim);
    for (int a = 0; a < dim; ++a) {
        double h = fd_step_first(x[a]);
        DoubleForm acc(f.n, f.p, f.q);
        for (int s = 0; s < 4; ++s) acc += kD1W[s] * val(shifted(x, a, kD1Off[s] * h));
        js.d1[a] = acc * (1.0 / (12.0 * h));
    }
    if (!second_order) return js;
    js.d2.assign(dim, std::vector<DoubleForm>(dim));
    for (int a = 0; a < dim; ++a) {
        double ha = fd_step_second(x[a]);
        DoubleForm acc = js.value * (-30.0);
        acc += 16.0 * val(shifted(x, a, ha));
        acc += 16.0 * val(shifted(x, a, -ha));
        acc -= val(shifted(x, a, 2.0 * ha));
        acc -= val(shifted(x, a, -2.0 * ha));
        js.d2[a][a] = acc * (1.0 / (12.0 * ha * ha));
        for (int b = a + 1; b < dim; ++b) {
            double hb = fd_step_second(x[b]);
            DoubleForm m(f.n, f.p, f.q);
            for (int s = 0; s < 4; ++s)
                for (int t = 0; t < 4; ++t)
                    m += kD1W[s] * kD1W[t] *
                         val(shifted(x, a, kD1Off[s] * ha, b, kD1Off[t] * hb));
            js.d2[a][b] = m * (1.0 / (144.0 * ha * hb));
            js.d2[b][a] = js.d2[a][b];
        }
    }
    return js;
}

std::vector<DoubleForm> covariant_derivative(const FormField& f, const MetricChart& chart,
                                             const std::vector<double>& x) {
    JetStencil js = make_jet_stencil(f, chart, x, false);
    std::vector<DoubleForm> nabla = coordinate_nabla(js, christoffel(chart, x));
    PointFrame fr = point_frame(chart.metric_at(x));
    int dim = chart.dim;
    std::vector<DoubleForm> out(dim);
    for (int a = 0; a < dim; ++a) {
        DoubleForm acc(f.n, f.p, f.q);
        for (int m = 0; m < dim; ++m)
            if (fr.basis(m, a) != 0.0) acc += fr.basis(m, a) * nabla[m];
        out[a] = transform(acc, fr.basis);
    }
    return out;
}

DoubleForm bianchi_D(const FormField& f, const MetricChart& chart, const std::vector<double>& x) {
    if (f.p + 1 > f.n) throw DimensionError("bianchi_D: degree overflow");
    JetStencil js = make_jet_stencil(f, chart, x, false);
    std::vector<DoubleForm> nabla = coordinate_nabla(js, christoffel(chart, x));
    PointFrame fr = point_frame(chart.metric_at(x));
    return transform(first_block_sum(nabla, f.n, f.p, f.q), fr.basis);
}

DoubleForm bianchi_Dtilde(const FormField& f, const MetricChart& chart,
                          const std::vector<double>& x) {
    if (f.q + 1 > f.n) throw DimensionError("bianchi_Dtilde: degree overflow");
    JetStencil js = make_jet_stencil(f, chart, x, false);
    std::vector<DoubleForm> nabla = coordinate_nabla(js, christoffel(chart, x));
    PointFrame fr = point_frame(chart.metric_at(x));
    return transform(second_block_sum(nabla, f.n, f.p, f.q), fr.basis);
}

DoubleForm dd_tilde(const FormField& f, const MetricChart& chart, const std::vector<double>& x) {
    return second_composition(f, chart, x, true, false);
}

DoubleForm dtilde_d(const FormField& f, const MetricChart& chart, const std::vector<double>& x) {
    return second_composition(f, chart, x, false, true);
}

DoubleForm hessian_operator(const FormField& f, const MetricChart& chart,
                            const std::vector<double>& x) {
    return second_composition(f, chart, x, true, true);
}

DoubleForm delta_op(const FormField& f, const MetricChart& chart, const std::vector<double>& x,
                    double tol) {
    if (f.p < 1) throw DimensionError("delta_op: needs p >= 1");
    DoubleForm def_route = delta_definitional(f, chart, x, false);
    check_delta_routes(def_route, delta_via_star(f, chart, x), tol, "delta_op");
    return def_route;
}

DoubleForm delta_tilde_op(const FormField& f, const MetricChart& chart,
                          const std::vector<double>& x, double tol) {
    if (f.q < 1) throw DimensionError("delta_tilde_op: needs q >= 1");
    DoubleForm def_route = delta_definitional(f, chart, x, true);
    check_delta_routes(def_route, delta_tilde_via_star(f, chart, x), tol, "delta_tilde_op");
    return def_route;
}

DoubleForm delta_via_star(const FormField& f, const MetricChart& chart,
                          const std::vector<double>& x) {
    if (f.p < 1) throw DimensionError("delta_via_star: needs p >= 1");
    int n = f.n;
    FormField sf = map_field(f, n - f.p, n - f.q,
                             [](const DoubleForm& w) { return hodge_star(w); });
    DoubleForm out = hodge_star(bianchi_D(sf, chart, x));
    return star_sign(n, f.p, f.q) * out;
}

DoubleForm delta_tilde_via_star(const FormField& f, const MetricChart& chart,
                                const std::vector<double>& x) {
    if (f.q < 1) throw DimensionError("delta_tilde_via_star: needs q >= 1");
    int n = f.n;
    FormField sf = map_field(f, n - f.p, n - f.q,
                             [](const DoubleForm& w) { return hodge_star(w); });
    DoubleForm out = hodge_star(bianchi_Dtilde(sf, chart, x));
    return star_sign(n, f.p, f.q) * out;
}

DeltaPair delta_ops(const FormField& f, const MetricChart& chart, const std::vector<double>& x,
                    double tol) {
    return {delta_op(f, chart, x, tol), delta_tilde_op(f, chart, x, tol)};
}

DoubleForm laplace_divergence(const FormField& f, const MetricChart& chart,
                              const std::vector<double>& x) {
    if (f.p < 1 || f.q < 1) throw DimensionError("laplace_divergence: needs p, q >= 1");
    int n = f.n;
    FormField sf = map_field(f, n - f.p, n - f.q,
                             [](const DoubleForm& w) { return hodge_star(w); });
    DoubleForm out = hodge_star(hessian_operator(sf, chart, x));
    return star_sign(n, f.p, f.q) * out;
}

} // namespace gbc
