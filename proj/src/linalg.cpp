#include "gbc/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "gbc/combinatorics.hpp"
#include "gbc/errors.hpp"

namespace gbc {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw DimensionError("mat_mul: shape mismatch");
    Mat out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            double v = x(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
        }
    return out;
}

Mat mat_add(const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw DimensionError("mat_add: shape mismatch");
    Mat out = x;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
    return out;
}

Mat mat_scale(const Mat& x, double s) {
    Mat out = x;
    for (double& v : out.a) v *= s;
    return out;
}

Mat transpose(const Mat& x) {
    Mat out(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
    return out;
}

double max_abs(const Mat& x) {
    double m = 0.0;
    for (double v : x.a) m = std::max(m, std::abs(v));
    return m;
}

Mat cholesky(const Mat& g) {
    if (g.rows != g.cols) throw DimensionError("cholesky: not square");
    int n = g.rows;
    Mat l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s))
                    throw NumericalError("cholesky: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

Mat invert_lower(const Mat& l) {
    int n = l.rows;
    Mat inv(n, n);
    for (int i = 0; i < n; ++i) {
        inv(i, i) = 1.0 / l(i, i);
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s += l(i, k) * inv(k, j);
            inv(i, j) = -s / l(i, i);
        }
    }
    return inv;
}

Mat spd_inverse(const Mat& g) {
    Mat linv = invert_lower(cholesky(g));
    return mat_mul(transpose(linv), linv);
}

double spd_det(const Mat& g) {
    Mat l = cholesky(g);
    double d = 1.0;
    for (int i = 0; i < l.rows; ++i) d *= l(i, i);
    return d * d;
}

void jacobi_eigen(const Mat& sym, std::vector<double>& evals, Mat& evecs) {
    int n = sym.rows;
    Mat a = sym;
    evecs = Mat::identity(n);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = evecs(k, p), vkq = evecs(k, q);
                    evecs(k, p) = c * vkp - s * vkq;
                    evecs(k, q) = s * vkp + c * vkq;
                }
            }
    }
    evals.resize(n);
    for (int i = 0; i < n; ++i) evals[i] = a(i, i);
}

double minor_det(const Mat& m, std::uint32_t rowmask, std::uint32_t colmask) {
    auto rows = mask_to_indices(rowmask);
    auto cols = mask_to_indices(colmask);
    if (rows.size() != cols.size()) throw DimensionError("minor_det: size mismatch");
    int k = static_cast<int>(rows.size());
    if (k == 0) return 1.0;
    if (k == 1) return m(rows[0] - 1, cols[0] - 1);
    if (k == 2)
        return m(rows[0] - 1, cols[0] - 1) * m(rows[1] - 1, cols[1] - 1) -
               m(rows[0] - 1, cols[1] - 1) * m(rows[1] - 1, cols[0] - 1);
    // Gaussian elimination with partial pivoting on a copy
    std::vector<double> b(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) b[i * k + j] = m(rows[i] - 1, cols[j] - 1);
    double det = 1.0;
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(b[r * k + col]) > std::abs(b[piv * k + col])) piv = r;
        if (b[piv * k + col] == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < k; ++j) std::swap(b[piv * k + j], b[col * k + j]);
            det = -det;
        }
        det *= b[col * k + col];
        for (int r = col + 1; r < k; ++r) {
            double f = b[r * k + col] / b[col * k + col];
            for (int j = col; j < k; ++j) b[r * k + j] -= f * b[col * k + j];
        }
    }
    return det;
}

Mat compound(const Mat& m, int p) {
    if (m.rows != m.cols) throw DimensionError("compound: not square");
    const IndexTable& t = index_table(m.rows, p);
    int sz = static_cast<int>(t.masks.size());
    Mat out(sz, sz);
    for (int i = 0; i < sz; ++i)
        for (int j = 0; j < sz; ++j) out(i, j) = minor_det(m, t.masks[i], t.masks[j]);
    return out;
}

} // namespace gbc
