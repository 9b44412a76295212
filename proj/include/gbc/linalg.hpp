#pragma once

#include <cstdint>
#include <vector>

namespace gbc {

// Small dense row-major matrix; everything here targets n <= kMaxDim,
// no attempt is made to be fast on large sizes.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Mat identity(int n);
};

Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_add(const Mat& x, const Mat& y);
Mat mat_scale(const Mat& x, double s);
Mat transpose(const Mat& x);
double max_abs(const Mat& x);

// G = L L^T with L lower triangular; throws NumericalError if G is not
// symmetric positive definite.
Mat cholesky(const Mat& g);
Mat invert_lower(const Mat& l);
Mat spd_inverse(const Mat& g);
double spd_det(const Mat& g);

// Cyclic Jacobi for symmetric matrices; eigenvectors in columns.
void jacobi_eigen(const Mat& sym, std::vector<double>& evals, Mat& evecs);

// Determinant of the submatrix picked by bitmask rows/cols (equal sizes).
double minor_det(const Mat& m, std::uint32_t rowmask, std::uint32_t colmask);

// p-th compound matrix on the index_table(n, p) ordering: entry (K, I) is
// the minor det A[rows K, cols I].
Mat compound(const Mat& m, int p);

} // namespace gbc
