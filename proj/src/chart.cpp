#include "gbc/chart.hpp"

#include <cmath>
#include <limits>

#include "gbc/errors.hpp"
#include "gbc/random_fields.hpp"

namespace gbc {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kPoleMargin = 1e-3;

// 4th-order first-derivative stencil offsets and weights (divide by 12h)
constexpr int kD1Off[4] = {-2, -1, 1, 2};
constexpr double kD1W[4] = {1.0, -8.0, 8.0, -1.0};

std::vector<double> shifted(const std::vector<double>& x, int a, double da, int b = -1,
                            double db = 0.0) {
    std::vector<double> y = x;
    y[a] += da;
    if (b >= 0) y[b] += db;
    return y;
}

void axpy(Mat& acc, double s, const Mat& m) {
    for (std::size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += s * m.a[i];
}

} // namespace

double fd_step_first(double coordinate) {
    static const double h = std::cbrt(std::numeric_limits<double>::epsilon());
    return h * (1.0 + std::abs(coordinate));
}

double fd_step_second(double coordinate) {
    static const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0);
    return h * (1.0 + std::abs(coordinate));
}

Mat MetricChart::metric_at(const std::vector<double>& x) const {
    return metric(x);
}

std::vector<Mat> MetricChart::d_metric_at(const std::vector<double>& x) const {
    if (d_metric) return d_metric(x);
    std::vector<Mat> out(dim);
    for (int a = 0; a < dim; ++a) {
        double h = fd_step_first(x[a]);
        Mat acc(dim, dim);
        for (int s = 0; s < 4; ++s) axpy(acc, kD1W[s], metric(shifted(x, a, kD1Off[s] * h)));
        out[a] = mat_scale(acc, 1.0 / (12.0 * h));
    }
    return out;
}

std::vector<std::vector<Mat>> MetricChart::dd_metric_at(const std::vector<double>& x) const {
    if (dd_metric) return dd_metric(x);
    std::vector<std::vector<Mat>> out(dim, std::vector<Mat>(dim));
    for (int a = 0; a < dim; ++a) {
        // diagonal: -f(2h) + 16 f(h) - 30 f + 16 f(-h) - f(-2h) over 12h^2
        double ha = fd_step_second(x[a]);
        Mat acc = mat_scale(metric(x), -30.0);
        axpy(acc, 16.0, metric(shifted(x, a, ha)));
        axpy(acc, 16.0, metric(shifted(x, a, -ha)));
        axpy(acc, -1.0, metric(shifted(x, a, 2.0 * ha)));
        axpy(acc, -1.0, metric(shifted(x, a, -2.0 * ha)));
        out[a][a] = mat_scale(acc, 1.0 / (12.0 * ha * ha));
        // mixed: product of two first-derivative stencils
        for (int b = a + 1; b < dim; ++b) {
            double hb = fd_step_second(x[b]);
            Mat m(dim, dim);
            for (int s = 0; s < 4; ++s)
                for (int t = 0; t < 4; ++t)
                    axpy(m, kD1W[s] * kD1W[t],
                         metric(shifted(x, a, kD1Off[s] * ha, b, kD1Off[t] * hb)));
            out[a][b] = mat_scale(m, 1.0 / (144.0 * ha * hb));
            out[b][a] = out[a][b];
        }
    }
    return out;
}

PointFrame point_frame(const Mat& g) {
    PointFrame f;
    f.g = g;
    Mat l = cholesky(g);
    f.basis = transpose(invert_lower(l));
    f.inverse = transpose(l);
    f.sqrt_det = 1.0;
    for (int i = 0; i < g.rows; ++i) f.sqrt_det *= l(i, i);
    return f;
}

std::vector<double> random_point(const MetricChart& chart, std::mt19937_64& rng) {
    std::vector<double> x(chart.dim);
    for (int a = 0; a < chart.dim; ++a) {
        double w = chart.hi[a] - chart.lo[a];
        std::uniform_real_distribution<double> u(chart.lo[a] + chart.sample_margin * w,
                                                 chart.hi[a] - chart.sample_margin * w);
        x[a] = u(rng);
    }
    return x;
}

double sphere_coordinate(int i, double r, const std::vector<double>& angles) {
    int n = static_cast<int>(angles.size());
    double v = r;
    for (int b = 0; b < std::min(i, n); ++b) v *= std::sin(angles[b]);
    if (i < n) v *= std::cos(angles[i]);
    return v;
}

double sphere_coordinate_d1(int i, double r, const std::vector<double>& angles, int a) {
    int n = static_cast<int>(angles.size());
    if (a > i || (a == i && i == n)) return 0.0;
    double v = r;
    for (int b = 0; b < std::min(i, n); ++b) v *= b == a ? std::cos(angles[b]) : std::sin(angles[b]);
    if (i < n) v *= a == i ? -std::sin(angles[i]) : std::cos(angles[i]);
    return v;
}

MetricChart flat_torus(int n, std::vector<double> periods) {
    if (periods.empty()) periods.assign(n, 2.0 * kPi);
    if (static_cast<int>(periods.size()) != n)
        throw DimensionError("flat_torus: periods arity mismatch");
    MetricChart c;
    c.dim = n;
    c.name = "flat_torus(" + std::to_string(n) + ")";
    c.lo.assign(n, 0.0);
    c.hi = periods;
    c.periodic.assign(n, 1);
    c.sample_margin = 0.0;
    c.metric = [n](const std::vector<double>&) { return Mat::identity(n); };
    c.d_metric = [n](const std::vector<double>&) { return std::vector<Mat>(n, Mat(n, n)); };
    c.dd_metric = [n](const std::vector<double>&) {
        return std::vector<std::vector<Mat>>(n, std::vector<Mat>(n, Mat(n, n)));
    };
    return c;
}

namespace {

// prod_{b < stop} sin^2(theta_b), skipping up to two axes
double prod_sin2(const std::vector<double>& x, int stop, int skip1 = -1, int skip2 = -1) {
    double v = 1.0;
    for (int b = 0; b < stop; ++b) {
        if (b == skip1 || b == skip2) continue;
        double s = std::sin(x[b]);
        v *= s * s;
    }
    return v;
}

} // namespace

MetricChart sphere(int n, double r) {
    MetricChart c;
    c.dim = n;
    c.name = "sphere(" + std::to_string(n) + ", r=" + std::to_string(r) + ")";
    c.lo.assign(n, kPoleMargin);
    c.hi.assign(n, kPi - kPoleMargin);
    c.lo[n - 1] = 0.0;
    c.hi[n - 1] = 2.0 * kPi;
    c.periodic.assign(n, 0);
    c.periodic[n - 1] = 1;
    c.sample_margin = 0.05;
    c.excluded_fraction = (n - 1) * kPoleMargin * kPoleMargin;
    double r2 = r * r;
    c.metric = [n, r2](const std::vector<double>& x) {
        Mat g(n, n);
        for (int a = 0; a < n; ++a) g(a, a) = r2 * prod_sin2(x, a);
        return g;
    };
    c.d_metric = [n, r2](const std::vector<double>& x) {
        std::vector<Mat> d(n, Mat(n, n));
        for (int a = 0; a < n; ++a)
            for (int cax = 0; cax < a; ++cax)
                d[cax](a, a) = 2.0 * r2 * std::sin(x[cax]) * std::cos(x[cax]) * prod_sin2(x, a, cax);
        return d;
    };
    c.dd_metric = [n, r2](const std::vector<double>& x) {
        std::vector<std::vector<Mat>> dd(n, std::vector<Mat>(n, Mat(n, n)));
        for (int a = 0; a < n; ++a)
            for (int cax = 0; cax < a; ++cax) {
                dd[cax][cax](a, a) = 2.0 * r2 * std::cos(2.0 * x[cax]) * prod_sin2(x, a, cax);
                for (int dax = 0; dax < cax; ++dax) {
                    double v = 4.0 * r2 * std::sin(x[cax]) * std::cos(x[cax]) * std::sin(x[dax]) *
                               std::cos(x[dax]) * prod_sin2(x, a, cax, dax);
                    dd[cax][dax](a, a) = v;
                    dd[dax][cax](a, a) = v;
                }
            }
        return dd;
    };
    return c;
}

MetricChart product_chart(const MetricChart& a, const MetricChart& b) {
    MetricChart c;
    int da = a.dim, db = b.dim, n = da + db;
    c.dim = n;
    c.name = "product(" + a.name + ", " + b.name + ")";
    c.lo = a.lo;
    c.lo.insert(c.lo.end(), b.lo.begin(), b.lo.end());
    c.hi = a.hi;
    c.hi.insert(c.hi.end(), b.hi.begin(), b.hi.end());
    c.periodic.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < da; ++i)
        c.periodic[i] = a.periodic.empty() ? 0 : a.periodic[i];
    for (int i = 0; i < db; ++i)
        c.periodic[da + i] = b.periodic.empty() ? 0 : b.periodic[i];
    c.sample_margin = std::max(a.sample_margin, b.sample_margin);
    c.excluded_fraction = a.excluded_fraction + b.excluded_fraction;
    auto split = [da, db](const std::vector<double>& x) {
        return std::pair<std::vector<double>, std::vector<double>>(
            std::vector<double>(x.begin(), x.begin() + da),
            std::vector<double>(x.begin() + da, x.begin() + da + db));
    };
    auto embed = [da, n](const Mat& ma, const Mat& mb) {
        Mat g(n, n);
        for (int i = 0; i < ma.rows; ++i)
            for (int j = 0; j < ma.rows; ++j) g(i, j) = ma(i, j);
        for (int i = 0; i < mb.rows; ++i)
            for (int j = 0; j < mb.rows; ++j) g(da + i, da + j) = mb(i, j);
        return g;
    };
    c.metric = [a, b, split, embed](const std::vector<double>& x) {
        auto [xa, xb] = split(x);
        return embed(a.metric(xa), b.metric(xb));
    };
    c.d_metric = [a, b, da, db, n, split, embed](const std::vector<double>& x) {
        auto [xa, xb] = split(x);
        std::vector<Mat> dda = a.d_metric_at(xa), ddb = b.d_metric_at(xb);
        std::vector<Mat> d(n, Mat(n, n));
        Mat zb(db, db), za(da, da);
        for (int i = 0; i < da; ++i) d[i] = embed(dda[i], zb);
        for (int i = 0; i < db; ++i) d[da + i] = embed(za, ddb[i]);
        return d;
    };
    c.dd_metric = [a, b, da, db, n, split, embed](const std::vector<double>& x) {
        auto [xa, xb] = split(x);
        auto dda = a.dd_metric_at(xa);
        auto ddb = b.dd_metric_at(xb);
        std::vector<std::vector<Mat>> dd(n, std::vector<Mat>(n, Mat(n, n)));
        Mat zb(db, db), za(da, da);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j) dd[i][j] = embed(dda[i][j], zb);
        for (int i = 0; i < db; ++i)
            for (int j = 0; j < db; ++j) dd[da + i][da + j] = embed(za, ddb[i][j]);
        return dd;
    };
    return c;
}

MetricChart conformal_flat(int n, const TrigScalar& u) {
    if (u.dim() != n) throw DimensionError("conformal_flat: scalar arity mismatch");
    MetricChart c;
    c.dim = n;
    c.name = "conformal_flat(" + std::to_string(n) + ")";
    c.lo.assign(n, 0.0);
    c.hi.assign(n, 2.0 * kPi);
    c.periodic.assign(n, 1);
    c.sample_margin = 0.0;
    c.metric = [n, u](const std::vector<double>& x) {
        return mat_scale(Mat::identity(n), std::exp(2.0 * u.value(x)));
    };
    c.d_metric = [n, u](const std::vector<double>& x) {
        double e = std::exp(2.0 * u.value(x));
        std::vector<Mat> d(n);
        for (int a = 0; a < n; ++a) d[a] = mat_scale(Mat::identity(n), 2.0 * u.d1(x, a) * e);
        return d;
    };
    c.dd_metric = [n, u](const std::vector<double>& x) {
        double e = std::exp(2.0 * u.value(x));
        std::vector<double> du(n);
        for (int a = 0; a < n; ++a) du[a] = u.d1(x, a);
        std::vector<std::vector<Mat>> dd(n, std::vector<Mat>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                dd[a][b] =
                    mat_scale(Mat::identity(n), (4.0 * du[a] * du[b] + 2.0 * u.d2(x, a, b)) * e);
        return dd;
    };
    return c;
}

MetricChart perturbed_sphere(int n, double r, double amplitude, std::uint64_t seed) {
    if (std::abs(amplitude) > 0.5)
        throw DimensionError("perturbed_sphere: amplitude must stay within 0.5 to keep g SPD");
    MetricChart c = sphere(n, r);
    c.name = "perturbed_sphere(" + std::to_string(n) + ", r=" + std::to_string(r) +
             ", amp=" + std::to_string(amplitude) + ", seed=" + std::to_string(seed) + ")";
    int na = n + 1; // ambient coordinates
    int pairs = na * (na + 1) / 2;
    std::mt19937_64 rng = substream(seed, "perturbed-sphere");
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> mdist(0, n);
    // |sum c_ij (1 + d_ij z/r)| <= 1, so the pullback stays below g in norm
    std::vector<double> coef(pairs), mod(pairs);
    std::vector<int> maxis(pairs);
    for (int t = 0; t < pairs; ++t) {
        coef[t] = 0.5 * u(rng) / pairs;
        mod[t] = u(rng);
        maxis[t] = mdist(rng);
    }
    auto base = c.metric;
    c.metric = [n, na, r, amplitude, coef, mod, maxis, base](const std::vector<double>& x) {
        Mat g = base(x);
        Mat j(na, n);
        for (int i = 0; i < na; ++i)
            for (int a = 0; a < n; ++a) j(i, a) = sphere_coordinate_d1(i, r, x, a);
        int t = 0;
        for (int i = 0; i < na; ++i)
            for (int k = i; k < na; ++k, ++t) {
                double w =
                    amplitude * coef[t] * (1.0 + mod[t] * sphere_coordinate(maxis[t], r, x) / r);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        g(a, b) += w * 0.5 * (j(i, a) * j(k, b) + j(k, a) * j(i, b));
            }
        return g;
    };
    c.d_metric = nullptr;
    c.dd_metric = nullptr;
    return c;
}

} // namespace gbc
