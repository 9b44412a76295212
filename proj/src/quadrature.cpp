#include "gbc/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gbc/errors.hpp"

namespace gbc {

namespace {

constexpr double kPi = 3.141592653589793;

// Legendre P_m and P_m' at x by the three-term recurrence.
std::pair<double, double> legendre_jet(int m, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double d = m * (x * p1 - p0) / (x * x - 1.0);
    return {p1, d};
}

} // namespace

GaussRule gauss_legendre(int order) {
    if (order < 1) throw DimensionError("gauss_legendre: order must be positive");
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    if (order == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double d = 0.0;
        for (int it = 0; it < 64; ++it) {
            auto [p, dp] = legendre_jet(order, x);
            d = dp;
            double step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-15) {
                d = legendre_jet(order, x).second;
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * d * d);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[half - 1] = 0.0;
    return rule;
}

QuadratureAtlas make_atlas(const MetricChart& chart, int order) {
    GaussRule rule = gauss_legendre(order);
    int dim = chart.dim;
    QuadratureAtlas atlas;
    atlas.chart = chart;
    atlas.order = order;
    atlas.excluded_measure = chart.excluded_fraction;
    atlas.count = 1;
    for (int a = 0; a < dim; ++a) atlas.count *= static_cast<std::size_t>(order);
    atlas.coords.resize(atlas.count * dim);
    atlas.weights.resize(atlas.count);
    std::vector<std::vector<double>> axis_x(dim), axis_w(dim);
    for (int a = 0; a < dim; ++a) {
        axis_x[a].resize(order);
        axis_w[a].resize(order);
        double width = chart.hi[a] - chart.lo[a];
        bool uniform = !chart.periodic.empty() && chart.periodic[a] != 0;
        for (int i = 0; i < order; ++i) {
            if (uniform) {
                axis_x[a][i] = chart.lo[a] + (i + 0.5) * width / order;
                axis_w[a][i] = width / order;
            } else {
                axis_x[a][i] = 0.5 * (chart.hi[a] + chart.lo[a]) + 0.5 * width * rule.nodes[i];
                axis_w[a][i] = 0.5 * width * rule.weights[i];
            }
        }
    }
    std::vector<int> idx(dim, 0);
    for (std::size_t node = 0; node < atlas.count; ++node) {
        double w = 1.0;
        for (int a = 0; a < dim; ++a) {
            atlas.coords[node * dim + a] = axis_x[a][idx[a]];
            w *= axis_w[a][idx[a]];
        }
        atlas.weights[node] = w;
        for (int a = dim - 1; a >= 0; --a) {
            if (++idx[a] < order) break;
            idx[a] = 0;
        }
    }
    return atlas;
}

int thread_cap() {
#ifdef _OPENMP
    int cap = omp_get_max_threads();
#else
    int cap = 1;
#endif
    if (const char* env = std::getenv("GBC_THREADS")) {
        int v = std::atoi(env);
        if (v > 0 && v < cap) cap = v;
    }
    return cap;
}

double quad_sum(const QuadratureAtlas& atlas,
                const std::function<double(const std::vector<double>&)>& f) {
    const int dim = atlas.chart.dim;
    const long long count = static_cast<long long>(atlas.count);
    std::vector<double> terms(atlas.count);
    std::string failure; // exceptions must not unwind out of the parallel region
#pragma omp parallel num_threads(thread_cap())
    {
        std::vector<double> x(dim);
#pragma omp for schedule(static)
        for (long long i = 0; i < count; ++i) {
            x.assign(atlas.coords.begin() + i * dim, atlas.coords.begin() + (i + 1) * dim);
            try {
                terms[i] = atlas.weights[i] * f(x);
            } catch (const std::exception& e) {
#pragma omp critical
                if (failure.empty()) {
                    failure = std::string(e.what()) + " [node";
                    for (int a = 0; a < dim; ++a)
                        failure += (a ? ", " : " (") + std::to_string(x[a]);
                    failure += ")]";
                }
            }
        }
    }
    if (!failure.empty()) throw NumericalError("quad_sum: " + failure);
    double acc = 0.0;
    for (std::size_t i = 0; i < atlas.count; ++i) acc += terms[i];
    return acc;
}

double quad_sum_serial(const QuadratureAtlas& atlas,
                       const std::function<double(const std::vector<double>&)>& f) {
    const int dim = atlas.chart.dim;
    std::vector<double> x(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < atlas.count; ++i) {
        x.assign(atlas.coords.begin() + i * dim, atlas.coords.begin() + (i + 1) * dim);
        acc += atlas.weights[i] * f(x);
    }
    return acc;
}

double chart_volume(const QuadratureAtlas& atlas) {
    const MetricChart& chart = atlas.chart;
    return quad_sum(atlas, [&chart](const std::vector<double>& x) {
        return std::sqrt(spd_det(chart.metric_at(x)));
    });
}

} // namespace gbc
