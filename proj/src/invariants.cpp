#include "gbc/invariants.hpp"

#include <cmath>

#include "gbc/errors.hpp"

namespace gbc {

namespace {

constexpr double kRouteTol = 1e-10;

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

void require_curvature_input(const CurvatureStructure& r, int k, const char* who) {
    if (r.degree() != 2) throw DimensionError(std::string(who) + ": R must be a (2,2) structure");
    if (k < 1 || 2 * k > r.n()) throw DimensionError(std::string(who) + ": needs 2 <= 2k <= n");
}

void check_routes(double gap, double scale, const char* who) {
    if (gap > kRouteTol * (1.0 + scale))
        throw NumericalError(std::string(who) + ": dual evaluation routes disagree");
}

} // namespace

double gauss_bonnet_curvature(const CurvatureStructure& r, int k) {
    require_curvature_input(r, k, "gauss_bonnet_curvature");
    int n = r.n();
    DoubleForm rk = wedge_power(r.form, k);
    DoubleForm top = wedge(wedge_power(DoubleForm::metric(n), n - 2 * k), rk);
    double via_star = hodge_star(top).at(0, 0) / factorial(n - 2 * k);
    double via_contraction = contract_power(rk, 2 * k).at(0, 0) / factorial(2 * k);
    check_routes(std::abs(via_star - via_contraction), std::abs(via_star) + std::abs(via_contraction),
                 "gauss_bonnet_curvature");
    return via_star;
}

CurvatureStructure lovelock_tensor(const CurvatureStructure& r, int k) {
    require_curvature_input(r, k, "lovelock_tensor");
    int n = r.n();
    DoubleForm rk = wedge_power(r.form, k);
    double h2k = gauss_bonnet_curvature(r, k);
    DoubleForm via_trace = DoubleForm::metric(n) * h2k -
                           contract_power(rk, 2 * k - 1) * (1.0 / factorial(2 * k - 1));
    if (2 * k == n) {
        check_routes(via_trace.max_abs(), rk.max_abs(), "lovelock_tensor");
        return CurvatureStructure{DoubleForm(n, 1, 1), BianchiFlag::verified};
    }
    DoubleForm via_star =
        hodge_star(wedge(wedge_power(DoubleForm::metric(n), n - 2 * k - 1), rk)) *
        (1.0 / factorial(n - 2 * k - 1));
    check_routes((via_star - via_trace).max_abs(), via_star.max_abs() + via_trace.max_abs(),
                 "lovelock_tensor");
    return CurvatureStructure{via_star.symmetrized(), BianchiFlag::verified};
}

CurvatureStructure pq_curvature_tensor(const CurvatureStructure& r, int p, int q) {
    if (r.degree() != 2) throw DimensionError("pq_curvature_tensor: R must be a (2,2) structure");
    int n = r.n();
    if (p < 0 || q < 1 || p + 2 * q > n)
        throw DimensionError("pq_curvature_tensor: needs p >= 0, q >= 1, p + 2q <= n");
    DoubleForm body = wedge(wedge_power(DoubleForm::metric(n), n - 2 * q - p),
                            wedge_power(r.form, q));
    DoubleForm out = hodge_star(body) * (1.0 / factorial(n - 2 * q - p));
    return CurvatureStructure{out.symmetrized(), BianchiFlag::unchecked};
}

InvariantBundle invariant_bundle(const CurvatureStructure& r, int k) {
    require_curvature_input(r, k, "invariant_bundle");
    InvariantBundle b;
    b.n = r.n();
    b.k = k;
    b.h2k = gauss_bonnet_curvature(r, k);
    b.t2k = lovelock_tensor(r, k);
    DoubleForm rk = wedge_power(r.form, k);
    b.generalized_ricci = CurvatureStructure{
        (contract_power(rk, 2 * k - 1) * (1.0 / factorial(2 * k - 1))).symmetrized(),
        BianchiFlag::verified};
    return b;
}

EinsteinDeviation einstein_deviation(const CurvatureStructure& r, int k) {
    require_curvature_input(r, k, "einstein_deviation");
    int n = r.n();
    CurvatureStructure t = lovelock_tensor(r, k);
    EinsteinDeviation dev;
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += t.form.at(i, i);
    dev.lambda = tr / n;
    dev.residual = (t.form - dev.lambda * DoubleForm::metric(n)).max_abs();
    if (2 * k < n) {
        DoubleForm rk = wedge_power(r.form, k);
        DoubleForm w1 = (2 * k <= n - 2 * k) ? primitive_decompose(rk)[2 * k - 1]
                                             : traceless_ricci_component(rk);
        dev.ricci_part_norm = w1.max_abs();
        dev.ricci_part_defined = true;
    }
    return dev;
}

} // namespace gbc
