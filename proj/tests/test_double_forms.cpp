/// @file test_double_forms.cpp
/// @brief Fiber-level algebra of double forms checked against brute-force
///        oracles and closed-form identities.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gbc/double_form.hpp"
#include "gbc/errors.hpp"
#include "gbc/random_fields.hpp"
#include "oracles.hpp"

using namespace gbc;

namespace {
constexpr double kTolExact = 1e-12;

double rel_gap(const DoubleForm& a, const DoubleForm& b) {
    return (a - b).max_abs() / (1.0 + a.max_abs() + b.max_abs());
}
} // namespace

TEST_CASE("combinatorics: tables and signs") {
    CHECK(binom(6, 3) == 20);
    const IndexTable& t = index_table(4, 2);
    REQUIRE(t.masks.size() == 6);
    // lexicographic tuple order: 12, 13, 14, 23, 24, 34
    CHECK(t.masks[0] == 0b0011u);
    CHECK(t.masks[1] == 0b0101u);
    CHECK(t.masks[2] == 0b1001u);
    CHECK(t.masks[3] == 0b0110u);
    CHECK(t.masks[4] == 0b1010u);
    CHECK(t.masks[5] == 0b1100u);
    for (std::size_t i = 0; i < t.masks.size(); ++i) CHECK(t.rank[t.masks[i]] == (int)i);

    // e_3 ^ e_{1,2,4} needs two transpositions past 1,2
    CHECK(insert_sign(2, 0b1011u) == 1);
    CHECK(insert_sign(0, 0b0110u) == 1);
    CHECK(insert_sign(1, 0b0101u) == -1);
    // (2,4 | 1,3) as a permutation of (1,2,3,4) has sign +... count: 2,4,1,3 -> inversions (2,1),(4,1),(4,3) = 3
    CHECK(shuffle_sign(0b1010u, 0b1111u) == -1);

    auto splits = subset_splits(0b0111u, 2);
    CHECK(splits.size() == 3);
}

TEST_CASE("wedge: golden values and oracle agreement") {
    DoubleForm g2 = DoubleForm::metric(2);
    DoubleForm gg = wedge(g2, g2);
    CHECK(gg.coeff(0b11u, 0b11u) == doctest::Approx(2.0).epsilon(kTolExact));

    // one-sided forms: (e^1 x 1) . (1 x e^1) = e^1 x e^1
    DoubleForm a(3, 1, 0), b(3, 0, 1);
    a.set_coeff(0b001u, 0u, 1.0);
    b.set_coeff(0u, 0b001u, 1.0);
    DoubleForm ab = wedge(a, b);
    CHECK(ab.p() == 1);
    CHECK(ab.q() == 1);
    CHECK(ab.coeff(0b001u, 0b001u) == doctest::Approx(1.0));

    // degree overflow clamps to the zero form at degree n
    auto rng = substream(7, "wedge-overflow");
    DoubleForm w = random_symmetric_form(3, 2, rng);
    DoubleForm over = wedge(w, w);
    CHECK(over.p() == 3);
    CHECK(over.q() == 3);
    CHECK(over.max_abs() == 0.0);

    for (int n : {4, 5, 6}) {
        auto r2 = substream(11, "wedge-oracle");
        for (int trial = 0; trial < 5; ++trial) {
            DoubleForm x = random_symmetric_form(n, 2, r2);
            DoubleForm y = random_symmetric_form(n, 2, r2);
            DoubleForm xy = wedge(x, y);
            CHECK(rel_gap(xy, oracle::wedge_by_permutations(x, y)) < kTolExact);
            CHECK(rel_gap(xy, wedge(y, x)) < kTolExact); // commutes on even bidegrees
        }
        // mixed bidegrees against the oracle, including odd ones
        auto r3 = substream(12, "wedge-oracle-mixed");
        DoubleForm x = random_double_form(n, 1, 2, r3);
        DoubleForm y = random_double_form(n, 2, 1, r3);
        CHECK(rel_gap(wedge(x, y), oracle::wedge_by_permutations(x, y)) < kTolExact);
    }

    // associativity
    auto r4 = substream(13, "wedge-assoc");
    DoubleForm x = random_symmetric_form(6, 1, r4);
    DoubleForm y = random_symmetric_form(6, 2, r4);
    DoubleForm z = random_symmetric_form(6, 1, r4);
    CHECK(rel_gap(wedge(wedge(x, y), z), wedge(x, wedge(y, z))) < kTolExact);
}

TEST_CASE("contract: metric powers and adjointness") {
    for (int n : {3, 4, 5, 6}) {
        DoubleForm g = DoubleForm::metric(n);
        DoubleForm c1 = contract(g);
        CHECK(c1.at(0, 0) == doctest::Approx((double)n).epsilon(kTolExact));
        for (int m = 2; m <= std::min(4, n); ++m) {
            DoubleForm gm = wedge_power(g, m);
            DoubleForm lhs = contract(gm);
            DoubleForm rhs = wedge_power(g, m - 1) * (double)(m * (n - m + 1));
            CHECK(rel_gap(lhs, rhs) < kTolExact);
            CHECK(rel_gap(lhs, oracle::contract_power_by_sum(gm, 1)) < kTolExact);
        }
    }
    // full contraction c^2(g^2) = 2n(n-1)
    DoubleForm g4 = DoubleForm::metric(4);
    CHECK(contract_power(wedge(g4, g4), 2).at(0, 0) == doctest::Approx(24.0));

    // <g.w, t> = <w, c t>
    auto rng = substream(21, "contract-adjoint");
    for (int n : {4, 5}) {
        DoubleForm w = random_double_form(n, 1, 2, rng);
        DoubleForm t = random_double_form(n, 2, 3, rng);
        CHECK(inner(metric_mul(w), t) ==
              doctest::Approx(inner(w, contract(t))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(contract(DoubleForm(4, 2, 0)), DimensionError);
    // deep brute-force agreement on a random symmetric (2,2)
    auto r2 = substream(22, "contract-oracle");
    DoubleForm w = random_symmetric_form(5, 2, r2);
    CHECK(rel_gap(contract_power(w, 2), oracle::contract_power_by_sum(w, 2)) < kTolExact);
}

TEST_CASE("hodge star: involution, volume forms, inner product route") {
    for (int n : {2, 3, 4, 5, 6}) {
        DoubleForm one = DoubleForm::unit(n);
        DoubleForm vol = hodge_star(one);
        double nf = 1.0;
        for (int i = 2; i <= n; ++i) nf *= i;
        CHECK(rel_gap(vol, wedge_power(DoubleForm::metric(n), n) * (1.0 / nf)) < kTolExact);
        CHECK(hodge_star(vol).at(0, 0) == doctest::Approx(1.0));

        auto rng = substream(31, "star");
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q) {
                DoubleForm w = random_double_form(n, p, q, rng);
                int e = ((p + q) * (n - p - q)) % 2 ? -1 : 1;
                CHECK(rel_gap(hodge_star(hodge_star(w)), w * (double)e) < kTolExact);
            }
    }
    // g.w = *c*w and <w,t> = *(w . *t) = +- *(*w . t)
    auto rng = substream(32, "star-metric");
    for (int n : {3, 4, 5}) {
        DoubleForm w = random_double_form(n, 1, 1, rng);
        CHECK(rel_gap(metric_mul(w), hodge_star(contract(hodge_star(w)))) < kTolExact);
        DoubleForm t = random_double_form(n, 1, 1, rng);
        double ip = inner(w, t);
        CHECK(hodge_star(wedge(w, hodge_star(t))).at(0, 0) == doctest::Approx(ip).epsilon(1e-12));
        int p = 1, q = 1;
        int e = ((p + q) * (n - p - q)) % 2 ? -1 : 1;
        CHECK(e * hodge_star(wedge(hodge_star(w), t)).at(0, 0) ==
              doctest::Approx(ip).epsilon(1e-12));
    }
    CHECK(inner(DoubleForm::metric(4), DoubleForm::metric(4)) == doctest::Approx(4.0));
}

TEST_CASE("h_derivation: eigenbasis oracle and the derivation laws") {
    for (int n : {3, 4, 5, 6}) {
        auto rng = substream(41, "fh");
        DoubleForm h = random_symmetric_form(n, 1, rng);
        DoubleForm w = random_symmetric_form(n, 2, rng);
        DoubleForm fhw = h_derivation(h, w);
        CHECK(rel_gap(fhw, oracle::fh_by_eigenbasis(h, w)) < 1e-11);

        // F_g w = 2p w
        CHECK(rel_gap(h_derivation(DoubleForm::metric(n), w), w * 4.0) < kTolExact);

        // derivation rule on a product of curvature structures
        DoubleForm t = random_symmetric_form(n, 1, rng);
        if (n >= 6) {
            DoubleForm lhs = h_derivation(h, wedge(w, t).symmetrized());
            DoubleForm rhs = wedge(fhw, t) + wedge(w, h_derivation(h, t));
            CHECK(rel_gap(lhs, rhs.symmetrized()) < 1e-11);
        }

        // F_h(g^p) = 2p g^(p-1) h
        for (int p = 1; p <= std::min(3, n - 1); ++p) {
            DoubleForm gp = wedge_power(DoubleForm::metric(n), p);
            DoubleForm rhs = wedge_power(DoubleForm::metric(n), p - 1) * (2.0 * p);
            CHECK(rel_gap(h_derivation(h, gp), wedge(rhs, h)) < kTolExact);
        }

        // c^p F_h(w) = 2p <c^(p-1) w, h> for w in C^p
        double lhs = contract_power(h_derivation(h, w), 2).at(0, 0);
        CHECK(lhs == doctest::Approx(4.0 * inner(contract(w), h)).epsilon(1e-12));

        // self-adjointness
        DoubleForm w2 = random_symmetric_form(n, 2, rng);
        CHECK(inner(fhw, w2) == doctest::Approx(inner(w, h_derivation(h, w2))).epsilon(1e-12));

        // power rule F_h(w^k) = k w^(k-1) F_h(w)
        if (n >= 4) {
            DoubleForm w4 = wedge(w, w);
            DoubleForm lhs4 = h_derivation(h, w4.symmetrized());
            DoubleForm rhs4 = wedge(w, fhw) * 2.0;
            CHECK(rel_gap(lhs4, rhs4.symmetrized()) < 1e-11);
        }

        // top-degree: F_h acts by 2 tr(h)
        DoubleForm topw = wedge_power(DoubleForm::metric(n), n);
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += h.at(i, i);
        CHECK(rel_gap(h_derivation(h, topw), topw * (2.0 * tr)) < 1e-11);
    }

    // explicit (2,2) description through the associated (3,1) operator
    {
        int n = 4;
        auto rng = substream(42, "fh22");
        DoubleForm h = random_symmetric_form(n, 1, rng);
        auto r = substream(43, "fh22b");
        DoubleForm w = random_bianchi_structure(n, r).form;
        DoubleForm fhw = h_derivation(h, w);
        auto wbar = [&](int x, int y, int z, int u) { // w(x^y, z^u), 0-based
            return oracle::value_on_tuple(w, {x + 1, y + 1}, {z + 1, u + 1});
        };
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y)
                for (int z = 0; z < n; ++z)
                    for (int u = z + 1; u < n; ++u) {
                        double s = 0.0;
                        for (int m = 0; m < n; ++m) {
                            s += wbar(x, y, z, m) * h.at(m, u) - wbar(x, y, u, m) * h.at(m, z);
                            s += wbar(z, u, x, m) * h.at(m, y) - wbar(z, u, y, m) * h.at(m, x);
                        }
                        CHECK(oracle::value_on_tuple(fhw, {x + 1, y + 1}, {z + 1, u + 1}) ==
                              doctest::Approx(s).epsilon(1e-11));
                    }
    }

    DoubleForm bad(4, 1, 1);
    bad.at(0, 1) = 1.0; // not symmetric
    CHECK_THROWS_AS(h_derivation(bad, DoubleForm::metric(4)), DimensionError);
}

TEST_CASE("first Bianchi residual") {
    DoubleForm g = DoubleForm::metric(4);
    CHECK(first_bianchi_residual(wedge(g, g)) == doctest::Approx(0.0).epsilon(kTolExact));
    auto rng = substream(51, "bianchi");
    for (int n : {4, 5, 6}) {
        CHECK(first_bianchi_residual(random_bianchi_structure(n, rng).form) < 1e-12);
        DoubleForm generic = random_symmetric_form(n, 2, rng);
        CHECK(first_bianchi_residual(generic) > 1e-3);
        CHECK(make_curvature(generic).bianchi == BianchiFlag::violated);
        CHECK(make_curvature(random_bianchi_structure(n, rng).form).bianchi ==
              BianchiFlag::verified);
    }
}

TEST_CASE("sectional_value: constant curvature planes") {
    int n = 4;
    double kappa = 0.7;
    DoubleForm g = DoubleForm::metric(n);
    DoubleForm r = wedge(g, g) * (kappa / 2.0);
    CHECK(sectional_value(r, {{1, 0, 0, 0}, {0, 1, 0, 0}}) == doctest::Approx(kappa));
    // non-orthonormal spanning set of the same plane
    CHECK(sectional_value(r, {{2, 0, 0, 0}, {3, 5, 0, 0}}) == doctest::Approx(kappa));
    // a generic plane
    CHECK(sectional_value(r, {{1, 2, 0, 1}, {0, 1, -1, 2}}) == doctest::Approx(kappa));
    CHECK_THROWS_AS(sectional_value(r, {{1, 2, 0, 1}, {2, 4, 0, 2}}), NumericalError);
    // (1,1) evaluation: unit vector against the metric
    CHECK(sectional_value(g, {{0, 3, 0, 0}}) == doctest::Approx(1.0));
}

TEST_CASE("primitive decomposition") {
    // g^2 is pure trace: components (w_0, w_1, w_2) = (0, 0, n(n-1)-normalised scalar)
    for (int n : {4, 5, 6}) {
        DoubleForm g = DoubleForm::metric(n);
        auto comps = primitive_decompose(wedge(g, g));
        REQUIRE(comps.size() == 3);
        CHECK(comps[0].max_abs() < kTolExact);
        CHECK(comps[1].max_abs() < kTolExact);
        CHECK(comps[2].at(0, 0) == doctest::Approx(1.0));
    }
    auto rng = substream(61, "decompose");
    for (int n : {4, 5, 6}) {
        DoubleForm w = random_symmetric_form(n, 2, rng);
        auto comps = primitive_decompose(w);
        DoubleForm recon(n, 2, 2);
        std::vector<DoubleForm> terms;
        for (std::size_t j = 0; j < comps.size(); ++j) {
            DoubleForm t = comps[j];
            for (std::size_t k = 0; k < j; ++k) t = metric_mul(t);
            terms.push_back(t);
            recon += t;
        }
        CHECK(rel_gap(recon, w) < 1e-10);
        // tracelessness of every non-scalar component
        for (std::size_t j = 0; j + 1 < comps.size(); ++j)
            CHECK(contract(comps[j]).max_abs() < 1e-10 * (1.0 + w.max_abs()));
        // orthogonality of the graded pieces
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (std::size_t j = i + 1; j < terms.size(); ++j)
                CHECK(std::abs(inner(terms[i], terms[j])) < 1e-10 * (1.0 + w.norm() * w.norm()));
    }
    // the (1,1) component through the shortcut matches the full solve
    for (int n : {4, 5, 6}) {
        DoubleForm w = random_symmetric_form(n, 2, rng);
        auto comps = primitive_decompose(w);
        CHECK(rel_gap(traceless_ricci_component(w), comps[1]) < 1e-11);
    }
    CHECK_THROWS_AS(primitive_decompose(random_symmetric_form(3, 2, rng)), DimensionError);
}

TEST_CASE("debug dump golden file") {
    DoubleForm g = DoubleForm::metric(3);
    CHECK(debug_dump(wedge(g, g)) == "(1,2|1,2) 2\n(1,3|1,3) 2\n(2,3|2,3) 2\n");
    DoubleForm s = DoubleForm::unit(3) * -0.5;
    CHECK(debug_dump(s) == "(|) -0.5\n");
}

TEST_CASE("transform: orthogonal base changes preserve the algebra") {
    int n = 4;
    auto rng = substream(71, "transform");
    DoubleForm h = random_symmetric_form(n, 1, rng);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = h.at(i, j);
    std::vector<double> lam;
    Mat v;
    jacobi_eigen(m, lam, v); // orthogonal columns
    DoubleForm w = random_symmetric_form(n, 2, rng);
    DoubleForm t = random_symmetric_form(n, 2, rng);
    DoubleForm wv = transform(w, v);
    DoubleForm tv = transform(t, v);
    CHECK(inner(wv, tv) == doctest::Approx(inner(w, t)).epsilon(1e-11));
    CHECK(rel_gap(transform(wedge(w, t), v), wedge(wv, tv)) < 1e-11);
    CHECK(rel_gap(transform(contract(w), v), contract(wv)) < 1e-11);
    // round trip with the inverse basis
    CHECK(rel_gap(transform(wv, transpose(v)), w) < 1e-11);
}
