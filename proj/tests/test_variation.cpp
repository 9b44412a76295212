#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gbc/chart.hpp"
#include "gbc/differential_ops.hpp"
#include "gbc/errors.hpp"
#include "gbc/invariants.hpp"
#include "gbc/quadrature.hpp"
#include "gbc/random_fields.hpp"
#include "gbc/trig.hpp"
#include "gbc/variation.hpp"

using namespace gbc;

namespace {

constexpr double kPi = 3.141592653589793;

double trace_integral(const QuadratureAtlas& atlas, const MetricDeformation& def) {
    return quad_sum(atlas, [&](const std::vector<double>& x) {
        int n = def.base.dim;
        Mat g = def.base.metric_at(x);
        Mat ginv = spd_inverse(g);
        Mat h = def.direction(x);
        double tr = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tr += ginv(i, j) * h(i, j);
        return tr * std::sqrt(spd_det(g));
    });
}

double volume_slope(const MetricDeformation& def, int order, double step) {
    auto vol = [&](double t) { return chart_volume(make_atlas(deform(def, t), order)); };
    auto slope = [&](double t) { return (vol(t) - vol(-t)) / (2.0 * t); };
    return (4.0 * slope(step / 2.0) - slope(step)) / 3.0;
}

} // namespace

TEST_CASE("flat torus: zero invariant and stationary functional") {
    MetricChart t3 = flat_torus(3);
    QuadratureAtlas atlas = make_atlas(t3, 8);
    CHECK(std::abs(integrate_invariant(atlas, 1)) < 1e-14);

    MetricDeformation def = deform_random_torus(t3, 0.1, 21);
    VariationReport rep = verify_main_theorem(def, 1, 8);
    CHECK(std::abs(rep.fd_value) < 1e-6);      // T_2 of the flat metric vanishes
    CHECK(std::abs(rep.pairing_value) < 1e-14);
    CHECK(rep.abs_err < 1e-6);
}

TEST_CASE("volume derivative bookkeeping") {
    MetricDeformation torus_def = deform_random_torus(flat_torus(3), 0.2, 9);
    QuadratureAtlas torus_atlas = make_atlas(torus_def.base, 10);
    double fd_t = volume_slope(torus_def, 10, 1e-3);
    double half_trace_t = 0.5 * trace_integral(torus_atlas, torus_def);
    CHECK(fd_t == doctest::Approx(half_trace_t).epsilon(1e-8));

    MetricDeformation sph_def = deform_random_sphere(3, 1.0, 0.1, 4);
    QuadratureAtlas sph_atlas = make_atlas(sph_def.base, 10);
    double fd_s = volume_slope(sph_def, 10, 1e-3);
    double half_trace_s = 0.5 * trace_integral(sph_atlas, sph_def);
    CHECK(fd_s == doctest::Approx(half_trace_s).epsilon(1e-6));
}

TEST_CASE("round sphere closed forms") {
    // total second-order curvature of the unit two-sphere
    double h2_total = integrate_invariant(make_atlas(sphere(2, 1.0), 16), 1);
    CHECK(h2_total == doctest::Approx(4.0 * kPi).epsilon(1e-6));

    // deformation along g itself: both sides equal (1/2)(n-2k) * total
    MetricChart s3 = sphere(3, 1.0);
    MetricDeformation along_g = deform_metric_direction(
        s3, [s3](const std::vector<double>& x) { return s3.metric(x); });
    VariationReport rep = verify_main_theorem(along_g, 1, 12);
    double expected = 3.0 * kPi * kPi; // (1/2)(3-2) * h_2 vol = (1/2) * 3 * 2 pi^2
    CHECK(rep.fd_value == doctest::Approx(expected).epsilon(1e-5));
    CHECK(rep.pairing_value == doctest::Approx(expected).epsilon(1e-6));
    CHECK(rep.rel_err < 1e-5);

    // the same direction is purely a volume direction: projection kills it
    ProjectedDerivative proj = volume_projected_derivative(along_g, 1, 12);
    CHECK(proj.raw == doctest::Approx(expected).epsilon(1e-5));
    CHECK(std::abs(proj.projected) < 1e-5 * std::abs(proj.raw));
}

TEST_CASE("functional derivative matches gradient pairing on curved charts") {
    MetricDeformation sph = deform_random_sphere(3, 1.0, 0.08, 3);
    VariationReport rep_s = verify_main_theorem(sph, 1, 12);
    CHECK(rep_s.rel_err < 1e-3);

    // torus block gets a volume component so the pairing has real signal
    MetricDeformation tor = deform_random_torus(flat_torus(2), 0.05, 12);
    auto tor_dir = tor.direction;
    tor.direction = [tor_dir](const std::vector<double>& x) {
        Mat h = tor_dir(x);
        for (int i = 0; i < 2; ++i) h(i, i) += 0.25;
        return h;
    };
    MetricDeformation prod = deform_block(deform_random_sphere(2, 1.0, 0.05, 11), tor);
    VariationReport rep_p = verify_main_theorem(prod, 1, 10);
    CHECK(rep_p.rel_err < 1e-3);

    // a direction orthogonal to the gradient: the functional is stationary
    // up to the flux of the variational divergence terms through the
    // excised polar caps, an O(margin^2) boundary effect of the chart
    MetricDeformation frozen;
    frozen.base = flat_torus(2);
    frozen.direction = [](const std::vector<double>&) { return Mat(2, 2); };
    MetricDeformation cap_only = deform_block(deform_random_sphere(2, 1.0, 0.05, 11), frozen);
    VariationReport rep_c = verify_main_theorem(cap_only, 1, 10);
    CHECK(std::abs(rep_c.pairing_value) < 1e-12);
    CHECK(std::abs(rep_c.fd_value) < 5e-6);
}

TEST_CASE("pointwise curvature variation identity") {
    std::vector<double> xt = {0.4, 1.1, 2.0};
    MetricDeformation torus_def = deform_random_torus(flat_torus(3), 0.3, 6);
    CHECK(verify_lemma1(torus_def, xt) < 1e-5);

    std::vector<double> xs = {1.0, 1.2, 0.7};
    MetricChart s3 = sphere(3, 1.0);
    MetricDeformation along_g = deform_metric_direction(
        s3, [s3](const std::vector<double>& x) { return s3.metric(x); });
    CHECK(verify_lemma1(along_g, xs) < 1e-6); // R(g+tg) is linear in t

    MetricDeformation sph = deform_random_sphere(3, 1.0, 0.2, 5);
    CHECK(verify_lemma1(sph, xs) < 1e-4);
}

TEST_CASE("conformal direction reduces to the trace pairing") {
    MetricChart s3 = sphere(3, 1.0);
    QuadratureAtlas atlas = make_atlas(s3, 12);
    auto rng = substream(13, "conformal-factor");
    TrigScalar f = TrigScalar::random(3, 2, 0.4, 1, rng);
    // keep a constant component: a purely oscillatory factor pairs to
    // nearly zero and would only probe the cap-flux floor
    auto factor = [f](const std::vector<double>& x) { return 0.3 + f.value(x); };
    VariationReport rep = verify_conformal_variation(atlas, factor, 1);
    CHECK(rep.rel_err < 1e-3);

    // remove the weighted mean: the derivative must vanish
    double vol = chart_volume(atlas);
    double mean = quad_sum(atlas, [&](const std::vector<double>& x) {
                      return f.value(x) * std::sqrt(spd_det(s3.metric_at(x)));
                  }) / vol;
    auto centered = [f, mean](const std::vector<double>& x) { return f.value(x) - mean; };
    VariationReport rep0 = verify_conformal_variation(atlas, centered, 1);
    double scale = quad_sum(atlas, [&](const std::vector<double>& x) {
        return std::abs(centered(x)) * gauss_bonnet_curvature(riemann(s3, x), 1) *
               std::sqrt(spd_det(s3.metric_at(x)));
    });
    CHECK(std::abs(rep0.pairing_value) < 1e-6 * scale);
    CHECK(std::abs(rep0.fd_value) < 1e-4 * scale);
}

TEST_CASE("total curvature is deformation invariant in dimension two") {
    GbInvarianceReport rep = verify_gb_invariance(2, 0.1, 5, 16);
    CHECK(rep.values.size() == 3);
    CHECK(rep.max_rel_deviation < 1e-4);
    CHECK(rep.sphere_normalization == doctest::Approx(1.0).epsilon(1e-6));

    GbInvarianceReport flat_rep = verify_gb_invariance(2, 0.0, 5, 16);
    CHECK(flat_rep.max_rel_deviation < 1e-8);
}

TEST_CASE("einstein survey rows match closed forms") {
    EinsteinSuiteReport rep = einstein_examples_suite();
    REQUIRE(rep.rows.size() == 10);
    // spheres: T_2k = lambda g with lambda = (1/2)^k (n-1)!(n-2k)/(n-2k)!
    CHECK(rep.rows[0].lambda == doctest::Approx(1.0).epsilon(1e-9)); // S^3, k=1
    CHECK(rep.rows[1].lambda == doctest::Approx(3.0).epsilon(1e-9)); // S^4, k=1
    CHECK(rep.rows[2].lambda == doctest::Approx(6.0).epsilon(1e-9)); // S^5, k=1
    CHECK(rep.rows[3].lambda == doctest::Approx(6.0).epsilon(1e-9)); // S^5, k=2
    for (int i = 0; i < 4; ++i) CHECK(rep.rows[i].residual < 1e-8);
    // flat torus: everything vanishes
    CHECK(rep.rows[4].tensor_norm < 1e-12);
    CHECK(rep.rows[5].tensor_norm < 1e-12);
    // S^3 x T^3: T_2 = g_A + 3 g_B is not Einstein, T_4 dies on the 3-dim factor
    CHECK(rep.rows[6].lambda == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(rep.rows[6].residual == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.rows[7].tensor_norm < 1e-8);
    // S^2 x S^2: Einstein for k=1, T_4 identically zero at 2k = n
    CHECK(rep.rows[8].lambda == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.rows[8].residual < 1e-8);
    CHECK(rep.rows[9].tensor_norm < 1e-10);
}

TEST_CASE("input validation") {
    MetricChart t3 = flat_torus(3);
    CHECK_THROWS_AS(integrate_invariant(make_atlas(t3, 4), 2), DimensionError);
    CHECK_THROWS_AS(verify_gb_invariance(3, 0.1, 1, 4), DimensionError);
    CHECK_THROWS_AS(
        verify_conformal_variation(make_atlas(flat_torus(2), 4),
                                   [](const std::vector<double>&) { return 1.0; }, 1),
        DimensionError);

    MetricDeformation bad = deform_metric_direction(t3, [](const std::vector<double>& x) {
        Mat h(3, 3);
        h(0, 1) = 1.0 + x[0] * 0.0;
        return h; // not symmetric
    });
    CHECK_THROWS_AS(deformation_frame(bad, {0.1, 0.2, 0.3}), NumericalError);
}
