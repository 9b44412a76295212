// Times the OpenMP quadrature summation against the serial reference on
// the integrands the variation module runs, and checks that both routes
// return bitwise-identical sums. GBC_THREADS caps the worker count.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "gbc/chart.hpp"
#include "gbc/differential_ops.hpp"
#include "gbc/invariants.hpp"
#include "gbc/quadrature.hpp"
#include "gbc/random_fields.hpp"
#include "gbc/trig.hpp"

using namespace gbc;

namespace {

double time_best(int reps, const std::function<double()>& run, double& value) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        value = run();
        best = std::min(best,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count());
    }
    return best;
}

void bench_case(const char* name, const QuadratureAtlas& atlas,
                const std::function<double(const std::vector<double>&)>& f, int reps) {
    double v_par = 0.0, v_ser = 0.0;
    double t_ser = time_best(reps, [&] { return quad_sum_serial(atlas, f); }, v_ser);
    double t_par = time_best(reps, [&] { return quad_sum(atlas, f); }, v_par);
    std::printf("%-36s %8ld nodes  serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n",
                name, static_cast<long>(atlas.count), t_ser * 1e3, t_par * 1e3,
                t_ser / t_par, v_par == v_ser ? "bitwise equal" : "SUMS DIFFER");
    std::fflush(stdout);
}

} // namespace

int main() {
    std::printf("quadrature summation, %d worker(s)\n", thread_cap());

    // cheap integrand, many nodes: reduction overhead dominates
    MetricChart t3 = flat_torus(3);
    auto rng = substream(17, "bench-trig");
    TrigScalar u = TrigScalar::random(3, 3, 1.0, 3, rng);
    QuadratureAtlas cheap = make_atlas(t3, 24);
    bench_case("trig scalar on the 3-torus", cheap,
               [&](const std::vector<double>& x) { return u.value(x); }, 5);

    // curvature integrand: one finite-difference curvature per node
    MetricChart s3 = sphere(3, 1.0);
    QuadratureAtlas mid = make_atlas(s3, 10);
    bench_case("scalar invariant on the 3-sphere", mid,
               [&](const std::vector<double>& x) {
                   return gauss_bonnet_curvature(riemann(s3, x), 1) *
                          point_frame(s3.metric_at(x)).sqrt_det;
               },
               3);

    // heavy integrand in dimension 5: the second invariant per node
    MetricChart s5 = sphere(5, 1.0);
    QuadratureAtlas heavy = make_atlas(s5, 6);
    bench_case("second invariant on the 5-sphere", heavy,
               [&](const std::vector<double>& x) {
                   return gauss_bonnet_curvature(riemann(s5, x), 2) *
                          point_frame(s5.metric_at(x)).sqrt_det;
               },
               2);
    return 0;
}
