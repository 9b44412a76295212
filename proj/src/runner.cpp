#include "gbc/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "gbc/differential_ops.hpp"
#include "gbc/errors.hpp"
#include "gbc/invariants.hpp"
#include "gbc/quadrature.hpp"
#include "gbc/random_fields.hpp"
#include "gbc/trig.hpp"
#include "gbc/variation.hpp"

namespace gbc {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = 3.141592653589793;

double rel_gap(const DoubleForm& a, const DoubleForm& b) {
    DoubleForm d = a;
    d -= b;
    return d.max_abs() / std::max({1.0, a.max_abs(), b.max_abs()});
}

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

void guarded(RunReport& rep, std::string name, std::string anchor, double tol,
             const std::function<void(CheckRecord&)>& body) {
    CheckRecord rec;
    rec.name = std::move(name);
    rec.anchor = std::move(anchor);
    rec.tolerance = tol;
    try {
        body(rec);
    } catch (const std::exception& e) {
        rec.pass = false;
        rec.error = e.what();
        rep.breakdown = true;
    }
    rep.checks.push_back(rec);
}

// ---- invariants ----------------------------------------------------------

void run_invariants(RunReport& rep, const Manifest& m) {
    MetricChart chart = manifest_chart(m.manifold);
    int n = chart.dim;
    auto rng = substream(m.numeric.seed, "invariant-points");
    std::vector<std::vector<double>> points;
    int count = std::min(m.numeric.trials, 16);
    for (int i = 0; i < count; ++i) points.push_back(random_point(chart, rng));

    for (int k : m.k) {
        std::string suffix = " (k=" + std::to_string(k) + ")";
        guarded(rep, "curvature invariant" + suffix,
                "scalar 2k-curvature; the metric-power and full-contraction assemblies are "
                "cross-checked on every evaluation",
                m.numeric.tolerance, [&](CheckRecord& rec) {
                    double lo = 0.0, hi = 0.0;
                    bool first = true;
                    for (const auto& x : points) {
                        double h = gauss_bonnet_curvature(riemann(chart, x), k);
                        lo = first ? h : std::min(lo, h);
                        hi = first ? h : std::max(hi, h);
                        first = false;
                    }
                    rec.values = {{"min", lo}, {"max", hi}};
                    rec.pass = true;
                });
        guarded(rep, "lovelock trace identity" + suffix,
                "the trace of the 2k Einstein-Lovelock tensor equals (n-2k) times the scalar "
                "2k-curvature",
                m.numeric.tolerance, [&](CheckRecord& rec) {
                    double worst = 0.0;
                    for (const auto& x : points) {
                        InvariantBundle b = invariant_bundle(riemann(chart, x), k);
                        double tr = contract(b.t2k.form).at(0, 0);
                        worst = std::max(worst, rel_gap(tr, (n - 2 * k) * b.h2k));
                    }
                    rec.values = {{"max_rel_gap", worst}};
                    rec.pass = worst <= rec.tolerance;
                });
        guarded(rep, "einstein deviation" + suffix,
                "distance of the Lovelock tensor from a metric multiple (informational)", 0.0,
                [&](CheckRecord& rec) {
                    double residual = 0.0, ricci = 0.0, lambda = 0.0;
                    for (const auto& x : points) {
                        EinsteinDeviation d = einstein_deviation(riemann(chart, x), k);
                        lambda = d.lambda;
                        residual = std::max(residual, d.residual);
                        ricci = std::max(ricci, d.ricci_part_norm);
                    }
                    rec.values = {{"lambda", lambda},
                                  {"max_residual", residual},
                                  {"ricci_part_norm", ricci}};
                    rec.pass = true;
                });
    }
}

// ---- verify-identities ----------------------------------------------------

void run_identities(RunReport& rep, const Manifest& m) {
    int n = m.n;
    double tol = m.numeric.tolerance;
    int trials = m.numeric.trials;
    DoubleForm g = DoubleForm::metric(n);

    guarded(rep, "contraction of metric powers",
            "c(g^m) = m (n-m+1) g^(m-1) for every power", tol, [&](CheckRecord& rec) {
                double worst = 0.0;
                for (int mm = 1; mm <= n; ++mm)
                    worst = std::max(worst, rel_gap(contract(wedge_power(g, mm)),
                                                    wedge_power(g, mm - 1) *
                                                        (mm * double(n - mm + 1))));
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });

    guarded(rep, "metric wedge vs contraction",
            "c(g w) = g c(w) + (n-p-q) w on every bidegree", tol, [&](CheckRecord& rec) {
                auto rng = substream(m.numeric.seed, "identity-commutator");
                double worst = 0.0;
                for (int t = 0; t < trials; ++t)
                    for (int p = 1; p < n; ++p)
                        for (int q = 1; q < n; ++q) {
                            DoubleForm w = random_double_form(n, p, q, rng);
                            DoubleForm lhs = contract(wedge(g, w));
                            DoubleForm rhs = wedge(g, contract(w)) + w * double(n - p - q);
                            worst = std::max(worst, rel_gap(lhs, rhs));
                        }
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });

    guarded(rep, "contraction adjoint to metric wedge",
            "<c w, t> = <w, g t> pointwise on the fiber", tol, [&](CheckRecord& rec) {
                auto rng = substream(m.numeric.seed, "identity-adjoint");
                double worst = 0.0;
                for (int t = 0; t < trials; ++t)
                    for (int p = 1; p <= n; ++p)
                        for (int q = 1; q <= n; ++q) {
                            DoubleForm w = random_double_form(n, p, q, rng);
                            DoubleForm th = random_double_form(n, p - 1, q - 1, rng);
                            worst = std::max(worst,
                                             rel_gap(inner(contract(w), th), inner(w, wedge(g, th))));
                        }
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });

    guarded(rep, "hodge star involution and pairing",
            "** = (-1)^((p+q)(n-p-q)) and <w,t> = *(w . *t)", tol, [&](CheckRecord& rec) {
                auto rng = substream(m.numeric.seed, "identity-star");
                double worst = 0.0;
                for (int t = 0; t < trials; ++t)
                    for (int p = 0; p <= n; ++p)
                        for (int q = 0; q <= n; ++q) {
                            DoubleForm w = random_double_form(n, p, q, rng);
                            int e = ((p + q) * (n - p - q)) % 2 ? -1 : 1;
                            worst = std::max(worst,
                                             rel_gap(hodge_star(hodge_star(w)), w * double(e)));
                            DoubleForm th = random_double_form(n, p, q, rng);
                            worst = std::max(
                                worst, rel_gap(inner(w, th),
                                               hodge_star(wedge(w, hodge_star(th))).at(0, 0)));
                        }
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });

    guarded(rep, "derivation self-adjointness",
            "the derivation induced by a symmetric h is self-adjoint for the fiber inner product",
            tol, [&](CheckRecord& rec) {
                auto rng = substream(m.numeric.seed, "identity-derivation-adjoint");
                double worst = 0.0;
                for (int t = 0; t < trials; ++t)
                    for (int p = 1; p < n; ++p) {
                        DoubleForm h = random_symmetric_form(n, 1, rng);
                        DoubleForm a = random_symmetric_form(n, p, rng);
                        DoubleForm b = random_symmetric_form(n, p, rng);
                        worst = std::max(worst, rel_gap(inner(h_derivation(h, a), b),
                                                        inner(a, h_derivation(h, b))));
                    }
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });

    guarded(rep, "derivation product rule",
            "the h-derivation is a derivation of the exterior product", tol,
            [&](CheckRecord& rec) {
                auto rng = substream(m.numeric.seed, "identity-derivation-leibniz");
                double worst = 0.0;
                for (int t = 0; t < trials; ++t) {
                    DoubleForm h = random_symmetric_form(n, 1, rng);
                    DoubleForm a = random_symmetric_form(n, 1, rng);
                    DoubleForm b = random_symmetric_form(n, 1, rng);
                    DoubleForm lhs = h_derivation(h, wedge(a, b));
                    DoubleForm rhs = wedge(h_derivation(h, a), b) + wedge(a, h_derivation(h, b));
                    worst = std::max(worst, rel_gap(lhs, rhs));
                }
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });

    guarded(rep, "derivation of metric powers", "F_h(g^m) = 2m g^(m-1) h", tol,
            [&](CheckRecord& rec) {
                auto rng = substream(m.numeric.seed, "identity-derivation-powers");
                double worst = 0.0;
                for (int t = 0; t < trials; ++t) {
                    DoubleForm h = random_symmetric_form(n, 1, rng);
                    for (int mm = 1; mm <= n; ++mm)
                        worst = std::max(
                            worst, rel_gap(h_derivation(h, wedge_power(g, mm)),
                                           wedge(wedge_power(g, mm - 1), h) * (2.0 * mm)));
                }
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });

    guarded(rep, "first Bianchi closure under products",
            "products of structures satisfying the first Bianchi identity satisfy it again", tol,
            [&](CheckRecord& rec) {
                auto rng = substream(m.numeric.seed, "identity-bianchi");
                double worst = 0.0;
                for (int t = 0; t < trials; ++t) {
                    CurvatureStructure r1 = random_bianchi_structure(n, rng);
                    worst = std::max(worst, first_bianchi_residual(r1.form) /
                                                std::max(1.0, r1.form.max_abs()));
                    if (n >= 4) {
                        CurvatureStructure r2 = random_bianchi_structure(n, rng);
                        DoubleForm w = wedge(r1.form, r2.form);
                        worst = std::max(worst,
                                         first_bianchi_residual(w) / std::max(1.0, w.max_abs()));
                    }
                }
                rec.values = {{"max_rel_gap", worst}};
                rec.pass = worst <= tol;
            });
}

// ---- variation ------------------------------------------------------------

MetricDeformation default_direction(const json& manifold, const NumericOptions& num) {
    std::string catalog = manifold.at("catalog").get<std::string>();
    if (catalog == "flat_torus")
        return deform_random_torus(manifest_chart(manifold), num.amplitude, num.seed);
    if (catalog == "sphere")
        return deform_random_sphere(manifold.at("n").get<int>(),
                                    manifold.contains("r") ? manifold.at("r").get<double>() : 1.0,
                                    num.amplitude, num.seed);
    if (catalog == "product")
        return deform_block(default_direction(manifold.at("a"), num),
                            default_direction(manifold.at("b"), num));
    if (catalog == "conformal_flat") {
        MetricChart chart = manifest_chart(manifold);
        auto rng = substream(num.seed, "conformal-direction");
        TrigScalar f = TrigScalar::random(chart.dim, 2, num.amplitude, 2, rng);
        return deform_conformal(chart, [f](const std::vector<double>& x) { return f.value(x); });
    }
    if (catalog == "perturbed_sphere") {
        // move toward an independently seeded bump of the same size: the
        // direction is a difference of two pullback metrics and stays
        // bounded at the poles
        MetricChart chart = manifest_chart(manifold);
        json twin = manifold;
        twin["seed"] = (manifold.contains("seed") ? manifold.at("seed").get<std::uint64_t>() : 0) + 1;
        MetricChart target = manifest_chart(twin);
        return deform_metric_direction(chart, [chart, target](const std::vector<double>& x) {
            return mat_add(target.metric(x), mat_scale(chart.metric(x), -1.0));
        });
    }
    throw DimensionError("default_direction: unknown catalog id '" + catalog + "'");
}

void run_variation(RunReport& rep, const Manifest& m) {
    MetricChart chart = manifest_chart(m.manifold);
    int n = chart.dim;
    int order = m.numeric.quad_order;
    for (int k : m.k) {
        std::string suffix = " (k=" + std::to_string(k) + ")";
        guarded(rep, "derivative matches gradient pairing" + suffix,
                "first variation of the total 2k-curvature equals half the L2 pairing with the "
                "Einstein-Lovelock tensor",
                m.numeric.tolerance, [&](CheckRecord& rec) {
                    MetricDeformation def = default_direction(m.manifold, m.numeric);
                    VariationReport v = verify_main_theorem(def, k, order, m.numeric.fd_step);
                    rec.values = {{"fd_derivative", v.fd_value},
                                  {"gradient_pairing", v.pairing_value},
                                  {"abs_err", v.abs_err},
                                  {"rel_err", v.rel_err}};
                    rec.pass = v.rel_err <= rec.tolerance;
                });
        guarded(rep, "derivative along the metric" + suffix,
                "along g the derivative reduces to (n-2k)/2 times the total curvature",
                m.numeric.tolerance, [&](CheckRecord& rec) {
                    MetricChart base = chart;
                    MetricDeformation along_g = deform_metric_direction(
                        base, [base](const std::vector<double>& x) { return base.metric(x); });
                    ProjectedDerivative proj =
                        volume_projected_derivative(along_g, k, order, m.numeric.fd_step);
                    double pairing = gradient_pairing(along_g, k, order);
                    double closed =
                        0.5 * (n - 2 * k) * integrate_invariant(make_atlas(base, order), k);
                    double rel = std::abs(proj.raw - pairing) /
                                 std::max({std::abs(proj.raw), std::abs(pairing), kRelErrFloor});
                    rec.values = {{"fd_derivative", proj.raw},
                                  {"gradient_pairing", pairing},
                                  {"closed_form", closed},
                                  {"rel_err", rel},
                                  {"volume_projected", proj.projected}};
                    rec.pass = rel <= rec.tolerance &&
                               rel_gap(pairing, closed) <= rec.tolerance &&
                               std::abs(proj.projected) <=
                                   rec.tolerance * std::max(1.0, std::abs(proj.raw));
                });
    }
}

// ---- gauss-bonnet ----------------------------------------------------------

double round_sphere_total(int n) {
    // h_n * vol(S^n): h_n = n!/2^(n/2) at curvature one
    double h = 1.0;
    for (int i = 2; i <= n; ++i) h *= i;
    for (int i = 0; i < n / 2; ++i) h *= 0.5;
    double vol = 0.0;
    if (n == 2) vol = 4.0 * kPi;
    if (n == 4) vol = 8.0 * kPi * kPi / 3.0;
    if (n == 6) vol = 16.0 * kPi * kPi * kPi / 15.0;
    return h * vol;
}

void run_gauss_bonnet(RunReport& rep, const Manifest& m) {
    double amplitude = m.numeric.amplitude;
    guarded(rep, "round sphere total curvature",
            "total top-order curvature of the round even-dimensional sphere matches the closed "
            "form",
            m.numeric.tolerance, [&](CheckRecord& rec) {
                double value =
                    integrate_invariant(make_atlas(sphere(m.n, 1.0), m.numeric.quad_order), m.n / 2);
                double expected = round_sphere_total(m.n);
                rec.values = {{"value", value},
                              {"expected", expected},
                              {"rel_gap", rel_gap(value, expected)}};
                rec.pass = rel_gap(value, expected) <= rec.tolerance;
            });
    guarded(rep, "deformation invariance",
            "the total top-order curvature does not move under metric deformation",
            m.numeric.tolerance, [&](CheckRecord& rec) {
                GbInvarianceReport inv =
                    verify_gb_invariance(m.n, amplitude, m.numeric.seed, m.numeric.quad_order);
                rec.values = {{"amplitude", amplitude},
                              {"round", inv.values.at(0)},
                              {"deformed_1", inv.values.at(1)},
                              {"deformed_2", inv.values.at(2)},
                              {"max_rel_deviation", inv.max_rel_deviation}};
                rec.pass = inv.max_rel_deviation <= rec.tolerance;
            });
}

// ---- einstein ---------------------------------------------------------------

void run_einstein(RunReport& rep, const Manifest& m) {
    struct Expected {
        double lambda;
        double residual;
    };
    // closed forms for the suite rows, in suite order
    const std::vector<Expected> expected = {
        {1.0, 0.0}, {3.0, 0.0}, {6.0, 0.0}, {6.0, 0.0}, // spheres n=3,4,5 (k=1), n=5 (k=2)
        {0.0, 0.0}, {0.0, 0.0},                         // flat torus k=1,2
        {2.0, 1.0}, {0.0, 0.0},                         // S^3 x T^3: k=1 not Einstein, k=2 zero
        {1.0, 0.0}, {0.0, 0.0},                         // S^2 x S^2: k=1 Einstein, k=2 top order
    };
    guarded(rep, "worked example suite",
            "constant-curvature and product examples: proportionality factors and the "
            "non-Einstein counterexample",
            m.numeric.tolerance, [&](CheckRecord& rec) {
                EinsteinSuiteReport suite = einstein_examples_suite();
                if (suite.rows.size() != expected.size())
                    throw NumericalError("einstein suite: unexpected row count");
                rec.pass = true;
                for (std::size_t i = 0; i < suite.rows.size(); ++i) {
                    const EinsteinExampleRow& row = suite.rows[i];
                    std::string tag = "row" + std::to_string(i) + "_k" + std::to_string(row.k);
                    rec.values.emplace_back(tag + "_lambda", row.lambda);
                    rec.values.emplace_back(tag + "_residual", row.residual);
                    bool ok = std::abs(row.lambda - expected[i].lambda) <=
                                  rec.tolerance * (1.0 + std::abs(expected[i].lambda)) &&
                              std::abs(row.residual - expected[i].residual) <=
                                  rec.tolerance * (1.0 + expected[i].residual);
                    rec.pass = rec.pass && ok;
                }
            });
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

bool RunReport::all_pass() const {
    for (const CheckRecord& c : checks)
        if (!c.pass) return false;
    return true;
}

int RunReport::exit_code() const {
    if (breakdown) return 3;
    return all_pass() ? 0 : 1;
}

RunReport run(const Manifest& manifest) {
    RunReport rep;
    rep.operation = manifest.operation;
    rep.manifest_echo = manifest.echo();
    rep.seed = manifest.numeric.seed;
    auto t0 = std::chrono::steady_clock::now();
    switch (manifest.operation) {
    case Operation::invariants: run_invariants(rep, manifest); break;
    case Operation::verify_identities: run_identities(rep, manifest); break;
    case Operation::variation: run_variation(rep, manifest); break;
    case Operation::gauss_bonnet: run_gauss_bonnet(rep, manifest); break;
    case Operation::einstein_suite: run_einstein(rep, manifest); break;
    }
    rep.timing_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return rep;
}

nlohmann::ordered_json report_json(const RunReport& rep) {
    json out;
    out["version"] = rep.version;
    out["operation"] = operation_name(rep.operation);
    out["seed"] = rep.seed;
    out["manifest"] = rep.manifest_echo;
    json checks = json::array();
    int passed = 0;
    for (const CheckRecord& c : rep.checks) {
        json jc;
        jc["name"] = c.name;
        jc["anchor"] = c.anchor;
        json vals;
        for (const auto& [key, value] : c.values) vals[key] = value;
        jc["values"] = vals;
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        if (!c.error.empty()) jc["error"] = c.error;
        checks.push_back(jc);
        passed += c.pass ? 1 : 0;
    }
    out["checks"] = checks;
    out["passed"] = passed;
    out["total"] = static_cast<int>(rep.checks.size());
    out["breakdown"] = rep.breakdown;
    out["timing_ms"] = rep.timing_ms;
    return out;
}

std::string report_text(const RunReport& rep, const std::string& format) {
    if (format == "csv") {
        std::string out = "check,anchor,key,value,tolerance,pass,error\n";
        for (const CheckRecord& c : rep.checks) {
            std::string base = csv_quote(c.name) + "," + csv_quote(c.anchor) + ",";
            std::string tail = "," + fmt(c.tolerance) + "," + (c.pass ? "true" : "false") + "," +
                               csv_quote(c.error) + "\n";
            if (c.values.empty()) out += base + "," + tail;
            for (const auto& [key, value] : c.values)
                out += base + csv_quote(key) + "," + fmt(value) + tail;
        }
        return out;
    }
    return report_json(rep).dump(2) + "\n";
}

} // namespace gbc
