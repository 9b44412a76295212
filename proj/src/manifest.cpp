#include "gbc/manifest.hpp"

#include <algorithm>
#include <cmath>

#include "gbc/errors.hpp"
#include "gbc/random_fields.hpp"
#include "gbc/trig.hpp"

namespace gbc {

namespace {

using json = nlohmann::ordered_json;

constexpr int kMaxChartDim = 8;

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& path, std::vector<std::string>& errs) {
    for (const auto& item : obj.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            errs.push_back(path + ": unknown field '" + item.key() + "'");
}

bool want_int(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

// typed field extraction; missing required fields and type/range
// violations are recorded, never thrown
struct FieldReader {
    const json& obj;
    std::string path;
    std::vector<std::string>& errs;

    bool has(const std::string& key) const { return obj.contains(key); }

    int get_int(const std::string& key, int lo, int hi, int fallback, bool required) const {
        if (!obj.contains(key)) {
            if (required) errs.push_back(path + ": missing field '" + key + "'");
            return fallback;
        }
        const json& v = obj.at(key);
        if (!want_int(v)) {
            errs.push_back(path + "." + key + ": expected an integer");
            return fallback;
        }
        int x = v.get<int>();
        if (x < lo || x > hi) {
            errs.push_back(path + "." + key + ": " + std::to_string(x) + " outside [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return fallback;
        }
        return x;
    }

    double get_double(const std::string& key, double lo, double hi, double fallback,
                      bool required) const {
        if (!obj.contains(key)) {
            if (required) errs.push_back(path + ": missing field '" + key + "'");
            return fallback;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            errs.push_back(path + "." + key + ": expected a number");
            return fallback;
        }
        double x = v.get<double>();
        if (!(x >= lo && x <= hi)) {
            errs.push_back(path + "." + key + ": value out of range");
            return fallback;
        }
        return x;
    }

    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            errs.push_back(path + "." + key + ": expected a non-negative integer");
            return fallback;
        }
        return v.get<std::uint64_t>();
    }
};

// returns the chart dimension, or 0 when the description is broken
int validate_manifold(const json& m, const std::string& path, std::vector<std::string>& errs) {
    if (!m.is_object()) {
        errs.push_back(path + ": expected an object");
        return 0;
    }
    if (!m.contains("catalog") || !m.at("catalog").is_string()) {
        errs.push_back(path + ": missing catalog identifier");
        return 0;
    }
    std::string catalog = m.at("catalog").get<std::string>();
    FieldReader r{m, path, errs};
    if (catalog == "flat_torus") {
        reject_unknown(m, {"catalog", "n", "periods"}, path, errs);
        int n = r.get_int("n", 2, kMaxChartDim, 0, true);
        if (m.contains("periods")) {
            const json& p = m.at("periods");
            bool good = p.is_array() && static_cast<int>(p.size()) == n;
            if (good)
                for (const json& v : p) good = good && v.is_number() && v.get<double>() > 0.0;
            if (!good) errs.push_back(path + ".periods: expected " + std::to_string(n) +
                                      " positive numbers");
        }
        return n;
    }
    if (catalog == "sphere") {
        reject_unknown(m, {"catalog", "n", "r"}, path, errs);
        int n = r.get_int("n", 2, kMaxChartDim, 0, true);
        r.get_double("r", 1e-6, 1e6, 1.0, false);
        return n;
    }
    if (catalog == "product") {
        reject_unknown(m, {"catalog", "a", "b"}, path, errs);
        int da = 0, db = 0;
        if (m.contains("a")) da = validate_manifold(m.at("a"), path + ".a", errs);
        else errs.push_back(path + ": missing factor 'a'");
        if (m.contains("b")) db = validate_manifold(m.at("b"), path + ".b", errs);
        else errs.push_back(path + ": missing factor 'b'");
        if (da > 0 && db > 0 && da + db > kMaxChartDim)
            errs.push_back(path + ": product dimension " + std::to_string(da + db) +
                           " exceeds the supported maximum " + std::to_string(kMaxChartDim));
        return da + db;
    }
    if (catalog == "conformal_flat") {
        reject_unknown(m, {"catalog", "n", "amplitude", "seed"}, path, errs);
        int n = r.get_int("n", 2, kMaxChartDim, 0, true);
        r.get_double("amplitude", 0.0, 1.0, 0.3, false);
        r.get_seed("seed", 0);
        return n;
    }
    if (catalog == "perturbed_sphere") {
        reject_unknown(m, {"catalog", "n", "r", "amplitude", "seed"}, path, errs);
        int n = r.get_int("n", 2, kMaxChartDim, 0, true);
        r.get_double("r", 1e-6, 1e6, 1.0, false);
        // beyond 0.5 the bump can cost positive-definiteness
        r.get_double("amplitude", 0.0, 0.5, 0.1, true);
        r.get_seed("seed", 0);
        return n;
    }
    errs.push_back(path + ": unknown catalog id '" + catalog + "'");
    return 0;
}

} // namespace

std::string operation_name(Operation op) {
    switch (op) {
    case Operation::invariants: return "invariants";
    case Operation::verify_identities: return "verify-identities";
    case Operation::variation: return "variation";
    case Operation::gauss_bonnet: return "gauss-bonnet";
    case Operation::einstein_suite: return "einstein";
    }
    return "invariants";
}

nlohmann::ordered_json Manifest::echo() const {
    json e;
    e["operation"] = operation_name(operation);
    if (!manifold.is_null()) e["manifold"] = manifold;
    if (operation == Operation::verify_identities || operation == Operation::gauss_bonnet)
        e["n"] = n;
    if (!k.empty()) e["k"] = k;
    e["numeric"] = {{"fd_step", numeric.fd_step},
                    {"quad_order", numeric.quad_order},
                    {"tolerance", numeric.tolerance},
                    {"seed", numeric.seed},
                    {"trials", numeric.trials},
                    {"amplitude", numeric.amplitude}};
    e["output"] = {{"path", output.path}, {"format", output.format}};
    return e;
}

ManifestParse parse_manifest(const std::string& text) {
    ManifestParse out;
    std::vector<std::string>& errs = out.errors;
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded()) {
        errs.push_back("manifest: not valid JSON");
        return out;
    }
    if (!root.is_object()) {
        errs.push_back("manifest: expected a JSON object");
        return out;
    }
    reject_unknown(root, {"operation", "manifold", "n", "k", "numeric", "output"}, "manifest",
                   errs);

    Manifest& m = out.manifest;
    if (!root.contains("operation") || !root.at("operation").is_string()) {
        errs.push_back("manifest: missing operation");
        return out;
    }
    std::string opname = root.at("operation").get<std::string>();
    bool known_op = true;
    if (opname == "invariants") m.operation = Operation::invariants;
    else if (opname == "verify-identities") m.operation = Operation::verify_identities;
    else if (opname == "variation") m.operation = Operation::variation;
    else if (opname == "gauss-bonnet") m.operation = Operation::gauss_bonnet;
    else if (opname == "einstein") m.operation = Operation::einstein_suite;
    else {
        errs.push_back("manifest.operation: unknown operation '" + opname + "'");
        known_op = false;
    }

    bool takes_manifold = known_op && (m.operation == Operation::invariants ||
                                       m.operation == Operation::variation);
    bool takes_n = known_op && (m.operation == Operation::verify_identities ||
                                m.operation == Operation::gauss_bonnet);

    int chart_dim = 0;
    if (root.contains("manifold")) {
        if (takes_manifold) {
            m.manifold = root.at("manifold");
            chart_dim = validate_manifold(m.manifold, "manifest.manifold", errs);
        } else if (known_op) {
            errs.push_back("manifest.manifold: operation '" + opname + "' does not take a manifold");
        }
    } else if (takes_manifold) {
        errs.push_back("manifest: operation '" + opname + "' requires a manifold");
    }

    FieldReader top{root, "manifest", errs};
    if (root.contains("n")) {
        if (takes_n) {
            m.n = top.get_int("n", 2, kMaxChartDim, 0, false);
            if (m.operation == Operation::gauss_bonnet && m.n % 2 != 0)
                errs.push_back("manifest.n: gauss-bonnet needs even n");
            if (m.operation == Operation::gauss_bonnet && m.n > 6)
                errs.push_back("manifest.n: gauss-bonnet supports n up to 6");
        } else if (known_op) {
            errs.push_back("manifest.n: operation '" + opname + "' does not take n");
        }
    } else if (takes_n) {
        errs.push_back("manifest: operation '" + opname + "' requires n");
    }

    if (root.contains("k")) {
        if (!takes_manifold && known_op) {
            errs.push_back("manifest.k: operation '" + opname + "' does not take k");
        } else {
            const json& karr = root.at("k");
            if (!karr.is_array() || karr.empty()) {
                errs.push_back("manifest.k: expected a non-empty array of integers");
            } else {
                for (const json& v : karr) {
                    if (!want_int(v)) {
                        errs.push_back("manifest.k: expected a non-empty array of integers");
                        break;
                    }
                    int kk = v.get<int>();
                    if (kk < 1) errs.push_back("manifest.k: k must be at least 1");
                    else if (chart_dim > 0 && 2 * kk > chart_dim)
                        errs.push_back("manifest.k: 2k exceeds n (k=" + std::to_string(kk) +
                                       ", n=" + std::to_string(chart_dim) + ")");
                    else m.k.push_back(kk);
                }
            }
        }
    } else if (takes_manifold) {
        errs.push_back("manifest: operation '" + opname + "' requires k");
    }

    // identity suites are exact algebra and default much tighter than the
    // quadrature-bound variational checks
    if (known_op) {
        if (m.operation == Operation::verify_identities) m.numeric.tolerance = 1e-10;
        else if (m.operation == Operation::invariants ||
                 m.operation == Operation::einstein_suite)
            m.numeric.tolerance = 1e-8;
        else m.numeric.tolerance = 1e-3;
    }
    if (root.contains("numeric")) {
        const json& num = root.at("numeric");
        if (!num.is_object()) {
            errs.push_back("manifest.numeric: expected an object");
        } else {
            reject_unknown(num, {"fd_step", "quad_order", "tolerance", "seed", "trials",
                                 "amplitude"},
                           "manifest.numeric", errs);
            FieldReader r{num, "manifest.numeric", errs};
            m.numeric.fd_step = r.get_double("fd_step", 1e-12, 0.1, m.numeric.fd_step, false);
            m.numeric.quad_order = r.get_int("quad_order", 2, 64, m.numeric.quad_order, false);
            m.numeric.tolerance =
                r.get_double("tolerance", 1e-15, 1.0, m.numeric.tolerance, false);
            m.numeric.seed = r.get_seed("seed", m.numeric.seed);
            m.numeric.trials = r.get_int("trials", 1, 10000, m.numeric.trials, false);
            m.numeric.amplitude = r.get_double("amplitude", 0.0, 0.5, m.numeric.amplitude, false);
        }
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        if (!o.is_object()) {
            errs.push_back("manifest.output: expected an object");
        } else {
            reject_unknown(o, {"path", "format"}, "manifest.output", errs);
            if (o.contains("path")) {
                if (o.at("path").is_string()) m.output.path = o.at("path").get<std::string>();
                else errs.push_back("manifest.output.path: expected a string");
            }
            if (o.contains("format")) {
                std::string f = o.at("format").is_string() ? o.at("format").get<std::string>() : "";
                if (f != "json" && f != "csv")
                    errs.push_back("manifest.output.format: expected 'json' or 'csv'");
                else m.output.format = f;
            }
        }
    }
    return out;
}

MetricChart manifest_chart(const nlohmann::ordered_json& manifold) {
    std::string catalog = manifold.at("catalog").get<std::string>();
    auto opt_double = [&](const char* key, double fallback) {
        return manifold.contains(key) ? manifold.at(key).get<double>() : fallback;
    };
    auto opt_seed = [&](const char* key, std::uint64_t fallback) {
        return manifold.contains(key) ? manifold.at(key).get<std::uint64_t>() : fallback;
    };
    if (catalog == "flat_torus") {
        int n = manifold.at("n").get<int>();
        if (manifold.contains("periods"))
            return flat_torus(n, manifold.at("periods").get<std::vector<double>>());
        return flat_torus(n);
    }
    if (catalog == "sphere")
        return sphere(manifold.at("n").get<int>(), opt_double("r", 1.0));
    if (catalog == "product")
        return product(manifest_chart(manifold.at("a")), manifest_chart(manifold.at("b")));
    if (catalog == "conformal_flat") {
        int n = manifold.at("n").get<int>();
        auto rng = substream(opt_seed("seed", 0), "conformal-u");
        TrigScalar u = TrigScalar::random(n, 2, opt_double("amplitude", 0.3), 2, rng);
        return conformal_flat(n, u);
    }
    if (catalog == "perturbed_sphere")
        return perturbed_sphere(manifold.at("n").get<int>(), opt_double("r", 1.0),
                                opt_double("amplitude", 0.1), opt_seed("seed", 0));
    throw DimensionError("manifest_chart: unknown catalog id '" + catalog + "'");
}

} // namespace gbc
