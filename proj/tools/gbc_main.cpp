#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbc/manifest.hpp"
#include "gbc/runner.hpp"

namespace {

struct Flags {
    std::string manifest_path;
    int n = 0;
    std::vector<int> k;
    double r = 1.0;
    std::uint64_t seed = 0;
    int quad_order = 0;
    double fd_step = 0.0;
    double tol = 0.0;
    int trials = 0;
    double amplitude = 0.0;
    std::string out;
    std::string format;

    CLI::App* sub = nullptr;
    bool given(const std::string& name) const { return sub->count(name) > 0; }
};

int execute(const std::string& opname, const Flags& f) {
    std::string text;
    if (!f.manifest_path.empty()) {
        std::ifstream in(f.manifest_path);
        if (!in) {
            std::cerr << "cannot read manifest file: " << f.manifest_path << "\n";
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        for (const char* flag : {"--n", "--k", "--r", "--seed", "--quad-order", "--fd-step",
                                 "--tol", "--trials", "--amplitude"})
            if (f.given(flag)) {
                std::cerr << "give either --manifest or inline flags, not both (" << flag
                          << ")\n";
                return 2;
            }
    } else {
        nlohmann::ordered_json j;
        j["operation"] = opname;
        if (opname == "invariants" || opname == "variation") {
            nlohmann::ordered_json man;
            man["catalog"] = f.given("--r") ? "sphere" : "flat_torus";
            if (f.given("--n")) man["n"] = f.n;
            if (f.given("--r")) man["r"] = f.r;
            j["manifold"] = man;
            if (f.given("--k")) j["k"] = f.k;
        } else if (opname == "verify-identities" || opname == "gauss-bonnet") {
            if (f.given("--n")) j["n"] = f.n;
        }
        nlohmann::ordered_json num;
        if (f.given("--seed")) num["seed"] = f.seed;
        if (f.given("--quad-order")) num["quad_order"] = f.quad_order;
        if (f.given("--fd-step")) num["fd_step"] = f.fd_step;
        if (f.given("--tol")) num["tolerance"] = f.tol;
        if (f.given("--trials")) num["trials"] = f.trials;
        if (f.given("--amplitude")) num["amplitude"] = f.amplitude;
        if (!num.empty()) j["numeric"] = num;
        text = j.dump();
    }

    gbc::ManifestParse parsed = gbc::parse_manifest(text);
    if (!parsed.ok()) {
        for (const std::string& e : parsed.errors) std::cerr << e << "\n";
        return 2;
    }
    if (f.given("--out")) parsed.manifest.output.path = f.out;
    if (f.given("--format")) {
        if (f.format != "json" && f.format != "csv") {
            std::cerr << "--format: expected 'json' or 'csv'\n";
            return 2;
        }
        parsed.manifest.output.format = f.format;
    }

    gbc::RunReport report = gbc::run(parsed.manifest);
    std::string body = gbc::report_text(report, parsed.manifest.output.format);
    if (parsed.manifest.output.path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(parsed.manifest.output.path);
        if (!out) {
            std::cerr << "cannot write report: " << parsed.manifest.output.path << "\n";
            return 2;
        }
        out << body;
    }
    return report.exit_code();
}

void attach(CLI::App& app, const std::string& opname, const std::string& description,
            int& result) {
    CLI::App* sub = app.add_subcommand(opname, description);
    auto f = std::make_shared<Flags>();
    f->sub = sub;
    sub->add_option("--manifest", f->manifest_path, "JSON manifest file");
    sub->add_option("--n", f->n, "dimension");
    sub->add_option("--k", f->k, "curvature orders (repeatable)");
    sub->add_option("--r", f->r, "sphere radius (inline manifold becomes a sphere)");
    sub->add_option("--seed", f->seed, "random seed");
    sub->add_option("--quad-order", f->quad_order, "quadrature order per axis");
    sub->add_option("--fd-step", f->fd_step, "finite-difference step");
    sub->add_option("--tol", f->tol, "pass/fail tolerance");
    sub->add_option("--trials", f->trials, "random trials per identity");
    sub->add_option("--amplitude", f->amplitude, "deformation amplitude");
    sub->add_option("--out", f->out, "report path (default stdout)");
    sub->add_option("--format", f->format, "json|csv");
    sub->callback([opname, f, &result]() { result = execute(opname, *f); });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"double-form curvature toolkit"};
    app.require_subcommand(1);
    int result = 0;
    attach(app, "invariants", "evaluate h_2k and T_2k on a catalog manifold", result);
    attach(app, "verify-identities", "run the exact fiber identity suite", result);
    attach(app, "variation", "compare the functional derivative with the gradient pairing",
           result);
    attach(app, "gauss-bonnet", "total curvature normalization and invariance", result);
    attach(app, "einstein", "worked proportionality examples", result);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return result;
}
