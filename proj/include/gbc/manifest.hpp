#pragma once

/// @file manifest.hpp
/// Validated run descriptions for the command-line surface. A manifest
/// arrives as JSON text (or is assembled from inline flags), is checked
/// field by field with every error collected, and is echoed verbatim
/// into the resulting report so runs stay reproducible.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbc/chart.hpp"

namespace gbc {

enum class Operation { invariants, verify_identities, variation, gauss_bonnet, einstein_suite };

/// command-line spelling ("verify-identities", "einstein", ...)
std::string operation_name(Operation op);

struct NumericOptions {
    double fd_step = 1e-3;
    int quad_order = 12;
    double tolerance = 1e-3;
    std::uint64_t seed = 0;
    int trials = 25;
    double amplitude = 0.05; // deformation size for variation / gauss-bonnet
};

struct OutputOptions {
    std::string path;            // empty writes to stdout
    std::string format = "json"; // "json" or "csv"
};

struct Manifest {
    Operation operation = Operation::invariants;
    nlohmann::ordered_json manifold; // catalog description; null when unused
    int n = 0;                       // verify-identities / gauss-bonnet only
    std::vector<int> k;              // invariants / variation only
    NumericOptions numeric;
    OutputOptions output;

    /// canonical JSON form (stable field order), used as the report echo
    nlohmann::ordered_json echo() const;
};

struct ManifestParse {
    Manifest manifest;
    std::vector<std::string> errors; // every problem found, not just the first
    bool ok() const { return errors.empty(); }
};

/// Parse and validate JSON manifest text. Unknown fields are rejected at
/// every level, parameter ranges are checked before any computation, and
/// all errors are reported together.
ManifestParse parse_manifest(const std::string& text);

/// Instantiate the catalog chart a validated manifold description names.
/// Descriptions nest for products: {"catalog": "product", "a": {...}, "b": {...}}.
MetricChart manifest_chart(const nlohmann::ordered_json& manifold);

} // namespace gbc
