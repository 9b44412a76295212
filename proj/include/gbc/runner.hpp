#pragma once

/// @file runner.hpp
/// Executes a validated manifest and assembles the machine-readable
/// report. Reports are deterministic for a fixed (manifest, seed,
/// version) triple: the only field that varies between runs is the
/// trailing timing entry.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gbc/manifest.hpp"

namespace gbc {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct CheckRecord {
    std::string name;
    std::string anchor; // which statement of the theory the check exercises
    std::vector<std::pair<std::string, double>> values;
    double tolerance = 0.0;
    bool pass = false;
    std::string error; // non-empty when the check aborted
};

struct RunReport {
    std::string version = kLibraryVersion;
    Operation operation = Operation::invariants;
    nlohmann::ordered_json manifest_echo;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;
    double timing_ms = 0.0;
    bool breakdown = false; // a check aborted instead of measuring

    bool all_pass() const;
    /// 0 all pass, 1 some check failed, 3 numerical breakdown
    int exit_code() const;
};

RunReport run(const Manifest& manifest);

nlohmann::ordered_json report_json(const RunReport& rep);

/// Serialized report in the requested format ("json" or "csv").
std::string report_text(const RunReport& rep, const std::string& format);

} // namespace gbc
