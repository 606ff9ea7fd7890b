#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "secrecy/config.hpp"

namespace secrecy {

inline constexpr const char* kToolVersion = "secrecy 1.0.0";

/// Estimates resting on fewer observations than this are flagged.
inline constexpr std::uint64_t kLowConfidenceCount = 30;

struct OutputRecord {
    std::string command;
    std::vector<std::pair<std::string, std::string>> input;
    nlohmann::ordered_json result;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    std::vector<std::pair<std::string, std::string>> provenance;

    /// CSV: "# key = value" lines (command, input, provenance) then the
    /// table. JSON: {command, input, result, provenance}.
    std::string render(OutputFormat format) const;
};

OutputRecord cmd_rates(const RunConfig& cfg);
OutputRecord cmd_sweep(const RunConfig& cfg, int threads = 0);
OutputRecord cmd_simulate(const RunConfig& cfg, int threads = 0);
OutputRecord cmd_optimize(const RunConfig& cfg, int threads = 0);

}  // namespace secrecy
