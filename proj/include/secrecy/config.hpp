#pragma once

// Run configuration: flat "section.key = value" text (or a JSON object of the
// same keys, optionally wrapped in a previous run's record under "input").

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secrecy/classifier.hpp"
#include "secrecy/core_model.hpp"
#include "secrecy/montecarlo.hpp"
#include "secrecy/optimizer.hpp"
#include "secrecy/rates.hpp"

namespace secrecy {

/// A power law as written in the config; powers in dB.
struct LawConfig {
    enum class Kind { uniform, discrete };

    Kind kind = Kind::uniform;
    double min_db = 0.0;
    double max_db = 20.0;
    std::vector<double> levels_db;
    std::vector<double> probabilities;

    PowerDistribution build() const;
};

enum class OutputFormat { csv, json };

struct RunConfig {
    Scheme scheme = Scheme::twoway;
    double p_t = 0.5;
    double beta = 0.3;

    Geometry geometry;
    LawConfig power;
    LawConfig jam_power;
    ChannelConfig channel;

    std::string classifier_kind = "threshold";
    double t1_db = -kInf;
    double t2_db = kInf;
    bool relative = false;
    std::string ml_table;
    double ml_sigma_db = 1.0;

    FecConfig fec;
    double fec_threshold_db = -kInf;  // as written; fec.threshold_snr is derived
    ProfileMethod::Kind profile_method = ProfileMethod::Kind::analytic;
    std::uint64_t profile_samples = 1'000'000;

    std::uint64_t seed = 1;
    std::uint64_t frames = 1'000'000;

    OutputFormat format = OutputFormat::csv;
    std::string out_path;  // not echoed

    std::string grid_params = "0:1:21";
    std::string grid_law_endpoints_db = "0:40:21";
    std::string grid_jam_law_endpoints_db;  // empty: same as the data laws
    std::string grid_thetas = "0:3.141592653589793:19";
    std::string grid_classifiers = "default";

    double sweep_ratio_min = 0.1;
    double sweep_ratio_max = 1.0;
    int sweep_steps = 10;
    std::vector<Scheme> sweep_schemes{Scheme::twoway, Scheme::tdm};
    TdmPlacement sweep_placement = TdmPlacement::transmitter_near;

    std::string trace_path;  // not echoed

    double scheme_param() const { return scheme == Scheme::tdm ? beta : p_t; }

    /// The adversary at the configured single point.
    ClassifierSpec classifier_spec() const;

    SearchGrid search_grid(Scheme for_scheme) const;
    ProblemSetup problem_setup() const;
    SimConfig sim_config() const;

    /// Every resolved key with its canonical text value, in a fixed order.
    /// Output paths are left out so that records do not depend on where
    /// they were written.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

using ConfigEntries = std::map<std::string, std::string>;

/// Raw key/value pairs from text; throws ConfigError on syntax errors and
/// duplicate keys.
ConfigEntries parse_config_text(const std::string& text);

/// Applies entries over the defaults and validates. Unknown keys, bad values
/// and conflicting keys throw ConfigError naming the key.
RunConfig resolve_config(const ConfigEntries& entries);

/// Reads and resolves a config file; `overrides` win over file entries.
RunConfig load_config(const std::string& path, const ConfigEntries& overrides = {});

/// "lo:hi:n" (n evenly spaced points, endpoints included) or "a,b,c".
std::vector<double> parse_number_list(const std::string& text, const std::string& key);

/// ';'-separated adversary tokens: default, no-erasure, blind, oracle, ml,
/// window(t1,t2) (absolute dB) and rel(t1,t2) (offsets from the support).
std::vector<ClassifierSpec> parse_classifier_list(const std::string& text, const RunConfig& cfg);

}  // namespace secrecy
