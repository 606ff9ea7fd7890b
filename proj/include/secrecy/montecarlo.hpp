#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "secrecy/classifier.hpp"
#include "secrecy/core_model.hpp"
#include "secrecy/rates.hpp"

namespace secrecy {

enum class Scheme { twoway, tdm };

std::string to_string(Scheme scheme);

struct SimConfig {
    Scheme scheme = Scheme::twoway;
    std::uint64_t frames = 1'000'000;
    std::uint64_t seed = 1;
    double p_t = 0.5;
    double beta = 0.3;
    Geometry geometry;
    PowerDistribution power = PowerDistribution::uniform_db(0.0, 20.0);      // f, or f1 (TDM data)
    PowerDistribution jam_power = PowerDistribution::uniform_db(0.0, 20.0);  // f2 (TDM feedback)
    ChannelConfig channel;
    ClassifierSpec classifier;
    FecConfig fec;

    void validate() const;
};

/// Frames are simulated in fixed-size shards, each with its own substreams,
/// so results do not depend on how shards are spread over workers.
inline constexpr std::uint64_t kShardFrames = 1u << 16;

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;  // conditioning count

    bool defined() const { return n > 0; }
};

struct TwoWayTally {
    std::uint64_t frames = 0;
    std::uint64_t a_active = 0;
    std::uint64_t b_active = 0;
    std::array<std::uint64_t, 4> event_count{};  // indexed by Event
    std::array<std::array<std::uint64_t, 3>, 3> class_count{};
    std::array<std::uint64_t, 2> capture_errors{};  // collisions labelled A / B that decode wrong
    std::uint64_t legit_decodable = 0;
    std::uint64_t legit_errors = 0;

    TwoWayTally& operator+=(const TwoWayTally& other);
    friend bool operator==(const TwoWayTally&, const TwoWayTally&) = default;
};

struct TdmTally {
    std::uint64_t frames = 0;
    std::uint64_t clean = 0;
    std::uint64_t clean_rejected = 0;
    std::uint64_t jammed = 0;
    std::uint64_t jammed_accepted = 0;
    std::uint64_t missed_errors = 0;
    std::uint64_t legit_decodable = 0;
    std::uint64_t legit_errors = 0;

    TdmTally& operator+=(const TdmTally& other);
    friend bool operator==(const TdmTally&, const TdmTally&) = default;
};

/// Empirical counterpart of MisclassProfile / TdmDetectionProfile.
struct EmpiricalProfile {
    Scheme scheme = Scheme::twoway;
    std::uint64_t seed = 0;
    TwoWayTally twoway;
    TdmTally tdm;

    std::uint64_t frames() const { return scheme == Scheme::twoway ? twoway.frames : tdm.frames; }

    Estimate misclass(Event event, Label label) const;
    Estimate capture_error(Label label) const;

    Estimate p_m() const;
    Estimate p_f() const;
    Estimate p_e_given_m() const;

    Estimate legit_error_rate() const;

    /// Names of estimates with a zero conditioning count.
    std::vector<std::string> undefined_estimates() const;

    friend bool operator==(const EmpiricalProfile&, const EmpiricalProfile&) = default;
};

struct TwoWaySimulation {
    EmpiricalProfile profile;
    // Absent when an undefined estimate carries nonzero weight in the bound.
    std::optional<RateBreakdownTwoWay> rates;
};

struct TdmSimulation {
    EmpiricalProfile profile;
    std::optional<RateBreakdownTdm> rates;
};

/// OpenMP frame simulation; threads <= 0 uses the runtime default.
TwoWaySimulation simulate_twoway(const SimConfig& cfg, int threads = 0);
TdmSimulation simulate_tdm(const SimConfig& cfg, int threads = 0);

namespace reference {

/// Single loop over all frames; optional per-interval trace.
TwoWaySimulation simulate_twoway(const SimConfig& cfg, std::ostream* trace = nullptr);
TdmSimulation simulate_tdm(const SimConfig& cfg, std::ostream* trace = nullptr);

}  // namespace reference

/// Bounds evaluated on the empirical profile (see TwoWaySimulation::rates).
std::optional<RateBreakdownTwoWay> empirical_twoway_bounds(const SimConfig& cfg, const EmpiricalProfile& prof);
std::optional<RateBreakdownTdm> empirical_tdm_bounds(const SimConfig& cfg, const EmpiricalProfile& prof);

/// The empirical estimates packed as a MisclassProfile (undefined -> 0).
MisclassProfile as_misclass_profile(const EmpiricalProfile& prof);
TdmDetectionProfile as_detection_profile(const EmpiricalProfile& prof);

struct ComparisonEntry {
    std::string name;
    double analytic = 0.0;
    std::optional<double> empirical;
    std::uint64_t n = 0;
    double z = 0.0;
    bool within = true;
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    double sigma = 3.0;
    double min_fraction = 0.99;
    double fraction_within = 0.0;
    bool pass = false;
};

/// Per-entry z-scores (null-hypothesis binomial standard error) against an
/// empirical profile of the same scheme.
ComparisonReport compare_profiles(const MisclassProfile& analytic, const EmpiricalProfile& empirical,
                                  double sigma = 3.0, double min_fraction = 0.99);
ComparisonReport compare_profiles(const TdmDetectionProfile& analytic, const EmpiricalProfile& empirical,
                                  double sigma = 3.0, double min_fraction = 0.99);

}  // namespace secrecy
