#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "secrecy/classifier.hpp"
#include "secrecy/core_model.hpp"
#include "secrecy/montecarlo.hpp"
#include "secrecy/rates.hpp"

namespace secrecy {

/// Candidate values for the max-min search. The legitimate side picks a
/// scheme parameter (beta or p_t) and power laws; Eve picks an angle on the
/// exclusion circle and a classifier.
struct SearchGrid {
    std::vector<double> scheme_params;
    std::vector<PowerDistribution> laws;      // f (two-way) or f1 (TDM data)
    std::vector<PowerDistribution> jam_laws;  // f2 (TDM); empty means "same as laws"
    std::vector<double> thetas;
    std::vector<ClassifierSpec> classifiers;

    /// Throws UsageError on an empty grid, ConfigError on invalid values.
    void validate(Scheme scheme) const;

    const std::vector<PowerDistribution>& feedback_laws() const { return jam_laws.empty() ? laws : jam_laws; }

    /// 21-point parameter grid on [0,1], uniform laws with endpoints on
    /// {0,2,...,40} dB, 19 angles on [0,pi], and the default adversary set.
    static SearchGrid defaults();

    /// No-erasure threshold classifier plus relative windows
    /// t1 in {-inf, 0, +3} dB x t2 in {-3, 0, +3, +inf} dB.
    static std::vector<ClassifierSpec> default_adversaries();

    static std::vector<PowerDistribution> uniform_laws_db(const std::vector<double>& endpoints_db);

    std::string describe() const;
};

/// Everything fixed during a search. geometry.theta is overridden by the grid.
struct ProblemSetup {
    Geometry geometry;
    ChannelConfig channel;
    FecConfig fec;
    ProfileMethod method;
};

struct LegitPoint {
    std::size_t param = 0;
    std::size_t law = 0;
    std::size_t jam_law = 0;  // TDM only
};

struct AdversaryPoint {
    std::size_t theta = 0;
    std::size_t classifier = 0;
};

struct WorstCase {
    double r_s = 0.0;
    AdversaryPoint arg;
};

/// r_s (before the TDM 0.5 factor) at one legitimate and adversary point.
double secrecy_rate_at(Scheme scheme, const LegitPoint& legit, const AdversaryPoint& adversary,
                       const SearchGrid& grid, const ProblemSetup& setup);

/// Exhaustive inner minimum over theta x classifier; ties go to the
/// lexicographically smallest (theta, classifier) index.
WorstCase worst_case_eve(Scheme scheme, const LegitPoint& legit, const SearchGrid& grid, const ProblemSetup& setup);

struct MaxMinResult {
    Scheme scheme = Scheme::twoway;
    double r_sec = 0.0;      // includes the 0.5 time-division factor for TDM
    double inner_min = 0.0;  // min over the adversary at the argmax
    LegitPoint legit;
    AdversaryPoint adversary;
    double param = 0.0;
    PowerDistribution law;
    std::optional<PowerDistribution> jam_law;
    double theta = 0.0;
    ClassifierSpec classifier;
    // Inner minimum for every legitimate point, lexicographic order
    // (param, law[, jam_law]); filled only when requested.
    std::vector<double> inner_minimum;
};

/// OpenMP max-min search. Ties in the outer maximum go to the smallest
/// legitimate index; results are identical for any thread count.
MaxMinResult optimize_tdm(const SearchGrid& grid, const ProblemSetup& setup, int threads = 0, bool keep_table = false);
MaxMinResult optimize_twoway(const SearchGrid& grid, const ProblemSetup& setup, int threads = 0,
                             bool keep_table = false);
MaxMinResult optimize(Scheme scheme, const SearchGrid& grid, const ProblemSetup& setup, int threads = 0,
                      bool keep_table = false);

namespace reference {

/// Plain nested loops, one profile evaluation per (legit, adversary) pair.
MaxMinResult optimize(Scheme scheme, const SearchGrid& grid, const ProblemSetup& setup);

}  // namespace reference

enum class TdmPlacement { transmitter_near, transmitter_far };

std::string to_string(TdmPlacement placement);

struct SweepOptions {
    double d_ab = 1.0;
    double r_e = 0.55;
    double alpha = 2.0;
    TdmPlacement placement = TdmPlacement::transmitter_near;
};

struct SweepRow {
    double ratio = 0.0;
    Scheme scheme = Scheme::twoway;
    bool realizable = false;
    MaxMinResult result;
};

/// Evenly spaced ratios, endpoints included (a single point at ratio_max when
/// steps == 1).
std::vector<double> ratio_points(double ratio_min, double ratio_max, int steps);

/// For each ratio, place Eve so that d_min/d_max equals it and run the
/// scheme's optimizer with the grid's angles replaced by that placement
/// (both mirror images for two-way; the placement rule for TDM).
std::vector<SweepRow> sweep_ratio(const std::vector<double>& ratios, const std::vector<Scheme>& schemes,
                                  const SearchGrid& grid, const ProblemSetup& setup, const SweepOptions& options,
                                  int threads = 0);

}  // namespace secrecy
