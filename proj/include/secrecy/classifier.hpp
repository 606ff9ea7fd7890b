#pragma once

// Eve's memoryless per-symbol classifiers and the event-misclassification
// profiles they induce.
//
// Profile rows are the true transmitter-activity events, columns the label
// Eve assigns:
//
//                 label A     label B     other (erased / "both")
//   (A, B)        .           .           .
//   (A, B^c)      .           .           .
//   (A^c, B)      .           .           .
//
// "A or B" decisions count half toward each of the first two columns.

#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "secrecy/core_model.hpp"
#include "secrecy/random.hpp"

namespace secrecy {

enum class Event { both = 0, a_only = 1, b_only = 2, none = 3 };
enum class Label { a = 0, b = 1, other = 2 };

enum class ClassOutcome { a, b, a_or_b, erase, silence };

std::string to_string(ClassOutcome outcome);

using LabelWeights = std::array<double, 3>;

/// Column weights of a single decision.
LabelWeights label_weights(ClassOutcome outcome);

struct MisclassProfile {
    std::array<LabelWeights, 3> p{};
    double p_e_both_as_a = 0.0;  // P_e | (A,B) -> (A,B^c)
    double p_e_both_as_b = 0.0;  // P_e | (A,B) -> (A^c,B)

    double at(Event event, Label label) const {
        return p[static_cast<std::size_t>(event)][static_cast<std::size_t>(label)];
    }

    /// Rows sum to 1 within tol, entries in [0,1], conditional errors <= 0.5.
    void validate(double tol = 1e-9) const;

    /// Profile with the roles of Alice and Bob exchanged.
    MisclassProfile swapped() const;

    friend bool operator==(const MisclassProfile&, const MisclassProfile&) = default;
};

struct TdmDetectionProfile {
    double p_m = 0.0;
    double p_f = 0.0;
    double p_e_given_m = 0.0;

    void validate(double tol = 1e-9) const;

    friend bool operator==(const TdmDetectionProfile&, const TdmDetectionProfile&) = default;
};

/// The two-limit energy classifier with the A/B/A|B decision rule. Supports
/// are Eve's received-power ranges (dB) for each node transmitting alone.
struct ThresholdClassifier {
    double t1_db = -kInf;
    double t2_db = kInf;
    double a_min = 0.0;
    double a_max = 0.0;
    double b_min = 0.0;
    double b_max = 0.0;
    // The rule is written for Bob being the nearer node. When Alice is nearer
    // the supports are exchanged, the rule applied and the outcome swapped.
    bool mirrored = false;
    double silence_floor_db = -kInf;

    void validate() const;

    static ThresholdClassifier for_geometry(const Geometry& geom, const PowerDistribution& law_a,
                                            const PowerDistribution& law_b, double t1_db, double t2_db);
};

ClassOutcome classify_threshold(double r_db, const ThresholdClassifier& c);

enum class Source { a, b };

struct GaussianLevel {
    Source source;
    int level;
    double mean_db;
    double variance_db2;
};

/// Gaussian observation model per (source, power level) and the
/// maximum-likelihood ratio rule between the two sources.
class MlClassifier {
public:
    explicit MlClassifier(std::vector<GaussianLevel> levels, double silence_floor_db = -kInf);

    /// Whitespace-separated rows "source level mean_db variance_db2", '#'
    /// comments. Source is A or B.
    static MlClassifier load(std::istream& in);
    static MlClassifier load_file(const std::string& path);

    /// Fit mean and (population) variance per (source, level) from training
    /// observations in dB.
    struct Observation {
        Source source;
        int level;
        double power_db;
    };
    static MlClassifier fit(const std::vector<Observation>& training);

    /// Models centred on the received level of each discrete transmit level,
    /// all with spread `sigma_db`.
    static MlClassifier for_levels(const Geometry& geom, const PowerDistribution& law, double sigma_db);

    const std::vector<GaussianLevel>& levels() const { return levels_; }
    double silence_floor_db() const { return silence_floor_db_; }
    void set_silence_floor_db(double floor) { silence_floor_db_ = floor; }

    /// max_i log f_{X_i}(y) for one source.
    double max_log_density(Source source, double y_db) const;

    /// Observation values (dB) where the decision can change.
    std::vector<double> decision_boundaries_db() const;

    std::string write() const;

private:
    std::vector<GaussianLevel> levels_;
    double silence_floor_db_;
};

ClassOutcome classify_ml(double y_db, const MlClassifier& m);

/// Answers A|B for every non-silent symbol.
struct BlindClassifier {
    double silence_floor_db = -kInf;
};

/// Idealized adversary that knows the true event; concurrent symbols are
/// erased. Not realizable from power alone in general.
struct OracleClassifier {};

using Classifier = std::variant<ThresholdClassifier, MlClassifier, BlindClassifier, OracleClassifier>;

/// One decision. `power` is Eve's observed linear power; `truth` is only
/// consulted by the oracle.
ClassOutcome classify(const Classifier& c, double power, Event truth);

/// Symbol Eve recovers from a collision: the stronger arrival, fair coin on
/// an exact tie.
int capture_decode(int s_a, int s_b, double p_a_rx, double p_b_rx, RandomStream& rng);

/// Geometry-independent adversary description. Relative windows are offsets
/// from the lowest and highest solo received power and are resolved per
/// geometry and power law.
struct ClassifierSpec {
    enum class Kind { threshold, ml, blind, oracle };

    Kind kind = Kind::threshold;
    double t1_db = -kInf;
    double t2_db = kInf;
    bool relative = false;
    std::shared_ptr<const MlClassifier> ml;

    static ClassifierSpec no_erasure() { return {}; }
    static ClassifierSpec window(double t1_db, double t2_db, bool relative);
    static ClassifierSpec blind() { return {Kind::blind, -kInf, kInf, false, nullptr}; }
    static ClassifierSpec oracle() { return {Kind::oracle, -kInf, kInf, false, nullptr}; }

    bool erases() const { return t1_db != -kInf || t2_db != kInf; }

    std::string describe() const;
};

/// Two-way classifier for Eve at `geom` when both nodes use `law`.
Classifier build_classifier(const ClassifierSpec& spec, const Geometry& geom, const PowerDistribution& law,
                            const ChannelConfig& channel);

/// The TDM jam detector: accepts a symbol iff its power lies in [t1, t2].
struct WindowDetector {
    double t1_db = -kInf;
    double t2_db = kInf;
    bool oracle = false;

    bool accepts(double power) const;
};

/// TDM detector for data law f1 (Alice) at `geom`. Relative windows anchor on
/// the data support.
WindowDetector build_detector(const ClassifierSpec& spec, const Geometry& geom, const PowerDistribution& data_law);

struct ProfileMethod {
    enum class Kind { analytic, montecarlo };

    Kind kind = Kind::analytic;
    // Monte Carlo draws per event; also used when the analytic method falls
    // back to sampling (coherent superposition, noisy Eve).
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;

    static ProfileMethod analytic() { return {}; }
    static ProfileMethod montecarlo(std::uint64_t n, std::uint64_t seed) { return {Kind::montecarlo, n, seed}; }
};

MisclassProfile misclass_profile(const Geometry& geom, const PowerDistribution& law, const Classifier& cls,
                                 const ChannelConfig& channel, const ProfileMethod& method = {});

TdmDetectionProfile tdm_detection_profile(const Geometry& geom, const PowerDistribution& data_law,
                                          const PowerDistribution& jam_law, const WindowDetector& detector,
                                          const ChannelConfig& channel, const ProfileMethod& method = {});

/// Sampled profile with binomial standard errors and conditioning counts.
struct SampledMisclassProfile {
    MisclassProfile value;
    MisclassProfile std_error;
    std::array<std::uint64_t, 3> row_count{};
    std::uint64_t both_as_a_count = 0;
    std::uint64_t both_as_b_count = 0;
};

SampledMisclassProfile sample_misclass_profile(const Geometry& geom, const PowerDistribution& law,
                                               const Classifier& cls, const ChannelConfig& channel,
                                               std::uint64_t samples, std::uint64_t seed);

struct SampledTdmProfile {
    TdmDetectionProfile value;
    TdmDetectionProfile std_error;
    std::uint64_t clean_count = 0;
    std::uint64_t jammed_count = 0;
    std::uint64_t missed_count = 0;
};

SampledTdmProfile sample_tdm_profile(const Geometry& geom, const PowerDistribution& data_law,
                                     const PowerDistribution& jam_law, const WindowDetector& detector,
                                     const ChannelConfig& channel, std::uint64_t samples, std::uint64_t seed);

/// Eve's observed power for one interval. `noise` is only drawn from when
/// Eve is not noiseless.
double eve_observation(double p_a_rx, double p_b_rx, int sign_product, double phase_diff,
                       const ChannelConfig& channel, RandomStream& noise);

}  // namespace secrecy
