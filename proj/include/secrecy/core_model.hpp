#pragma once

#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "secrecy/random.hpp"

namespace secrecy {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// 10*log10(x); zero power maps to -inf.
double to_db(double linear);
double from_db(double db);

/// Alice at (-d_ab/2, 0), Bob at (+d_ab/2, 0), Eve on the circle of radius
/// r_e at angle theta. Angles are in radians.
struct Geometry {
    double d_ab = 1.0;
    double r_e = 0.55;
    double theta = std::numbers::pi / 2.0;
    double alpha = 2.0;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct NodeDistances {
    double d_ae;
    double d_be;

    double nearest() const { return d_ae < d_be ? d_ae : d_be; }
    double farthest() const { return d_ae < d_be ? d_be : d_ae; }
};

NodeDistances distances(const Geometry& geom);

/// rho / d^alpha. Throws DomainError for d <= 0 or rho < 0.
double received_power(double rho, double d, double alpha);

enum class Superposition { incoherent, coherent };

struct ChannelConfig {
    Superposition mode = Superposition::incoherent;
    double wave_number = 0.0;  // rad per length unit, coherent mode only
    bool eve_noiseless = true;
    double legit_noise_variance = 1.0;
    // Noisy-Eve simulator experiments only.
    double eve_noise_power = 1e-6;
    double silence_floor_db = -kInf;

    void validate() const;

    /// k * (d_AE - d_BE).
    double phase_difference(const NodeDistances& d) const { return wave_number * (d.d_ae - d.d_be); }

    /// Analytic profile evaluation is only closed-form for incoherent,
    /// noiseless observations.
    bool closed_form() const { return mode == Superposition::incoherent && eve_noiseless; }
};

/// Power observed when both contributions arrive together. Coherent mode
/// adds the cross term 2*s*sqrt(pA*pB)*cos(phase) and clamps at zero.
double superpose(double p_a, double p_b, Superposition mode, double phase_diff = 0.0, int sign_product = 1);

/// Randomized transmit-power law, in linear units (SNR at unit distance).
class PowerDistribution {
public:
    enum class Kind { uniform_linear, discrete_levels };

    struct Level {
        double power;
        double probability;
    };

    PowerDistribution() : PowerDistribution(uniform(1.0, 1.0)) {}

    static PowerDistribution uniform(double rho_min, double rho_max);
    /// Uniform in linear power between two endpoints given in dB.
    static PowerDistribution uniform_db(double lo_db, double hi_db);
    static PowerDistribution discrete(std::vector<Level> levels);

    Kind kind() const { return kind_; }
    double min() const { return min_; }
    double max() const { return max_; }
    const std::vector<Level>& levels() const { return levels_; }

    /// Degenerate uniform laws behave as a single level.
    bool is_point_mass() const { return kind_ == Kind::uniform_linear && min_ == max_; }

    /// Law of factor * X; used to map transmit laws to received laws.
    PowerDistribution scaled(double factor) const;

    double sample(RandomStream& rng) const;

    double mean() const;

    /// Compact text form, e.g. "U[0,40]dB" or "D{0:0.5,3:0.5}dB".
    std::string describe() const;

    friend bool operator==(const PowerDistribution&, const PowerDistribution&) = default;

private:
    PowerDistribution(Kind kind, double lo, double hi, std::vector<Level> levels, std::vector<double> cumulative);

    Kind kind_;
    double min_;
    double max_;
    std::vector<Level> levels_;
    std::vector<double> cumulative_;
};

inline double sample_power(const PowerDistribution& dist, RandomStream& rng) { return dist.sample(rng); }

/// Distance ratio whose path-loss difference equals gap_db: 10^(-gap/(10*alpha)).
double distance_ratio_from_power_gap(double gap_db, double alpha);

/// Angle in [0, pi/2] placing Eve so that d_min/d_max == ratio with Bob the
/// nearer node (d_BE <= d_AE). Returns a negative value when the ratio is not
/// realizable on the circle of radius r_e.
double theta_for_distance_ratio(double ratio, double d_ab, double r_e);

}  // namespace secrecy
