#include "secrecy/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

namespace secrecy {

double to_db(double linear) {
    if (linear < 0.0) throw DomainError("to_db: negative power");
    return linear == 0.0 ? -kInf : 10.0 * std::log10(linear);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

void Geometry::validate() const {
    if (!(d_ab > 0.0) || !std::isfinite(d_ab)) throw ConfigError("geometry.d_ab must be a positive finite length");
    if (!(r_e >= d_ab / 2.0) || !std::isfinite(r_e))
        throw ConfigError("geometry.r_e must be >= geometry.d_ab / 2 (Alice and Bob inside Eve's exclusion circle)");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("geometry.alpha must be > 0");
    if (!std::isfinite(theta)) throw ConfigError("geometry.theta must be finite");
    const auto d = distances(*this);
    if (!(d.d_ae > 0.0) || !(d.d_be > 0.0))
        throw ConfigError("geometry places Eve on top of a legitimate node (zero distance)");
}

NodeDistances distances(const Geometry& geom) {
    const double base = geom.r_e * geom.r_e + geom.d_ab * geom.d_ab / 4.0;
    const double cross = geom.r_e * geom.d_ab * std::cos(geom.theta);
    return {std::sqrt(std::max(0.0, base + cross)), std::sqrt(std::max(0.0, base - cross))};
}

double received_power(double rho, double d, double alpha) {
    if (!(d > 0.0)) throw DomainError("received_power: distance must be > 0");
    if (rho < 0.0) throw DomainError("received_power: power must be >= 0");
    return rho / std::pow(d, alpha);
}

void ChannelConfig::validate() const {
    if (!(legit_noise_variance > 0.0)) throw ConfigError("channel.legit_noise_variance must be > 0");
    if (!(wave_number >= 0.0) || !std::isfinite(wave_number)) throw ConfigError("channel.wave_number must be >= 0");
    if (!(eve_noise_power >= 0.0)) throw ConfigError("channel.eve_noise_power must be >= 0");
}

double superpose(double p_a, double p_b, Superposition mode, double phase_diff, int sign_product) {
    if (p_a < 0.0 || p_b < 0.0) throw DomainError("superpose: powers must be >= 0");
    if (mode == Superposition::incoherent) return p_a + p_b;
    const double cross = 2.0 * sign_product * std::sqrt(p_a * p_b) * std::cos(phase_diff);
    const double total = p_a + p_b + cross;
    // Cancellation leaves rounding residue of either sign.
    const double tol = 1e-12 * (p_a + p_b);
    return total <= tol ? 0.0 : total;
}

PowerDistribution::PowerDistribution(Kind kind, double lo, double hi, std::vector<Level> levels,
                                     std::vector<double> cumulative)
    : kind_(kind), min_(lo), max_(hi), levels_(std::move(levels)), cumulative_(std::move(cumulative)) {}

PowerDistribution PowerDistribution::uniform(double rho_min, double rho_max) {
    if (!(rho_min > 0.0) || !(rho_max >= rho_min) || !std::isfinite(rho_max))
        throw ConfigError("uniform power law requires 0 < rho_min <= rho_max");
    return PowerDistribution(Kind::uniform_linear, rho_min, rho_max, {}, {});
}

PowerDistribution PowerDistribution::uniform_db(double lo_db, double hi_db) {
    if (!(lo_db <= hi_db)) throw ConfigError("uniform power law requires lo_db <= hi_db");
    const double lo = from_db(lo_db);
    // Keep the point-mass case exact.
    return uniform(lo, lo_db == hi_db ? lo : from_db(hi_db));
}

PowerDistribution PowerDistribution::discrete(std::vector<Level> levels) {
    if (levels.empty()) throw ConfigError("discrete power law needs at least one level");
    double total = 0.0;
    std::vector<double> cumulative;
    cumulative.reserve(levels.size());
    for (const auto& level : levels) {
        if (!(level.power > 0.0) || !std::isfinite(level.power)) throw ConfigError("discrete power levels must be > 0");
        if (!(level.probability >= 0.0)) throw ConfigError("discrete level probabilities must be >= 0");
        total += level.probability;
        cumulative.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("discrete level probabilities must sum to 1");
    cumulative.back() = 1.0;
    const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end(),
                                              [](const Level& a, const Level& b) { return a.power < b.power; });
    const double lo_power = lo->power;
    const double hi_power = hi->power;
    return PowerDistribution(Kind::discrete_levels, lo_power, hi_power, std::move(levels), std::move(cumulative));
}

PowerDistribution PowerDistribution::scaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("PowerDistribution::scaled: factor must be > 0");
    if (kind_ == Kind::uniform_linear) {
        return PowerDistribution(kind_, min_ * factor, max_ * factor, {}, {});
    }
    auto levels = levels_;
    for (auto& level : levels) level.power *= factor;
    return PowerDistribution(kind_, min_ * factor, max_ * factor, std::move(levels), cumulative_);
}

double PowerDistribution::sample(RandomStream& rng) const {
    if (kind_ == Kind::uniform_linear) {
        if (min_ == max_) {
            rng.next();  // keep stream consumption independent of the law
            return min_;
        }
        return rng.uniform(min_, max_);
    }
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto index = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), levels_.size() - 1);
    return levels_[index].power;
}

double PowerDistribution::mean() const {
    if (kind_ == Kind::uniform_linear) return 0.5 * (min_ + max_);
    double m = 0.0;
    for (const auto& level : levels_) m += level.power * level.probability;
    return m;
}

std::string PowerDistribution::describe() const {
    std::ostringstream out;
    if (kind_ == Kind::uniform_linear) {
        out << "U[" << format_label(to_db(min_)) << ':' << format_label(to_db(max_)) << "]dB";
        return out.str();
    }
    out << "D{";
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (i) out << ';';
        out << format_label(to_db(levels_[i].power)) << '@' << format_label(levels_[i].probability);
    }
    out << "}dB";
    return out.str();
}

double distance_ratio_from_power_gap(double gap_db, double alpha) {
    if (!(gap_db >= 0.0)) throw DomainError("distance_ratio_from_power_gap: gap must be >= 0 dB");
    if (!(alpha > 0.0)) throw DomainError("distance_ratio_from_power_gap: alpha must be > 0");
    return std::pow(10.0, -gap_db / (10.0 * alpha));
}

double theta_for_distance_ratio(double ratio, double d_ab, double r_e) {
    if (!(ratio > 0.0) || ratio > 1.0) return -1.0;
    // d_max^2 + d_min^2 is fixed by the circle; d_max^2 - d_min^2 = 2 r d cos(theta).
    const double sum_sq = 2.0 * r_e * r_e + d_ab * d_ab / 2.0;
    const double d_max_sq = sum_sq / (1.0 + ratio * ratio);
    const double d_min_sq = ratio * ratio * d_max_sq;
    const double c = (d_max_sq - d_min_sq) / (2.0 * r_e * d_ab);
    if (c > 1.0 + 1e-12) return -1.0;
    if (ratio == 1.0) return std::numbers::pi / 2.0;
    return std::acos(std::min(1.0, c));
}

}  // namespace secrecy
