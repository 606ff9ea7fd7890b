#include "secrecy/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "secrecy/errors.hpp"

namespace secrecy {

namespace {

constexpr double kClampBand = 1e-9;

double clamp_probability(double p, const char* what) {
    if (!(p >= -kClampBand && p <= 1.0 + kClampBand)) throw DomainError(std::string(what) + ": probability out of range");
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double binary_entropy(double p) {
    p = clamp_probability(p, "binary_entropy");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double legit_error_prob(double rho, double d_ab, double alpha, const FecConfig& fec, double noise_variance) {
    if (rho < 0.0) throw DomainError("legit_error_prob: rho must be >= 0");
    if (!(d_ab > 0.0)) throw DomainError("legit_error_prob: d_ab must be > 0");
    const double snr = received_power(rho, d_ab, alpha) / noise_variance;
    if (fec.ideal && snr >= fec.threshold_snr) return 0.0;
    return 1.0 - phi(std::sqrt(snr));
}

double erasure_channel_rate(double alpha_erase, double p_e) {
    alpha_erase = clamp_probability(alpha_erase, "erasure_channel_rate");
    return (1.0 - alpha_erase) * (1.0 - binary_entropy(p_e));
}

double average_legit_error_prob(const PowerDistribution& law, double d_ab, double alpha, const FecConfig& fec,
                                double noise_variance) {
    if (law.kind() == PowerDistribution::Kind::discrete_levels) {
        double mean = 0.0;
        for (const auto& level : law.levels())
            mean += level.probability * legit_error_prob(level.power, d_ab, alpha, fec, noise_variance);
        return mean;
    }
    if (law.is_point_mass()) return legit_error_prob(law.min(), d_ab, alpha, fec, noise_variance);
    // Composite Simpson; the integrand is smooth apart from the FEC step,
    // which sits on a panel edge when the threshold falls inside the support.
    const auto f = [&](double rho) { return legit_error_prob(rho, d_ab, alpha, fec, noise_variance); };
    const auto simpson = [&](double lo, double hi) {
        constexpr int panels = 2048;
        const double h = (hi - lo) / panels;
        double sum = f(lo) + f(hi);
        for (int i = 1; i < panels; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
        return sum * h / 3.0;
    };
    double lo = law.min();
    double hi = law.max();
    double total = 0.0;
    if (fec.ideal) {
        const double rho_threshold = fec.threshold_snr * noise_variance * std::pow(d_ab, alpha);
        if (rho_threshold > lo && rho_threshold < hi) {
            total += simpson(lo, rho_threshold);
            lo = rho_threshold;
        }
    }
    total += simpson(lo, hi);
    return total / (law.max() - law.min());
}

RateBreakdownTdm tdm_bounds(double beta, const TdmDetectionProfile& prof, const Geometry& geom, double rho_min,
                            const FecConfig& fec, double noise_variance) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("tdm_bounds: beta must be in [0,1]");
    prof.validate();
    RateBreakdownTdm out;
    out.alpha_M = beta;
    out.p_e_M = legit_error_prob(rho_min, geom.d_ab, geom.alpha, fec, noise_variance);
    out.r_M = erasure_channel_rate(out.alpha_M, out.p_e_M);
    out.alpha_E = std::clamp(beta * (1.0 - prof.p_m) + (1.0 - beta) * prof.p_f, 0.0, 1.0);
    const double error_mass = beta * prof.p_m * prof.p_e_given_m;
    if (out.alpha_E >= 1.0) {
        if (error_mass > 1e-12) throw ContractViolation("tdm_bounds: error mass with every symbol erased");
        out.p_e_E = 0.0;
    } else {
        out.p_e_E = error_mass / (1.0 - out.alpha_E);
    }
    out.r_E = erasure_channel_rate(out.alpha_E, out.p_e_E);
    out.r_s = std::max(0.0, out.r_M - out.r_E);
    return out;
}

RateBreakdownTwoWay twoway_bounds(double p_t, const MisclassProfile& prof, const Geometry& geom, double rho_min,
                                  const FecConfig& fec, double noise_variance) {
    if (!(p_t >= 0.0 && p_t <= 1.0)) throw DomainError("twoway_bounds: p_t must be in [0,1]");
    prof.validate();
    const auto P = [&prof](Event e, Label l) { return prof.at(e, l); };
    const double both = p_t * p_t;
    const double solo = p_t * (1.0 - p_t);

    RateBreakdownTwoWay out;
    out.p_e_M = legit_error_prob(rho_min, geom.d_ab, geom.alpha, fec, noise_variance);
    out.r_M = solo * (1.0 - binary_entropy(out.p_e_M));

    out.d_A = both * P(Event::both, Label::a) + solo * P(Event::b_only, Label::a) +
              solo * (1.0 - P(Event::a_only, Label::b) - P(Event::a_only, Label::other));
    out.d_B = both * P(Event::both, Label::b) + solo * P(Event::a_only, Label::b) +
              solo * (1.0 - P(Event::b_only, Label::a) - P(Event::b_only, Label::other));
    out.p_e_EA = both * P(Event::both, Label::a) * prof.p_e_both_as_a + 0.5 * solo * P(Event::b_only, Label::a);
    out.p_e_EB = both * P(Event::both, Label::b) * prof.p_e_both_as_b + 0.5 * solo * P(Event::a_only, Label::b);

    const auto eve_rate = [](double share, double error_mass) {
        if (error_mass > share + 1e-12) throw ContractViolation("twoway_bounds: error mass exceeds classified share");
        if (share <= 0.0) return 0.0;
        return share * (1.0 - binary_entropy(std::min(1.0, error_mass / share)));
    };
    out.r_EA = eve_rate(out.d_A, out.p_e_EA);
    out.r_EB = eve_rate(out.d_B, out.p_e_EB);
    out.r_s = std::max(0.0, out.r_M - std::max(out.r_EA, out.r_EB));
    return out;
}

}  // namespace secrecy
