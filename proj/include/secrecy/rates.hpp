#pragma once

#include "secrecy/classifier.hpp"
#include "secrecy/core_model.hpp"

namespace secrecy {

/// Legitimate-link coding assumption. In ideal mode the links carry enough
/// forward error correction that the residual symbol-error entropy vanishes
/// once rho / d_AB^alpha reaches `threshold_snr`.
struct FecConfig {
    bool ideal = true;
    double threshold_snr = 0.0;
};

/// H(p) in bits. Arguments within 1e-9 outside [0,1] are clamped; anything
/// further out throws DomainError.
double binary_entropy(double p);

/// Standard normal CDF.
double phi(double x);

/// Hard-decision BPSK error probability 1 - phi(sqrt(rho / (noise * d^alpha))),
/// or 0 under ideal FEC above the threshold.
double legit_error_prob(double rho, double d_ab, double alpha, const FecConfig& fec = {.ideal = false},
                        double noise_variance = 1.0);

/// (1 - alpha_erase) * (1 - H(p_e)).
double erasure_channel_rate(double alpha_erase, double p_e);

/// Mean of legit_error_prob over the power law (the average-case quantity the
/// rho_min bound sits below).
double average_legit_error_prob(const PowerDistribution& law, double d_ab, double alpha, const FecConfig& fec,
                                double noise_variance = 1.0);

struct RateBreakdownTdm {
    double alpha_M = 0.0;
    double alpha_E = 0.0;
    double p_e_M = 0.0;
    double p_e_E = 0.0;
    double r_M = 0.0;
    double r_E = 0.0;
    double r_s = 0.0;
};

struct RateBreakdownTwoWay {
    double r_M = 0.0;
    double p_e_M = 0.0;
    double d_A = 0.0;
    double d_B = 0.0;
    double p_e_EA = 0.0;
    double p_e_EB = 0.0;
    double r_EA = 0.0;
    double r_EB = 0.0;
    double r_s = 0.0;
};

/// Randomized-feedback (TDM) lower bound at jamming probability beta, before
/// the 0.5 time-division factor.
RateBreakdownTdm tdm_bounds(double beta, const TdmDetectionProfile& prof, const Geometry& geom, double rho_min,
                            const FecConfig& fec, double noise_variance = 1.0);

/// Randomized-scheduling two-way lower bound at transmit probability p_t.
RateBreakdownTwoWay twoway_bounds(double p_t, const MisclassProfile& prof, const Geometry& geom, double rho_min,
                                  const FecConfig& fec, double noise_variance = 1.0);

}  // namespace secrecy
