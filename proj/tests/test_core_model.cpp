#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "secrecy/core_model.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

using namespace secrecy;

namespace {

Geometry geom(double d_ab, double r_e, double theta) {
    Geometry g;
    g.d_ab = d_ab;
    g.r_e = r_e;
    g.theta = theta;
    return g;
}

}  // namespace

TEST(Distances, SymmetricPoint) {
    const auto d = distances(geom(2, 5, std::numbers::pi / 2));
    EXPECT_NEAR(d.d_ae, std::sqrt(26.0), 1e-12);
    EXPECT_NEAR(d.d_be, std::sqrt(26.0), 1e-12);
}

TEST(Distances, Collinear) {
    const auto d = distances(geom(2, 5, 0));
    EXPECT_NEAR(d.d_ae, 6.0, 1e-12);
    EXPECT_NEAR(d.d_be, 4.0, 1e-12);
}

TEST(Distances, LawOfCosinesExample) {
    const auto d = distances(geom(1, 3, std::numbers::pi / 3));
    const auto o = oracle::distances(1, 3, std::numbers::pi / 3);
    EXPECT_NEAR(d.d_ae, o.d_ae, 1e-12);
    EXPECT_NEAR(d.d_be, o.d_be, 1e-12);
    EXPECT_NEAR(d.d_ae, 3.279, 5e-4);
    EXPECT_NEAR(d.d_be, 2.784, 5e-4);
}

TEST(Distances, ReflectionAndSwapSymmetry) {
    for (double theta = 0.0; theta <= std::numbers::pi; theta += 0.1) {
        const auto d = distances(geom(1, 0.8, theta));
        const auto r = distances(geom(1, 0.8, -theta));
        const auto s = distances(geom(1, 0.8, std::numbers::pi - theta));
        EXPECT_DOUBLE_EQ(d.d_ae, r.d_ae);
        EXPECT_DOUBLE_EQ(d.d_be, r.d_be);
        EXPECT_NEAR(d.d_ae, s.d_be, 1e-14);
        EXPECT_NEAR(d.d_be, s.d_ae, 1e-14);
    }
}

TEST(Geometry, RejectsInvalid) {
    EXPECT_THROW(geom(0, 1, 0).validate(), ConfigError);
    EXPECT_THROW(geom(2, 0.9, 0).validate(), ConfigError);
    auto g = geom(1, 1, 0);
    g.alpha = 0;
    EXPECT_THROW(g.validate(), ConfigError);
    EXPECT_THROW(geom(1, 0.5, 0).validate(), ConfigError);  // Eve on top of Bob
    EXPECT_NO_THROW(geom(1, 0.5, std::numbers::pi / 2).validate());
}

TEST(ReceivedPower, Examples) {
    EXPECT_DOUBLE_EQ(received_power(4, 2, 2), 1.0);
    EXPECT_DOUBLE_EQ(received_power(7, 1, 2), 7.0);
    EXPECT_NEAR(received_power(10, 3, 2), 10.0 / 9.0, 1e-15);
    EXPECT_THROW(received_power(1, 0, 2), DomainError);
    EXPECT_THROW(received_power(-1, 1, 2), DomainError);
}

TEST(ReceivedPower, DecreasingInDistanceLinearInRho) {
    double prev = kInf;
    for (double d = 0.1; d < 10; d += 0.1) {
        const double p = received_power(3, d, 2.7);
        EXPECT_LT(p, prev);
        prev = p;
        EXPECT_NEAR(received_power(6, d, 2.7), 2 * p, 1e-12 * p);
    }
}

TEST(Superpose, Examples) {
    EXPECT_DOUBLE_EQ(superpose(1, 0, Superposition::incoherent), 1.0);
    EXPECT_DOUBLE_EQ(superpose(1, 2, Superposition::incoherent), 3.0);
    EXPECT_DOUBLE_EQ(superpose(1, 1, Superposition::coherent, std::numbers::pi, 1), 0.0);
    EXPECT_NEAR(superpose(1, 1, Superposition::coherent, 0.0, 1), 4.0, 1e-12);
    EXPECT_NEAR(superpose(1, 1, Superposition::coherent, 0.0, -1), 0.0, 1e-12);
}

TEST(Superpose, IncoherentCommutativeAndDominant) {
    for (double a : {0.0, 0.3, 2.0})
        for (double b : {0.0, 1.5, 7.0}) {
            EXPECT_EQ(superpose(a, b, Superposition::incoherent), superpose(b, a, Superposition::incoherent));
            EXPECT_GE(superpose(a, b, Superposition::incoherent), std::max(a, b));
        }
}

TEST(PowerDistribution, DegenerateAndSingleLevel) {
    RandomStream rng(3, Substream::power);
    const auto u = PowerDistribution::uniform(2.5, 2.5);
    const auto d = PowerDistribution::discrete({{3.0, 1.0}});
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(sample_power(u, rng), 2.5);
        EXPECT_EQ(sample_power(d, rng), 3.0);
    }
}

TEST(PowerDistribution, Invariants) {
    EXPECT_THROW(PowerDistribution::uniform(0, 1), ConfigError);
    EXPECT_THROW(PowerDistribution::uniform(2, 1), ConfigError);
    EXPECT_THROW(PowerDistribution::discrete({{1.0, 0.5}, {2.0, 0.4}}), ConfigError);
    EXPECT_THROW(PowerDistribution::discrete({{0.0, 1.0}}), ConfigError);
    EXPECT_THROW(PowerDistribution::discrete({}), ConfigError);
    EXPECT_NO_THROW(PowerDistribution::discrete({{1.0, 0.5}, {2.0, 0.5 + 1e-13}}));
}

TEST(PowerDistribution, UniformMomentsAndKs) {
    const auto law = PowerDistribution::uniform(1, 2);
    RandomStream rng(11, Substream::power);
    const int n = 1'000'000;
    std::vector<double> xs(n);
    double sum = 0;
    for (auto& x : xs) {
        x = sample_power(law, rng);
        sum += x;
    }
    EXPECT_NEAR(sum / n, 1.5, 3 * (1 / std::sqrt(12.0)) / 1e3);
    std::sort(xs.begin(), xs.end());
    double ks = 0;
    for (int i = 0; i < n; ++i) {
        const double cdf = xs[i] - 1.0;
        ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    // 3-sigma style band: the KS 0.999 quantile is about 1.95 / sqrt(n).
    EXPECT_LT(ks, 1.95 / std::sqrt(static_cast<double>(n)));
}

TEST(PowerDistribution, DiscreteFrequencies) {
    const auto law = PowerDistribution::discrete({{1.0, 0.2}, {4.0, 0.5}, {9.0, 0.3}});
    RandomStream rng(5, Substream::power);
    const int n = 1'000'000;
    std::array<int, 3> count{};
    for (int i = 0; i < n; ++i) {
        const double x = sample_power(law, rng);
        count[x == 1.0 ? 0 : x == 4.0 ? 1 : 2]++;
    }
    const double p[] = {0.2, 0.5, 0.3};
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(count[k] / double(n), p[k], 3 * std::sqrt(p[k] * (1 - p[k]) / n));
}

TEST(PowerDistribution, SamplingIsDeterministic) {
    const auto law = PowerDistribution::uniform_db(0, 30);
    RandomStream a(99, Substream::power, 4), b(99, Substream::power, 4);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(law.sample(a), law.sample(b));
}

TEST(PowerDistribution, ScaledAndDescribe) {
    const auto law = PowerDistribution::uniform_db(0, 20);
    EXPECT_NEAR(law.min(), 1.0, 1e-15);
    EXPECT_NEAR(law.max(), 100.0, 1e-12);
    const auto s = law.scaled(0.5);
    EXPECT_NEAR(s.min(), 0.5, 1e-15);
    EXPECT_NEAR(s.max(), 50.0, 1e-12);
    EXPECT_EQ(law.describe(), "U[0:20]dB");
    EXPECT_NEAR(law.mean(), 50.5, 1e-12);
}

TEST(DistanceRatio, PowerGapMapping) {
    EXPECT_NEAR(distance_ratio_from_power_gap(2, 2), 0.794, 5e-4);
    EXPECT_NEAR(distance_ratio_from_power_gap(19, 2), 0.112, 5e-4);
    EXPECT_DOUBLE_EQ(distance_ratio_from_power_gap(0, 2), 1.0);
    EXPECT_THROW(distance_ratio_from_power_gap(-1, 2), DomainError);
}

TEST(DistanceRatio, ThetaRealizesRatio) {
    for (double r_e : {0.55, 1.0, 5.0}) {
        for (double q = 0.05; q <= 1.0; q += 0.05) {
            const double theta = theta_for_distance_ratio(q, 1.0, r_e);
            const double q_min = (r_e - 0.5) / (r_e + 0.5);
            if (q < q_min - 1e-12) {
                EXPECT_LT(theta, 0) << q << " " << r_e;
                continue;
            }
            ASSERT_GE(theta, 0) << q << " " << r_e;
            EXPECT_LE(theta, std::numbers::pi / 2 + 1e-12);
            const auto d = oracle::distances(1.0, r_e, theta);
            EXPECT_LE(d.d_be, d.d_ae + 1e-12);
            EXPECT_NEAR(d.d_be / d.d_ae, q, 1e-9);
        }
    }
    EXPECT_NEAR(theta_for_distance_ratio(1.0, 1.0, 0.55), std::numbers::pi / 2, 1e-12);
}

TEST(Format, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123, -2.5, 0.30000000000000004}) {
        double back = 0;
        ASSERT_TRUE(parse_number(format_number(v), back));
        EXPECT_EQ(back, v);
    }
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(kInf), "inf");
    double x = 0;
    EXPECT_TRUE(parse_number("-inf", x));
    EXPECT_EQ(x, -kInf);
    EXPECT_FALSE(parse_number("1.5x", x));
    EXPECT_FALSE(parse_number("", x));
}
