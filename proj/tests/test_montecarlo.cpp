#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/montecarlo.hpp"

using namespace secrecy;

namespace {

SimConfig twoway_cfg(std::uint64_t frames, std::uint64_t seed = 3) {
    SimConfig cfg;
    cfg.frames = frames;
    cfg.seed = seed;
    cfg.fec = FecConfig{.ideal = true, .threshold_snr = 0.0};
    return cfg;
}

SimConfig tdm_cfg(std::uint64_t frames, double beta, std::uint64_t seed = 5) {
    SimConfig cfg = twoway_cfg(frames, seed);
    cfg.scheme = Scheme::tdm;
    cfg.beta = beta;
    cfg.geometry.r_e = 0.8;
    cfg.geometry.theta = 1.0;
    return cfg;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST(SimulateTwoWay, ActivityMatchesSchedulingProbability) {
    auto cfg = twoway_cfg(400'000);
    cfg.p_t = 0.3;
    const auto sim = simulate_twoway(cfg);
    const auto& t = sim.profile.twoway;
    const double n = static_cast<double>(t.frames);
    const double se = std::sqrt(0.3 * 0.7 / n);
    EXPECT_EQ(t.frames, 400'000u);
    EXPECT_NEAR(t.a_active / n, 0.3, 4 * se);
    EXPECT_NEAR(t.b_active / n, 0.3, 4 * se);
    const double both_se = std::sqrt(0.09 * 0.91 / n);
    EXPECT_NEAR(t.event_count[0] / n, 0.09, 4 * both_se);
}

TEST(SimulateTwoWay, ZeroSchedulingIsFlagged) {
    auto cfg = twoway_cfg(10'000);
    cfg.p_t = 0.0;
    const auto sim = simulate_twoway(cfg);
    const auto undefined = sim.profile.undefined_estimates();
    EXPECT_TRUE(contains(undefined, "legit_error_rate"));
    EXPECT_FALSE(sim.profile.misclass(Event::both, Label::a).defined());
    EXPECT_EQ(sim.profile.twoway.event_count[static_cast<std::size_t>(Event::none)], 10'000u);
    // Every rate term has zero weight, so the bound is still defined and zero.
    ASSERT_TRUE(sim.rates.has_value());
    EXPECT_EQ(sim.rates->r_s, 0.0);
}

TEST(SimulateTwoWay, BlindSymmetricRates) {
    auto cfg = twoway_cfg(1'000'000);
    cfg.classifier = ClassifierSpec::blind();
    const auto sim = simulate_twoway(cfg);
    ASSERT_TRUE(sim.rates.has_value());
    const auto o = oracle::twoway(0.5, [] {
        oracle::Profile q;
        for (auto& row : q.p) row = {0.5, 0.5, 0.0};
        q.e_a = q.e_b = 0.25;
        return q;
    }());
    EXPECT_NEAR(sim.rates->d_A, 0.375, 0.0015);
    EXPECT_NEAR(sim.rates->d_B, 0.375, 0.0015);
    EXPECT_NEAR(sim.rates->r_s, o.r_s, 0.005);
    EXPECT_NEAR(sim.rates->r_s, 0.17923, 0.005);
}

TEST(SimulateTwoWay, ConditioningCountsAndHalfDuplex) {
    auto cfg = twoway_cfg(200'000);
    cfg.p_t = 0.4;
    cfg.geometry.theta = 0.7;
    const auto t = simulate_twoway(cfg).profile.twoway;
    for (Event e : {Event::both, Event::a_only, Event::b_only}) {
        const auto& row = t.class_count[static_cast<std::size_t>(e)];
        EXPECT_EQ(row[0] + row[1] + row[2], t.event_count[static_cast<std::size_t>(e)]);
    }
    std::uint64_t events = 0;
    for (auto c : t.event_count) events += c;
    EXPECT_EQ(events, t.frames);
    // Only a lone transmitter reaches the other node.
    EXPECT_EQ(t.legit_decodable,
              t.event_count[static_cast<std::size_t>(Event::a_only)] +
                  t.event_count[static_cast<std::size_t>(Event::b_only)]);
    EXPECT_EQ(t.legit_errors, 0u);
    EXPECT_LE(t.capture_errors[0], t.class_count[0][0]);
    EXPECT_LE(t.capture_errors[1], t.class_count[0][1]);
}

TEST(SimulateTwoWay, NoisyLegitLinkErrorRate) {
    auto cfg = twoway_cfg(400'000);
    cfg.fec = FecConfig{.ideal = false};
    cfg.power = PowerDistribution::uniform(1.0, 1.0);
    const auto sim = simulate_twoway(cfg);
    const auto e = sim.profile.legit_error_rate();
    const double p = 1 - oracle::phi(1.0);
    EXPECT_NEAR(e.value, p, 4 * std::sqrt(p * (1 - p) / e.n));
}

TEST(SimulateTwoWay, ThreadInvariantAndMatchesReference) {
    auto cfg = twoway_cfg(3 * kShardFrames + 123);
    cfg.geometry.theta = 0.9;
    const auto one = simulate_twoway(cfg, 1);
    const auto many = simulate_twoway(cfg, 4);
    const auto ref = reference::simulate_twoway(cfg);
    EXPECT_EQ(one.profile, many.profile);
    EXPECT_EQ(one.profile, ref.profile);
    ASSERT_TRUE(one.rates && ref.rates);
    EXPECT_EQ(one.rates->r_s, ref.rates->r_s);
}

TEST(SimulateTwoWay, SeedChangesOutcome) {
    const auto a = simulate_twoway(twoway_cfg(50'000, 1));
    const auto b = simulate_twoway(twoway_cfg(50'000, 2));
    EXPECT_NE(a.profile.twoway, b.profile.twoway);
}

TEST(SimulateTwoWay, AgreesWithAnalyticProfile) {
    auto cfg = twoway_cfg(1'000'000);
    cfg.geometry.theta = 0.6;
    cfg.power = PowerDistribution::uniform_db(0, 10);
    const auto sim = simulate_twoway(cfg);
    const auto cls = build_classifier(cfg.classifier, cfg.geometry, cfg.power, cfg.channel);
    const auto analytic = misclass_profile(cfg.geometry, cfg.power, cls, cfg.channel);
    const auto report = compare_profiles(analytic, sim.profile);
    EXPECT_TRUE(report.pass) << report.fraction_within;
}

TEST(SimulateTwoWay, TraceHeaderAndRows) {
    auto cfg = twoway_cfg(20);
    std::ostringstream trace;
    reference::simulate_twoway(cfg, &trace);
    std::istringstream in(trace.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "index,a_active,b_active,p_a_db,p_b_db,eve_db,outcome,decode_correct");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 20);
}

TEST(SimulateTdm, NoJammingLeavesMissUndefined) {
    const auto sim = simulate_tdm(tdm_cfg(20'000, 0.0));
    EXPECT_FALSE(sim.profile.p_m().defined());
    EXPECT_TRUE(contains(sim.profile.undefined_estimates(), "p_m"));
    ASSERT_TRUE(sim.rates.has_value());
    EXPECT_EQ(sim.rates->r_s, 0.0);
}

TEST(SimulateTdm, OpenWindowAcceptsEverything) {
    const auto sim = simulate_tdm(tdm_cfg(100'000, 0.4));
    EXPECT_EQ(sim.profile.p_m().value, 1.0);
    EXPECT_EQ(sim.profile.p_f().value, 0.0);
    EXPECT_EQ(sim.profile.tdm.clean + sim.profile.tdm.jammed, 100'000u);
    EXPECT_EQ(sim.profile.tdm.legit_decodable, sim.profile.tdm.clean);
}

TEST(SimulateTdm, OracleDetectorNeverMisses) {
    auto cfg = tdm_cfg(50'000, 0.5);
    cfg.classifier = ClassifierSpec::oracle();
    const auto sim = simulate_tdm(cfg);
    EXPECT_EQ(sim.profile.p_m().value, 0.0);
    EXPECT_EQ(sim.profile.p_f().value, 0.0);
}

TEST(SimulateTdm, AgreesWithBruteForce) {
    auto cfg = tdm_cfg(1'000'000, 0.5);
    cfg.power = PowerDistribution::uniform_db(0, 10);
    cfg.jam_power = PowerDistribution::uniform_db(3, 13);
    cfg.classifier = ClassifierSpec::window(-2.0, 12.0, false);
    const auto sim = simulate_tdm(cfg);
    const auto o = oracle::tdm_detection(1.0, 0.8, 1.0, 2.0, 1.0, 10.0, std::pow(10.0, 0.3), std::pow(10.0, 1.3),
                                         {-2.0, 12.0});
    const auto check = [](const Estimate& e, double p) {
        const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / e.n);
        EXPECT_NEAR(e.value, p, 3 * se + 2e-3);
    };
    check(sim.profile.p_m(), o.p_m);
    check(sim.profile.p_f(), o.p_f);
    check(sim.profile.p_e_given_m(), o.p_e_m);

    const auto detector = build_detector(cfg.classifier, cfg.geometry, cfg.power);
    const auto analytic = tdm_detection_profile(cfg.geometry, cfg.power, cfg.jam_power, detector, cfg.channel);
    EXPECT_TRUE(compare_profiles(analytic, sim.profile).pass);
}

TEST(SimulateTdm, ThreadInvariantAndMatchesReference) {
    auto cfg = tdm_cfg(2 * kShardFrames + 7, 0.35);
    cfg.classifier = ClassifierSpec::window(0.0, 3.0, true);
    const auto one = simulate_tdm(cfg, 1);
    const auto many = simulate_tdm(cfg, 3);
    const auto ref = reference::simulate_tdm(cfg);
    EXPECT_EQ(one.profile, many.profile);
    EXPECT_EQ(one.profile, ref.profile);
}

TEST(CompareProfiles, IdenticalBlindAndCorrupted) {
    auto cfg = twoway_cfg(400'000);
    cfg.classifier = ClassifierSpec::blind();
    const auto sim = simulate_twoway(cfg);

    // The empirical profile against itself is exactly within.
    const auto self = compare_profiles(as_misclass_profile(sim.profile), sim.profile);
    EXPECT_TRUE(self.pass);
    EXPECT_EQ(self.fraction_within, 1.0);

    MisclassProfile blind;
    for (auto& row : blind.p) row = {0.5, 0.5, 0.0};
    blind.p_e_both_as_a = blind.p_e_both_as_b = 0.25;
    EXPECT_TRUE(compare_profiles(blind, sim.profile).pass);

    auto corrupted = blind;
    corrupted.p[1] = {0.6, 0.4, 0.0};
    const auto bad = compare_profiles(corrupted, sim.profile);
    EXPECT_FALSE(bad.pass);
    EXPECT_LT(bad.fraction_within, 1.0);
}

TEST(SimConfig, Validate) {
    auto cfg = twoway_cfg(0);
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = twoway_cfg(10);
    cfg.p_t = 1.2;
    EXPECT_THROW(cfg.validate(), ConfigError);
    auto t = tdm_cfg(10, -0.1);
    EXPECT_THROW(t.validate(), ConfigError);
}
