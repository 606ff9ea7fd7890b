#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/optimizer.hpp"

using namespace secrecy;

namespace {

constexpr double kPi = std::numbers::pi;

ProblemSetup ideal_setup() {
    ProblemSetup s;
    s.fec = FecConfig{.ideal = true, .threshold_snr = 0.0};
    return s;
}

SearchGrid small_grid(std::vector<double> params) {
    SearchGrid g;
    g.scheme_params = std::move(params);
    g.laws = SearchGrid::uniform_laws_db({0, 6, 12});
    g.thetas = {0.3, 1.0, kPi / 2, 2.4};
    g.classifiers = {ClassifierSpec::no_erasure(), ClassifierSpec::window(0, 3, true),
                     ClassifierSpec::window(-kInf, -3, true), ClassifierSpec::blind()};
    return g;
}

SearchGrid blind_singleton(std::vector<double> params) {
    SearchGrid g;
    g.scheme_params = std::move(params);
    g.laws = {PowerDistribution::uniform_db(0, 20)};
    g.thetas = {kPi / 2};
    g.classifiers = {ClassifierSpec::blind()};
    return g;
}

}  // namespace

TEST(SearchGrid, DefaultsShape) {
    const auto g = SearchGrid::defaults();
    EXPECT_EQ(g.scheme_params.size(), 21u);
    EXPECT_EQ(g.laws.size(), 231u);
    EXPECT_EQ(g.thetas.size(), 19u);
    EXPECT_EQ(g.classifiers.size(), 12u);
    EXPECT_DOUBLE_EQ(g.thetas.back(), kPi);
    EXPECT_NO_THROW(g.validate(Scheme::twoway));
    EXPECT_NO_THROW(g.validate(Scheme::tdm));
}

TEST(SearchGrid, ValidateRejects) {
    auto g = small_grid({0.5});
    g.thetas.clear();
    EXPECT_THROW(g.validate(Scheme::twoway), UsageError);
    g = small_grid({1.5});
    EXPECT_THROW(g.validate(Scheme::twoway), ConfigError);
    g = small_grid({0.5});
    ClassifierSpec ml;
    ml.kind = ClassifierSpec::Kind::ml;
    g.classifiers = {ml};
    EXPECT_THROW(g.validate(Scheme::tdm), ConfigError);
}

TEST(OptimizeTwoWay, BlindSingletonMatchesClosedForm) {
    const auto r = optimize_twoway(blind_singleton({0.5}), ideal_setup());
    EXPECT_NEAR(r.r_sec, 0.17923, 1e-5);
    const auto o = oracle::twoway(0.5, [] {
        oracle::Profile q;
        for (auto& row : q.p) row = {0.5, 0.5, 0.0};
        q.e_a = q.e_b = 0.25;
        return q;
    }());
    EXPECT_NEAR(r.r_sec, o.r_s, 1e-12);
}

TEST(OptimizeTwoWay, PicksBalancedScheduling) {
    const auto r = optimize_twoway(blind_singleton({0.3, 0.5, 0.7}), ideal_setup());
    EXPECT_EQ(r.legit.param, 1u);
    EXPECT_DOUBLE_EQ(r.param, 0.5);
    EXPECT_NEAR(r.r_sec, 0.17923, 1e-5);
}

TEST(OptimizeTwoWay, StarvedSchedulingGivesZero) {
    EXPECT_EQ(optimize_twoway(blind_singleton({0.0, 1.0}), ideal_setup()).r_sec, 0.0);
}

TEST(OptimizeTwoWay, PerfectAdversaryGivesZero) {
    auto g = small_grid({0.2, 0.5, 0.8});
    g.classifiers = {ClassifierSpec::oracle()};
    EXPECT_EQ(optimize_twoway(g, ideal_setup()).r_sec, 0.0);
    g.classifiers.push_back(ClassifierSpec::no_erasure());
    const auto r = optimize_twoway(g, ideal_setup());
    EXPECT_EQ(r.r_sec, 0.0);
    EXPECT_EQ(r.adversary.classifier, 0u);
}

TEST(OptimizeTwoWay, MirrorAnglesGiveEqualRates) {
    const auto g = small_grid({0.5});
    auto mirrored = g;
    for (auto& t : mirrored.thetas) t = kPi - t;
    const auto setup = ideal_setup();
    for (std::size_t law = 0; law < g.laws.size(); ++law)
        for (std::size_t t = 0; t < g.thetas.size(); ++t)
            for (std::size_t c = 0; c < g.classifiers.size(); ++c) {
                const double a = secrecy_rate_at(Scheme::twoway, {0, law, 0}, {t, c}, g, setup);
                const double b = secrecy_rate_at(Scheme::twoway, {0, law, 0}, {t, c}, mirrored, setup);
                EXPECT_NEAR(a, b, 1e-12) << law << " " << t << " " << c;
            }
}

TEST(OptimizeTwoWay, InnerMinimumOverClassifiers) {
    auto g = small_grid({0.5});
    const auto setup = ideal_setup();
    const LegitPoint legit{0, 1, 0};
    const auto worst = worst_case_eve(Scheme::twoway, legit, g, setup);
    double expected = kInf;
    for (std::size_t t = 0; t < g.thetas.size(); ++t)
        for (std::size_t c = 0; c < g.classifiers.size(); ++c)
            expected = std::min(expected, secrecy_rate_at(Scheme::twoway, legit, {t, c}, g, setup));
    EXPECT_EQ(worst.r_s, expected);
    EXPECT_EQ(secrecy_rate_at(Scheme::twoway, legit, worst.arg, g, setup), worst.r_s);
}

TEST(OptimizeTdm, EndpointParamsGiveZero) {
    auto g = small_grid({0.0});
    EXPECT_EQ(optimize_tdm(g, ideal_setup()).r_sec, 0.0);
    g.scheme_params = {1.0};
    EXPECT_EQ(optimize_tdm(g, ideal_setup()).r_sec, 0.0);
}

TEST(OptimizeTdm, SingletonIsHalfOfBound) {
    SearchGrid g;
    g.scheme_params = {0.3};
    g.laws = {PowerDistribution::uniform_db(0, 10)};
    g.jam_laws = {PowerDistribution::uniform_db(4, 14)};
    g.thetas = {1.1};
    g.classifiers = {ClassifierSpec::no_erasure()};
    const auto setup = ideal_setup();
    const auto r = optimize_tdm(g, setup);

    Geometry geom = setup.geometry;
    geom.theta = 1.1;
    const auto det = build_detector(g.classifiers[0], geom, g.laws[0]);
    const auto prof = tdm_detection_profile(geom, g.laws[0], g.jam_laws[0], det, setup.channel);
    const auto b = tdm_bounds(0.3, prof, geom, g.laws[0].min(), setup.fec);
    EXPECT_DOUBLE_EQ(r.r_sec, 0.5 * b.r_s);
    EXPECT_DOUBLE_EQ(r.inner_min, b.r_s);
    ASSERT_TRUE(r.jam_law.has_value());
    EXPECT_EQ(r.jam_law->describe(), "U[4:14]dB");
}

TEST(OptimizeTdm, HalfFactorOnClosedFormChain) {
    // The time-division factor applied to the closed-form chain value.
    const auto o = oracle::tdm(0.3, 0.5, 0.1, 0.5);
    const auto b = tdm_bounds(0.3, {0.5, 0.1, 0.5}, Geometry{}, 1.0, FecConfig{.ideal = true, .threshold_snr = 0.0});
    EXPECT_NEAR(0.5 * b.r_s, 0.5 * o.r_s, 1e-12);
    EXPECT_NEAR(0.5 * b.r_s, 0.1381, 1e-4);
}

TEST(OptimizeTdm, OracleDetectorGivesZero) {
    auto g = small_grid({0.2, 0.5, 0.8});
    g.classifiers = {ClassifierSpec::oracle()};
    EXPECT_EQ(optimize_tdm(g, ideal_setup()).r_sec, 0.0);
}

TEST(Optimize, ParallelMatchesReference) {
    for (Scheme scheme : {Scheme::twoway, Scheme::tdm}) {
        auto g = small_grid({0.2, 0.4, 0.6});
        if (scheme == Scheme::tdm) g.classifiers.pop_back();
        const auto setup = ideal_setup();
        const auto ref = reference::optimize(scheme, g, setup);
        for (int threads : {1, 4}) {
            const auto r = optimize(scheme, g, setup, threads);
            EXPECT_EQ(r.r_sec, ref.r_sec) << to_string(scheme);
            EXPECT_EQ(r.legit.param, ref.legit.param);
            EXPECT_EQ(r.legit.law, ref.legit.law);
            EXPECT_EQ(r.legit.jam_law, ref.legit.jam_law);
            EXPECT_EQ(r.adversary.theta, ref.adversary.theta);
            EXPECT_EQ(r.adversary.classifier, ref.adversary.classifier);
        }
    }
}

TEST(Optimize, OuterMaxDominatesTable) {
    for (Scheme scheme : {Scheme::twoway, Scheme::tdm}) {
        const auto g = small_grid({0.2, 0.4, 0.6});
        const auto r = optimize(scheme, g, ideal_setup(), 0, true);
        ASSERT_FALSE(r.inner_minimum.empty());
        const double best = *std::max_element(r.inner_minimum.begin(), r.inner_minimum.end());
        EXPECT_EQ(r.inner_min, best);
        const auto first = std::find(r.inner_minimum.begin(), r.inner_minimum.end(), best);
        const std::size_t n_law = g.laws.size();
        const std::size_t n_jam = scheme == Scheme::tdm ? g.feedback_laws().size() : 1;
        const std::size_t index = (r.legit.param * n_law + r.legit.law) * n_jam + r.legit.jam_law;
        EXPECT_EQ(static_cast<std::size_t>(first - r.inner_minimum.begin()), index);
        EXPECT_DOUBLE_EQ(r.r_sec, scheme == Scheme::tdm ? 0.5 * best : best);
    }
}

TEST(Optimize, RefinementMonotonicity) {
    for (Scheme scheme : {Scheme::twoway, Scheme::tdm}) {
        const auto setup = ideal_setup();
        auto base = small_grid({0.3, 0.5});
        base.classifiers = {ClassifierSpec::no_erasure()};
        const double r0 = optimize(scheme, base, setup).r_sec;

        auto more_eve = base;
        more_eve.classifiers.push_back(ClassifierSpec::window(0, 3, true));
        more_eve.thetas.push_back(0.05);
        EXPECT_LE(optimize(scheme, more_eve, setup).r_sec, r0);

        auto more_legit = base;
        more_legit.scheme_params.push_back(0.45);
        more_legit.laws.push_back(PowerDistribution::uniform_db(20, 30));
        EXPECT_GE(optimize(scheme, more_legit, setup).r_sec, r0);
    }
}

TEST(RatioPoints, Spacing) {
    const auto r = ratio_points(0.1, 1.0, 10);
    ASSERT_EQ(r.size(), 10u);
    EXPECT_DOUBLE_EQ(r.front(), 0.1);
    EXPECT_DOUBLE_EQ(r.back(), 1.0);
    EXPECT_NEAR(r[4], 0.5, 1e-15);
    EXPECT_EQ(ratio_points(0.2, 0.7, 1), std::vector<double>{0.7});
    EXPECT_THROW(ratio_points(0.1, 1.0, 0), UsageError);
}

TEST(Sweep, UnitRatioPlacesEveOnBisector) {
    auto g = small_grid({0.5});
    const auto rows = sweep_ratio({1.0}, {Scheme::twoway, Scheme::tdm}, g, ideal_setup(), SweepOptions{});
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& row : rows) {
        EXPECT_TRUE(row.realizable);
        EXPECT_NEAR(row.result.theta, kPi / 2, 1e-12);
    }
}

TEST(Sweep, RealizedRatioAndUnrealizableRows) {
    auto g = small_grid({0.5});
    SweepOptions opt;
    opt.r_e = 5.0;
    const auto rows = sweep_ratio({0.1, 0.9}, {Scheme::twoway}, g, ideal_setup(), opt);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_FALSE(rows[0].realizable);
    ASSERT_TRUE(rows[1].realizable);
    const auto d = oracle::distances(1.0, 5.0, rows[1].result.theta);
    EXPECT_NEAR(std::min(d.d_ae, d.d_be) / std::max(d.d_ae, d.d_be), 0.9, 1e-9);
}

TEST(Sweep, TdmPlacementPutsTransmitterNearEve) {
    auto g = small_grid({0.4});
    SweepOptions near;
    SweepOptions far;
    far.placement = TdmPlacement::transmitter_far;
    const auto a = sweep_ratio({0.5}, {Scheme::tdm}, g, ideal_setup(), near);
    const auto b = sweep_ratio({0.5}, {Scheme::tdm}, g, ideal_setup(), far);
    const auto da = oracle::distances(1.0, 0.55, a[0].result.theta);
    const auto dbb = oracle::distances(1.0, 0.55, b[0].result.theta);
    EXPECT_LT(da.d_ae, da.d_be);
    EXPECT_GT(dbb.d_ae, dbb.d_be);
}
