#include <gtest/gtest.h>

#include <cmath>

#include "phantom.hpp"
#include "slovasc/errors.hpp"
#include "slovasc/stats.hpp"

using namespace slovasc;
using namespace slovasc::testing;

namespace {
#include "../oracles/stats_fixture.inc"

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

std::vector<double> fixture_a() { return {std::begin(kFixtureA), std::end(kFixtureA)}; }
std::vector<double> fixture_b() { return {std::begin(kFixtureB), std::end(kFixtureB)}; }

}  // namespace

TEST(Agreement, IdentitySeries) {
    PairedSeries p{{1, 3, 2, 7, 5}, {1, 3, 2, 7, 5}, {"a", "b", "c", "d", "e"}};
    const auto r = agreement(p);
    EXPECT_EQ(r.n, 5u);
    EXPECT_EQ(r.mae, 0.0);
    EXPECT_NEAR(*r.pearson, 1.0, 1e-12);
    EXPECT_NEAR(*r.spearman, 1.0, 1e-12);
    EXPECT_NEAR(*r.icc_3_1, 1.0, 1e-12);
    EXPECT_EQ(r.bland_altman.loa_low, 0.0);
    EXPECT_EQ(r.bland_altman.loa_high, 0.0);
    ASSERT_EQ(r.lambda_per_eye.size(), 5u);
    for (double l : r.lambda_per_eye) EXPECT_EQ(l, 0.0);
}

TEST(Agreement, NegatedSeries) {
    const auto r = agreement({{1, 2, 4, 8}, {-1, -2, -4, -8}, {}});
    EXPECT_NEAR(*r.pearson, -1.0, 1e-12);
    EXPECT_NEAR(*r.spearman, -1.0, 1e-12);
    EXPECT_TRUE(r.lambda_per_eye.empty());
}

TEST(Agreement, MatchesScriptedOracle) {
    PairedSeries p{fixture_a(), fixture_b(), {}};
    for (int i = 0; i < 20; ++i) p.eye_ids.push_back("eye" + std::to_string(i));
    const auto r = agreement(p);
    EXPECT_NEAR(r.mae, kMae, 1e-9);
    EXPECT_NEAR(*r.pearson, kPearson, 1e-9);
    EXPECT_NEAR(*r.spearman, kSpearman, 1e-9);
    EXPECT_NEAR(*r.icc_3_1, kIcc31, 1e-9);
    EXPECT_NEAR(r.bland_altman.mean_diff, kMeanDiff, 1e-9);
    EXPECT_NEAR(r.bland_altman.loa_low, kLoaLow, 1e-9);
    EXPECT_NEAR(r.bland_altman.loa_high, kLoaHigh, 1e-9);
    ASSERT_EQ(r.lambda_per_eye.size(), 20u);
    for (int i = 0; i < 20; ++i) EXPECT_NEAR(r.lambda_per_eye[i], kLambda[i], 1e-9) << i;
}

TEST(Agreement, SwapSymmetry) {
    const auto ab = agreement({fixture_a(), fixture_b(), {}});
    const auto ba = agreement({fixture_b(), fixture_a(), {}});
    EXPECT_DOUBLE_EQ(ab.mae, ba.mae);
    EXPECT_NEAR(*ab.pearson, *ba.pearson, 1e-12);
    EXPECT_NEAR(*ab.spearman, *ba.spearman, 1e-12);
    EXPECT_NEAR(*ab.icc_3_1, *ba.icc_3_1, 1e-12);
    EXPECT_NEAR(ab.bland_altman.mean_diff, -ba.bland_altman.mean_diff, 1e-12);
}

TEST(Agreement, ConsistencyIccIgnoresShift) {
    std::vector<double> a = fixture_a(), b = a;
    for (auto& v : b) v += 17.25;
    EXPECT_NEAR(*icc_3_1(a, b), 1.0, 1e-12);
}

TEST(Agreement, ZeroVarianceDropsCorrelations) {
    const auto r = agreement({{2, 2, 2}, {1, 2, 3}, {}});
    EXPECT_FALSE(r.pearson);
    EXPECT_FALSE(r.spearman);
    EXPECT_FALSE(r.icc_3_1);
    EXPECT_NEAR(r.mae, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.bland_altman.mean_diff, 0.0, 1e-12);
}

TEST(Agreement, InvalidInput) {
    EXPECT_EQ(code_of([] { agreement({{1, 2}, {1}, {}}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { agreement({{1}, {1}, {}}); }), ErrorCode::InvalidArgument);
}

TEST(Ranks, TiesAveraged) {
    const std::vector<double> v = {3, 1, 3, 2};
    EXPECT_EQ(average_ranks(v), (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(Lambda, IdenticalRepeatsAreZero) {
    const auto l = lambda_noise({{1, 1}, {2, 2}, {5, 5, 5}});
    ASSERT_EQ(l.size(), 3u);
    for (double v : l) EXPECT_EQ(v, 0.0);
}

TEST(Lambda, SdRatio) {
    // Between-eye means 10, 20, 30 have sd 10; eye 1 repeats have sd 10 / sqrt(2) * sqrt(2) = 10.
    const std::vector<std::vector<double>> values = {{10, 10}, {20 - 7.0710678118654755, 20 + 7.0710678118654755}, {30, 30}};
    const auto l = lambda_noise(values);
    EXPECT_NEAR(l[0], 0.0, 1e-12);
    EXPECT_NEAR(l[1], 100.0, 1e-9);
    EXPECT_NEAR(l[2], 0.0, 1e-12);
}

TEST(Lambda, Errors) {
    EXPECT_EQ(code_of([] { lambda_noise({{1, 2}}); }), ErrorCode::DegeneratePopulation);
    EXPECT_EQ(code_of([] { lambda_noise({{1, 2}, {2, 1}}); }), ErrorCode::DegeneratePopulation);
    EXPECT_EQ(code_of([] { lambda_noise({{1, 2}, {3}}); }), ErrorCode::InvalidArgument);
}

TEST(Dice, Examples) {
    const BinaryMask a = rect(20, 20, 0, 0, 10, 10);
    const BinaryMask b = rect(20, 20, 10, 10, 10, 10);
    const BinaryMask half = rect(20, 20, 5, 0, 10, 10);
    EXPECT_EQ(dice(a, a), 1.0);
    EXPECT_EQ(dice(a, b), 0.0);
    EXPECT_EQ(dice(a, half), 0.5);
    EXPECT_EQ(dice(half, a), 0.5);
    EXPECT_EQ(dice(BinaryMask(20, 20), BinaryMask(20, 20)), 1.0);
    EXPECT_EQ(code_of([&] { dice(a, BinaryMask(10, 20)); }), ErrorCode::DimensionMismatch);
}

TEST(Auc, Examples) {
    const BinaryMask truth = rect(10, 10, 0, 0, 5, 10);
    RealGrid exact(10, 10), inverse(10, 10), flat(10, 10, 0.3);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) {
            exact(x, y) = truth.test(x, y);
            inverse(x, y) = 1.0 - truth.test(x, y);
        }
    EXPECT_EQ(auc(exact, truth), 1.0);
    EXPECT_EQ(auc(inverse, truth), 0.0);
    EXPECT_EQ(auc(flat, truth), 0.5);
    EXPECT_EQ(code_of([&] { auc(exact, BinaryMask(10, 10)); }), ErrorCode::SingleClass);
}

TEST(Auc, MonotoneTransformInvariant) {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        RealGrid prob(24, 24), warped(24, 24);
        BinaryMask truth(24, 24);
        for (std::size_t i = 0; i < prob.size(); ++i) {
            const bool pos = rng.uniform() < 0.3;
            truth.pixels()[i] = pos;
            // Quantised scores give plenty of ties.
            prob.pixels()[i] = std::round((rng.uniform() + (pos ? 0.3 : 0.0)) * 20) / 20;
            warped.pixels()[i] = std::exp(3 * prob.pixels()[i]) - 7;
        }
        EXPECT_DOUBLE_EQ(auc(prob, truth), auc(warped, truth));
    }
}

TEST(Auc, MatchesPairCount) {
    Rng rng(42);
    RealGrid prob(12, 12);
    BinaryMask truth(12, 12);
    for (std::size_t i = 0; i < prob.size(); ++i) {
        truth.pixels()[i] = rng.uniform() < 0.4;
        prob.pixels()[i] = std::round(rng.uniform() * 8) / 8;
    }
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < prob.size(); ++i)
        for (std::size_t j = 0; j < prob.size(); ++j)
            if (truth.pixels()[i] && !truth.pixels()[j]) {
                pairs += 1;
                const double a = prob.pixels()[i], b = prob.pixels()[j];
                wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
            }
    EXPECT_NEAR(auc(prob, truth), wins / pairs, 1e-12);
}
