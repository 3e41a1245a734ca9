#include <gtest/gtest.h>

#include <cmath>

#include "qtrunc/attack.hpp"
#include "qtrunc/boomerang.hpp"

using namespace qtrunc;

namespace {

TruncatedDifferential planted_td() {
    TruncatedDifferential td;
    td.a = 0x20;
    td.b = TruncatedDifference::parse("******1*");
    td.d = 1;
    td.sigma = 0.9;
    td.tau = 4;
    td.t = 2;
    return td;
}

}  // namespace

TEST(InvolvedKeyMask, PlantedFinalRound) {
    auto c = make_planted(3, 2, true);
    EXPECT_EQ(involved_key_mask(*c, TruncatedDifference::parse("******1*")), 0x3Cu);
    EXPECT_EQ(involved_key_mask(*c, TruncatedDifference::unknown(8)), 0u);
}

TEST(RecoverSuffixKey, PlantedRanksTrueKeyFirst) {
    auto c = make_planted(3, 2, true);
    auto td = planted_td();
    uint64_t pairs = static_cast<uint64_t>(std::ceil(40 / td.sigma));
    EXPECT_EQ(pairs, 45u);
    auto e = recovery_experiment(*c, td, pairs, 100, 2024);
    EXPECT_GE(e.first, 90u);
    EXPECT_DOUBLE_EQ(e.expected_wrong, 22.5);
    EXPECT_LE(std::fabs(e.wrong_mean - e.expected_wrong), 3 * e.wrong_se);
}

TEST(RecoverSuffixKey, ResultFields) {
    auto c = make_planted(3, 2, true);
    Rng rng(3);
    auto r = recover_suffix_key(*c, planted_td(), 45, 0xa5, rng);
    EXPECT_EQ(r.involved_mask, 0x3Cu);
    EXPECT_EQ(r.ranked.size(), 16u);
    EXPECT_EQ(r.true_candidate, c->final_round_key(c->expand(0xa5)) & 0x3C);
    EXPECT_EQ(r.true_count, 45u);
    for (size_t i = 1; i < r.ranked.size(); ++i) EXPECT_GE(r.ranked[i - 1].count, r.ranked[i].count);
}

TEST(RecoverSuffixKey, NoPredictedBitsGivesUniformRanks) {
    auto c = make_planted(3, 2, true);
    auto td = planted_td();
    td.b = TruncatedDifference::unknown(8);
    td.d = 0;
    auto e = recovery_experiment(*c, td, 20, 400, 9);
    double mean_rank = 0;
    for (int r : e.ranks) mean_rank += r;
    mean_rank /= e.ranks.size();
    // uniform on 1..256: mean 128.5, sd of the mean about 3.7
    EXPECT_NEAR(mean_rank, 128.5, 15);
    EXPECT_DOUBLE_EQ(e.wrong_mean, 20.0);
    Rng rng(1);
    auto r = recover_suffix_key(*c, td, 20, 7, rng);
    EXPECT_EQ(r.ranked.size(), 256u);
    for (const auto& cand : r.ranked) EXPECT_EQ(cand.count, 20u);
}

TEST(RecoverSuffixKey, RefusesUnkeyedFinalRound) {
    auto c = make_toy8(4);
    auto td = planted_td();
    td.t = 3;
    Rng rng(1);
    EXPECT_THROW(recover_suffix_key(*c, td, 10, 0, rng), std::invalid_argument);
    auto p = make_planted(3, 2, true);
    td.t = 1;
    EXPECT_THROW(recover_suffix_key(*p, td, 10, 0, rng), std::invalid_argument);
}

TEST(Statistics, NormalCriticalAndTwoProportion) {
    EXPECT_NEAR(normal_two_sided_critical(0.05), 1.959964, 1e-6);
    EXPECT_NEAR(normal_two_sided_critical(1e-3), 3.290527, 1e-6);
    EXPECT_DOUBLE_EQ(two_proportion_z(50, 100, 50, 100), 0.0);
    EXPECT_GT(two_proportion_z(90, 100, 10, 100), 10);
}

namespace {

BoomerangDistinguisher planted_boomerang(TruthTableCache& cache) {
    Alg3Options opt;
    opt.workers = 4;
    auto r = algorithm3(cache, 0.9, 4, 7, opt);
    EXPECT_TRUE(r.found);
    return r.dist;
}

}  // namespace

TEST(Quadruples, RandomPermutationBaseline) {
    TruthTableCache cache(make_planted_boomerang());
    auto dist = planted_boomerang(cache);
    auto rp = make_randomperm(8, 32);
    Rng rng(55);
    auto est = right_rate_random_keys(*rp, dist, 100000, ShiftMode::InverseInput, rng);
    double p0 = 1.0 / 256;
    double n = static_cast<double>(est.nondegenerate_trials());
    double se = std::sqrt(p0 * (1 - p0) / n);
    EXPECT_LE(std::fabs(est.nondegenerate_rate() - p0), 3 * se);
    // a degenerate quadruple always returns
    EXPECT_EQ(est.degenerate_right, est.degenerate);
}

TEST(Quadruples, PlantedRateOnSampleKeys) {
    auto c = make_planted_boomerang();
    TruthTableCache cache(c);
    auto dist = planted_boomerang(cache);
    double target = std::pow(0.9, 4);
    int good = 0;
    for (uint64_t k = 0; k < 256; k += 8) {
        Rng rng(derive_seed(1, "key", k));
        if (right_rate_for_key(*c, k, dist, 2000, ShiftMode::InverseInput, rng).rate() >= target) ++good;
    }
    EXPECT_GE(good, 16);  // at least 1 - 2/tau of the 32 keys
}

TEST(Quadruples, DegenerateWhenShiftCancels) {
    auto c = make_toy8(4);
    BoomerangDistinguisher d;
    d.fwd.a = 0x11;
    d.bwd.a = 0x00;
    d.fwd.b = d.bwd.b = TruncatedDifference::unknown(8);
    auto ek = c->expand(3);
    Rng rng(1);
    auto o = generate_quadruple(*c, ek, d, ShiftMode::InverseInput, rng);
    EXPECT_EQ(o.quad.Q, o.quad.P);
    EXPECT_TRUE(o.right);
    EXPECT_FALSE(o.degenerate);
    EXPECT_EQ(o.quad.P2, o.quad.P ^ 0x11);
    EXPECT_EQ(c->decrypt(o.quad.C, ek), o.quad.P);
}

TEST(Distinguish, PlantedAgainstRandomPermutation) {
    auto c = make_planted_boomerang();
    TruthTableCache cache(c);
    auto dist = planted_boomerang(cache);
    auto rp = make_randomperm(8, 32);
    std::string csv;
    auto rep = boomerang_distinguish(*c, *rp, dist, 20000, 4, ShiftMode::InverseInput, 1e-3, &csv);
    EXPECT_TRUE(rep.distinguished);
    EXPECT_GT(rep.a.rate(), 0.5);
    EXPECT_EQ(rep.baseline_d, 8);
    EXPECT_FALSE(csv.empty());
    auto self = boomerang_distinguish(*rp, *rp, dist, 20000, 4);
    EXPECT_FALSE(self.distinguished);
}

TEST(ShiftModes, Names) {
    for (ShiftMode m : {ShiftMode::InverseInput, ShiftMode::OutputZero, ShiftMode::OutputRandom})
        EXPECT_EQ(parse_shift_mode(to_string(m)), m);
    EXPECT_THROW(parse_shift_mode("sideways"), std::invalid_argument);
}
