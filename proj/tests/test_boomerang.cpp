#include <gtest/gtest.h>

#include <cmath>

#include "qtrunc/attack.hpp"
#include "qtrunc/bitword.hpp"
#include "qtrunc/boomerang.hpp"
#include "qtrunc/oracle.hpp"

using namespace qtrunc;

TEST(QuadrupleProbability, Examples) {
    auto a = quadruple_probability(1, 1, 8);
    EXPECT_DOUBLE_EQ(a.right_rate, 1.0);
    EXPECT_DOUBLE_EQ(a.baseline, 1.0 / 256);
    EXPECT_TRUE(a.distinguishable);

    auto b = quadruple_probability(0.5, 0.5, 2);
    EXPECT_DOUBLE_EQ(b.right_rate, 0.0625);
    EXPECT_DOUBLE_EQ(b.baseline, 0.25);
    EXPECT_FALSE(b.distinguishable);

    auto c = quadruple_probability(0.9, 0.9, 4);
    EXPECT_NEAR(c.right_rate, 0.6561, 1e-12);
    EXPECT_DOUBLE_EQ(c.baseline, 0.0625);
    EXPECT_TRUE(c.distinguishable);

    EXPECT_THROW(quadruple_probability(1.5, 0.5, 2), std::invalid_argument);
}

TEST(Algorithm3, PlantedBoomerangSplit) {
    TruthTableCache cache(make_planted_boomerang());
    Alg3Options opt;
    opt.workers = 4;
    auto r = algorithm3(cache, 0.9, 4, 7, opt);
    ASSERT_TRUE(r.found);
    const auto& d = r.dist;
    EXPECT_EQ(d.t1 + d.t2, 4);
    EXPECT_EQ(d.t1, 1);
    EXPECT_EQ(d.fwd.direction, Direction::Forward);
    EXPECT_EQ(d.bwd.direction, Direction::Inverse);
    EXPECT_TRUE(sn_gate(d.fwd.d, 0.9));
    EXPECT_TRUE(sn_gate(d.bwd.d, 0.9));
    const Cipher& c = cache.cipher();
    EXPECT_GT(key_fraction_above(c, d.t1, d.fwd.a, d.fwd.b, 0.9).value(), 0.75);
    EXPECT_GT(key_fraction_above(c, d.t2, d.bwd.a, d.bwd.b, 0.9, Direction::Inverse).value(), 0.75);
}

TEST(Algorithm3, FullToy8AnswersNo) {
    TruthTableCache cache(make_toy8(4));
    Alg3Options opt;
    opt.q_override = 4096;
    opt.workers = 4;
    auto r = algorithm3(cache, 0.99, 4, 7, opt);
    EXPECT_FALSE(r.found);
    ASSERT_EQ(r.attempts.size(), 3u);
    // exhaustive single-bit scan: some (a, bit) beats sigma on more than 3/4 of the keys
    auto strong_half = [&](int t, Direction dir) {
        auto out = cache.outputs(t, dir);
        for (uint64_t a = 1; a < 256; ++a) {
            int keys[16] = {0};
            for (uint64_t k = 0; k < 256; ++k) {
                int ones[8] = {0};
                for (uint64_t x = 0; x < 256; ++x) {
                    uint64_t dy = (*out)[(x << 8) | k] ^ (*out)[((x ^ a) << 8) | k];
                    for (int b = 0; b < 8; ++b) ones[b] += (dy >> b) & 1;
                }
                for (int b = 0; b < 8; ++b) {
                    keys[2 * b] += ones[b] < 3;
                    keys[2 * b + 1] += ones[b] > 253;
                }
            }
            for (int v : keys)
                if (v > 192) return true;
        }
        return false;
    };
    for (const auto& at : r.attempts) {
        bool f = strong_half(at.t1, Direction::Forward), b = strong_half(4 - at.t1, Direction::Inverse);
        EXPECT_FALSE(f && b) << "t1=" << at.t1;
        // a half the search reported must exist in the exhaustive scan
        if (at.fwd_found) EXPECT_TRUE(f);
        if (at.bwd_found) EXPECT_TRUE(b);
    }
}

TEST(Algorithm3, IdentityVariantTwoRounds) {
    auto c = make_toy8_identity(2, true);
    TruthTableCache cache(c);
    Alg3Options opt;
    opt.q_override = 64;
    auto r = algorithm3(cache, 0.9, 4, 11, opt);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.dist.t1, 1);
    EXPECT_EQ(r.attempts.size(), 1u);
    EXPECT_TRUE(r.dist.fwd.b.matches(rotl_w(r.dist.fwd.a, 2, 8)));
    EXPECT_TRUE(r.dist.bwd.b.matches(rotr_w(r.dist.bwd.a, 2, 8)));

    // probability-1 halves: every quadruple returns
    Rng rng(5);
    for (ShiftMode mode : {ShiftMode::InverseInput, ShiftMode::OutputZero, ShiftMode::OutputRandom}) {
        auto est = right_rate_random_keys(*c, r.dist, 2000, mode, rng);
        EXPECT_EQ(est.right, est.trials);
    }
}

TEST(Algorithm3, Rejects) {
    TruthTableCache cache(make_toy8(1));
    EXPECT_THROW(algorithm3(cache, 0.9, 4, 1), std::invalid_argument);
}

TEST(BoomerangJson, RoundTrip) {
    TruthTableCache cache(make_toy8_identity(2, true));
    Alg3Options opt;
    opt.q_override = 64;
    auto r = algorithm3(cache, 0.9, 4, 11, opt);
    ASSERT_TRUE(r.found);
    auto j = to_json(r.dist);
    EXPECT_EQ(j["baseline_d"], 8);
    EXPECT_DOUBLE_EQ(j["baseline"].get<double>(), 1.0 / 256);
    EXPECT_NEAR(j["right_rate_formula"].get<double>(), std::pow(0.9, 4), 1e-12);
    EXPECT_EQ(to_json(boomerang_from_json(j)), j);
}
