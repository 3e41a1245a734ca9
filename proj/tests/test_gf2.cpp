#include <gtest/gtest.h>

#include <set>

#include "qtrunc/gf2.hpp"
#include "qtrunc/rng.hpp"

using namespace qtrunc;

namespace {

bool satisfies(const LinearSystem& s, uint64_t x) {
    for (const auto& r : s.rows)
        if (parity(r.bits() & x) != s.rhs) return false;
    return true;
}

LinearSystem make_system(std::initializer_list<uint64_t> rows, int rhs, int n) {
    LinearSystem s;
    s.rhs = rhs;
    s.unknowns = n;
    for (uint64_t r : rows) s.rows.emplace_back(r, n);
    return s;
}

}  // namespace

TEST(BitWord, DotAndXor) {
    BitWord a(0b1011, 4), b(0b0110, 4);
    EXPECT_EQ((a ^ b).bits(), 0b1101u);
    EXPECT_EQ(a.dot(b), 1);
    EXPECT_EQ(a.component(1), 1);
    EXPECT_EQ(a.component(2), 0);
    EXPECT_EQ(a.to_binary(), "1011");
    EXPECT_THROW(BitWord(0x10, 4), std::invalid_argument);
    EXPECT_THROW(a.dot(BitWord(1, 5)), std::invalid_argument);
}

TEST(SolveAffine, EmptySystemIsFullSpace) {
    auto s = solve_affine(make_system({}, 0, 4));
    EXPECT_FALSE(s.empty);
    EXPECT_EQ(s.dimension(), 4);
    EXPECT_TRUE(s.is_full_space());
}

TEST(SolveAffine, ZeroRowWithRhsOneIsEmpty) {
    auto s = solve_affine(make_system({0b0000}, 1, 4));
    EXPECT_TRUE(s.empty);
    EXPECT_TRUE(enumerate(s).members.empty());
}

TEST(SolveAffine, RankTwoNullspace) {
    auto sys = make_system({0b0011, 0b0101}, 0, 4);
    auto s = solve_affine(sys);
    ASSERT_FALSE(s.empty);
    EXPECT_EQ(s.dimension(), 2);
    auto e = enumerate(s);
    std::set<uint64_t> got;
    for (const auto& m : e.members) got.insert(m.bits());
    std::set<uint64_t> want;
    for (uint64_t x = 0; x < 16; ++x)
        if (satisfies(sys, x)) want.insert(x);
    EXPECT_EQ(got, want);
    EXPECT_TRUE(got.count(0));
}

TEST(SolveAffine, WidthMismatchThrows) {
    LinearSystem s;
    s.unknowns = 4;
    s.rows.emplace_back(1, 5);
    EXPECT_THROW(solve_affine(s), std::invalid_argument);
}

TEST(Enumerate, Cases) {
    AffineSolutionSet empty;
    empty.unknowns = 2;
    EXPECT_TRUE(enumerate(empty).members.empty());

    AffineSolutionSet coset;
    coset.empty = false;
    coset.unknowns = 2;
    coset.particular = BitWord(0b01, 2);
    coset.basis = {BitWord(0b10, 2)};
    auto e = enumerate(coset);
    ASSERT_EQ(e.members.size(), 2u);
    EXPECT_EQ(e.members[0].bits(), 0b01u);
    EXPECT_EQ(e.members[1].bits(), 0b11u);
    EXPECT_FALSE(e.truncated);

    auto full = solve_affine(make_system({}, 0, 3));
    auto f = enumerate(full, 4);
    EXPECT_EQ(f.members.size(), 4u);
    EXPECT_TRUE(f.truncated);
    std::set<uint64_t> distinct;
    for (const auto& m : f.members) distinct.insert(m.bits());
    EXPECT_EQ(distinct.size(), 4u);
    EXPECT_THROW(enumerate(full, 0), std::invalid_argument);
}

TEST(Member, Cases) {
    AffineSolutionSet empty;
    empty.unknowns = 2;
    EXPECT_FALSE(member(empty, BitWord(0b11, 2)));
    EXPECT_TRUE(member(solve_affine(make_system({0b11}, 0, 2)), BitWord(0b11, 2)));
    EXPECT_FALSE(member(solve_affine(make_system({0b01}, 1, 2)), BitWord(0b10, 2)));
    EXPECT_THROW(member(empty, BitWord(1, 3)), std::invalid_argument);
}

TEST(SolveAffine, RandomRoundTrip) {
    Rng rng(2024);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 1 + static_cast<int>(rng.below(12));
        int rows = static_cast<int>(rng.below(33));
        LinearSystem sys;
        sys.unknowns = n;
        sys.rhs = static_cast<int>(rng.below(2));
        std::vector<uint64_t> raw;
        for (int i = 0; i < rows; ++i) {
            // low-rank rows make rhs = 1 systems consistent often enough to matter
            uint64_t r = rng.below(4) == 0 ? 0 : rng.bits(n);
            if (rng.below(3) == 0 && !raw.empty()) r = raw[rng.below(raw.size())];
            raw.push_back(r);
            sys.rows.emplace_back(r, n);
        }
        auto s = solve_affine(sys);
        std::set<uint64_t> listed;
        for (const auto& m : enumerate(s, uint64_t{1} << 13).members) {
            EXPECT_TRUE(satisfies(sys, m.bits()));
            listed.insert(m.bits());
        }
        for (uint64_t x = 0; x < (uint64_t{1} << n); ++x) {
            bool sat = satisfies(sys, x);
            EXPECT_EQ(sat, listed.count(x) == 1);
            EXPECT_EQ(sat, member(s, BitWord(x, n)));
        }
        if (!s.empty) {
            EXPECT_EQ(listed.size(), uint64_t{1} << s.dimension());
            std::vector<uint64_t> basis;
            for (const auto& b : s.basis) basis.push_back(b.bits());
            EXPECT_EQ(gf2_rank(basis), s.dimension());
        }
        if (sys.rhs == 0) {
            EXPECT_FALSE(s.empty);
            EXPECT_EQ(s.dimension(), n - gf2_rank(raw));
        }
    }
}

TEST(SolveAffine, AddingSpannedRowKeepsSet) {
    Rng rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 8;
        IncrementalSolver a(n, 0);
        std::vector<uint64_t> rows;
        for (int i = 0; i < 4; ++i) {
            rows.push_back(rng.bits(n));
            a.add(rows.back());
        }
        int before = a.solution().dimension();
        a.add(rows[0] ^ rows[1]);
        EXPECT_EQ(a.solution().dimension(), before);
    }
}

TEST(SolutionPair, HalfLookup) {
    IncrementalSolver s0(3, 0), s1(3, 1);
    s0.add(0b001);
    s1.add(0b001);
    SolutionPair z{s0.solution(), s1.solution()};
    EXPECT_EQ(z.half_of(BitWord(0b010, 3)), 0);
    EXPECT_EQ(z.half_of(BitWord(0b011, 3)), 1);
    EXPECT_TRUE(z.contains(BitWord(0b111, 3)));
}
