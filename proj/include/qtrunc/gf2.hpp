#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qtrunc/bitword.hpp"

namespace qtrunc {

struct LinearSystem {
    std::vector<BitWord> rows;
    int rhs = 0;
    int unknowns = 0;
};

struct AffineSolutionSet {
    bool empty = true;
    BitWord particular;
    std::vector<BitWord> basis;
    int unknowns = 0;

    // log2 of the member count; meaningless when empty
    int dimension() const { return static_cast<int>(basis.size()); }
    bool is_full_space() const { return !empty && dimension() == unknowns; }
    // true when the set holds at least one nonzero word
    bool has_nonzero() const { return !empty && (dimension() > 0 || !particular.is_zero()); }
};

struct Enumeration {
    std::vector<BitWord> members;
    bool truncated = false;
};

inline constexpr uint64_t kDefaultEnumerationCap = uint64_t{1} << 16;

// Reduced row echelon form over GF(2) for equations x.u = rhs with a shared
// constant rhs, fed one row at a time.
class IncrementalSolver {
  public:
    IncrementalSolver(int unknowns, int rhs);

    void add(uint64_t row);
    int rank() const { return rank_; }
    bool consistent() const { return consistent_; }
    int unknowns() const { return n_; }
    AffineSolutionSet solution() const;

  private:
    int n_;
    int rhs_;
    int rank_ = 0;
    bool consistent_ = true;
    std::array<uint64_t, 64> pivot_row_{};
    std::array<uint8_t, 64> pivot_rhs_{};
    uint64_t pivot_cols_ = 0;
};

AffineSolutionSet solve_affine(const LinearSystem& system);
Enumeration enumerate(const AffineSolutionSet& set, uint64_t cap = kDefaultEnumerationCap);
bool member(const AffineSolutionSet& set, const BitWord& v);
int gf2_rank(const std::vector<uint64_t>& rows);

// Z_j = Z_j^0 u Z_j^1 kept as two cosets.
struct SolutionPair {
    AffineSolutionSet zero;
    AffineSolutionSet one;

    bool contains(const BitWord& v) const { return member(zero, v) || member(one, v); }
    // which half holds v: 0, 1, or -1 when neither
    int half_of(const BitWord& v) const;
};

}  // namespace qtrunc
