#include "qtrunc/gf2.hpp"

#include <bit>
#include <cstdio>
#include <stdexcept>

namespace qtrunc {

std::string hex_word(uint64_t v, int width) {
    int digits = (width + 3) / 4;
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%0*llx", digits, static_cast<unsigned long long>(v));
    return buf;
}

uint64_t parse_word(const std::string& text) {
    size_t pos = 0;
    uint64_t v = 0;
    try {
        if (text.rfind("0b", 0) == 0) {
            v = std::stoull(text.substr(2), &pos, 2);
            pos += 2;
        } else {
            v = std::stoull(text, &pos, 0);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse word '" + text + "'");
    }
    if (pos != text.size()) throw std::invalid_argument("cannot parse word '" + text + "'");
    return v;
}

std::string BitWord::to_hex() const { return hex_word(bits_, width_); }

std::string BitWord::to_binary() const {
    std::string s;
    for (int j = 1; j <= width_; ++j) s.push_back(component(j) ? '1' : '0');
    return s;
}

IncrementalSolver::IncrementalSolver(int unknowns, int rhs) : n_(unknowns), rhs_(rhs & 1) {
    if (unknowns < 1 || unknowns > 64) throw std::invalid_argument("unknowns must be in 1..64");
}

void IncrementalSolver::add(uint64_t row) {
    if (row & ~low_mask(n_)) throw std::invalid_argument("row wider than the system");
    uint8_t r = static_cast<uint8_t>(rhs_);
    uint64_t hit = row & pivot_cols_;
    while (hit) {
        int c = std::countr_zero(hit);
        row ^= pivot_row_[c];
        r ^= pivot_rhs_[c];
        hit = row & pivot_cols_;
    }
    if (row == 0) {
        if (r) consistent_ = false;
        return;
    }
    int c = 63 - std::countl_zero(row);
    uint64_t others = pivot_cols_;
    while (others) {
        int p = std::countr_zero(others);
        others &= others - 1;
        if ((pivot_row_[p] >> c) & 1) {
            pivot_row_[p] ^= row;
            pivot_rhs_[p] ^= r;
        }
    }
    pivot_row_[c] = row;
    pivot_rhs_[c] = r;
    pivot_cols_ |= uint64_t{1} << c;
    ++rank_;
}

AffineSolutionSet IncrementalSolver::solution() const {
    AffineSolutionSet s;
    s.unknowns = n_;
    s.particular = BitWord(0, n_);
    if (!consistent_) return s;
    s.empty = false;
    uint64_t part = 0;
    uint64_t pcols = pivot_cols_;
    while (pcols) {
        int c = std::countr_zero(pcols);
        pcols &= pcols - 1;
        if (pivot_rhs_[c]) part |= uint64_t{1} << c;
    }
    s.particular = BitWord(part, n_);
    for (int f = 0; f < n_; ++f) {
        if ((pivot_cols_ >> f) & 1) continue;
        uint64_t v = uint64_t{1} << f;
        uint64_t p = pivot_cols_;
        while (p) {
            int c = std::countr_zero(p);
            p &= p - 1;
            if ((pivot_row_[c] >> f) & 1) v |= uint64_t{1} << c;
        }
        s.basis.emplace_back(v, n_);
    }
    return s;
}

AffineSolutionSet solve_affine(const LinearSystem& system) {
    IncrementalSolver solver(system.unknowns, system.rhs);
    for (const auto& row : system.rows) {
        if (row.width() != system.unknowns) throw std::invalid_argument("row width does not match unknowns");
        solver.add(row.bits());
    }
    return solver.solution();
}

Enumeration enumerate(const AffineSolutionSet& set, uint64_t cap) {
    if (cap < 1) throw std::invalid_argument("enumeration cap must be >= 1");
    Enumeration out;
    if (set.empty) return out;
    int dim = set.dimension();
    uint64_t total = dim >= 64 ? ~uint64_t{0} : (uint64_t{1} << dim);
    uint64_t count = total;
    if (dim >= 64 || total > cap) {
        count = cap;
        out.truncated = true;
    }
    out.members.reserve(count);
    uint64_t v = set.particular.bits();
    out.members.emplace_back(v, set.unknowns);
    for (uint64_t i = 1; i < count; ++i) {
        v ^= set.basis[std::countr_zero(i)].bits();
        out.members.emplace_back(v, set.unknowns);
    }
    return out;
}

int gf2_rank(const std::vector<uint64_t>& rows) {
    std::array<uint64_t, 64> piv{};
    int rank = 0;
    for (uint64_t r : rows) {
        for (int c = 63; c >= 0 && r; --c) {
            if (!((r >> c) & 1)) continue;
            if (!piv[c]) {
                piv[c] = r;
                ++rank;
                r = 0;
            } else {
                r ^= piv[c];
            }
        }
    }
    return rank;
}

bool member(const AffineSolutionSet& set, const BitWord& v) {
    if (v.width() != set.unknowns) throw std::invalid_argument("member: width mismatch");
    if (set.empty) return false;
    uint64_t r = v.bits() ^ set.particular.bits();
    std::array<uint64_t, 64> piv{};
    for (const auto& b : set.basis) {
        uint64_t x = b.bits();
        for (int c = 63; c >= 0 && x; --c) {
            if (!((x >> c) & 1)) continue;
            if (!piv[c]) {
                piv[c] = x;
                x = 0;
            } else {
                x ^= piv[c];
            }
        }
    }
    for (int c = 63; c >= 0 && r; --c) {
        if (!((r >> c) & 1)) continue;
        if (!piv[c]) return false;
        r ^= piv[c];
    }
    return r == 0;
}

int SolutionPair::half_of(const BitWord& v) const {
    if (member(zero, v)) return 0;
    if (member(one, v)) return 1;
    return -1;
}

}  // namespace qtrunc
