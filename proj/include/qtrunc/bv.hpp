#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qtrunc/gf2.hpp"
#include "qtrunc/walsh.hpp"

namespace qtrunc {

struct Alg1Result {
    bool found = false;
    AffineSolutionSet z0;
    AffineSolutionSet z1;
    uint64_t samples_used = 0;
    int rank = 0;
    // distinct samples with their multiplicities, sorted by value
    std::vector<std::pair<uint64_t, uint64_t>> w;
};

// Collects q BV samples of f and solves x.u = i over all of them.
Alg1Result algorithm1(const BvSampler& sampler, uint64_t q, Rng& rng);
Alg1Result algorithm1(const std::vector<uint8_t>& table, int N, uint64_t q, Rng& rng);

// Counts of sampled words, sorted by word.
std::vector<std::pair<uint64_t, uint64_t>> tally(const std::vector<uint64_t>& samples);

}  // namespace qtrunc
