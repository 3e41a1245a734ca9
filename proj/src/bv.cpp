#include "qtrunc/bv.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtrunc {

std::vector<std::pair<uint64_t, uint64_t>> tally(const std::vector<uint64_t>& samples) {
    std::vector<uint64_t> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<uint64_t, uint64_t>> out;
    for (uint64_t v : sorted) {
        if (!out.empty() && out.back().first == v) ++out.back().second;
        else out.emplace_back(v, 1);
    }
    return out;
}

Alg1Result algorithm1(const BvSampler& sampler, uint64_t q, Rng& rng) {
    if (q < 1) throw std::invalid_argument("algorithm1 needs q >= 1");
    int N = sampler.N();
    if (N < 1) throw std::invalid_argument("algorithm1 needs at least one input bit");
    std::vector<uint64_t> samples = sampler.sample(rng, q);
    Alg1Result res;
    res.samples_used = q;
    res.w = tally(samples);
    IncrementalSolver s0(N, 0), s1(N, 1);
    for (const auto& [u, count] : res.w) {
        s0.add(u);
        s1.add(u);
    }
    res.rank = s0.rank();
    res.z0 = s0.solution();
    res.z1 = s1.solution();
    res.found = res.z0.has_nonzero() || res.z1.has_nonzero();
    return res;
}

Alg1Result algorithm1(const std::vector<uint8_t>& table, int N, uint64_t q, Rng& rng) {
    return algorithm1(BvSampler(walsh_spectrum(table, N)), q, rng);
}

}  // namespace qtrunc
