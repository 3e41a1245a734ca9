#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "qtrunc/truncated.hpp"

namespace qtrunc {

struct BoomerangDistinguisher {
    TruncatedDifferential fwd;  // (a1, b1) of Enc^t1
    TruncatedDifferential bwd;  // (a2, b2) of (Enc^t2)^-1, a2 on the ciphertext side
    int t1 = 0;
    int t2 = 0;
    double sigma = 0;
    double tau = 0;
};

struct SplitAttempt {
    int t1 = 0;
    bool fwd_found = false;
    bool bwd_found = false;
};

struct Alg3Options {
    ScanMode mode = ScanMode::Ascending;
    std::optional<uint64_t> q_override;
    int workers = 1;
};

struct Alg3Result {
    bool found = false;
    BoomerangDistinguisher dist;
    std::vector<SplitAttempt> attempts;
};

// Scans t1 = 1 .. r-1 and returns the first split where both halves succeed.
Alg3Result algorithm3(TruthTableCache& cache, double sigma, double tau, uint64_t seed, const Alg3Options& options = {});

struct QuadrupleProbability {
    double right_rate = 0;
    double baseline = 0;
    bool distinguishable = false;
};
QuadrupleProbability quadruple_probability(double p1, double p2, int d);

nlohmann::json to_json(const BoomerangDistinguisher& b);
BoomerangDistinguisher boomerang_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Alg3Result& r);

}  // namespace qtrunc
