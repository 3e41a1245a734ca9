#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtrunc/boomerang.hpp"
#include "qtrunc/cipher.hpp"
#include "qtrunc/rng.hpp"
#include "qtrunc/truncated.hpp"

namespace qtrunc {

struct Candidate {
    uint64_t key = 0;
    uint64_t count = 0;
};

struct RecoveryResult {
    std::vector<Candidate> ranked;  // best first; ties in random order
    uint64_t true_candidate = 0;
    uint64_t true_count = 0;
    int true_rank = 0;  // 1-based
    uint64_t pairs = 0;
    uint64_t involved_mask = 0;
    double wrong_mean = 0;
};

// Final-key bits that can change the predicted bits of a stripped difference.
uint64_t involved_key_mask(const Cipher& c, const TruncatedDifference& b);

RecoveryResult recover_suffix_key(const Cipher& c, const TruncatedDifferential& td, uint64_t pairs, uint64_t true_key,
                                  Rng& rng);

struct RecoveryExperiment {
    uint64_t trials = 0;
    uint64_t pairs = 0;
    uint64_t first = 0;  // trials ranking the true candidate first
    double wrong_mean = 0;  // mean over trials of the per-trial wrong-candidate mean count
    double wrong_se = 0;
    double expected_wrong = 0;  // pairs * 2^-d
    std::vector<int> ranks;
};

RecoveryExperiment recovery_experiment(const Cipher& c, const TruncatedDifferential& td, uint64_t pairs,
                                       uint64_t trials, uint64_t seed);

struct Quadruple {
    uint64_t P = 0, P2 = 0, Q = 0, Q2 = 0;
    uint64_t C = 0, C2 = 0, D = 0, D2 = 0;
};

// How the ciphertext shift is formed from the inverse-direction differential.
enum class ShiftMode {
    InverseInput,     // a2, the concrete ciphertext-side difference
    OutputZero,       // b2 with unpredicted bits set to zero
    OutputRandom,     // a fresh member of the b2 class per quadruple
};
const char* to_string(ShiftMode m);
ShiftMode parse_shift_mode(const std::string& s);

struct QuadrupleOutcome {
    Quadruple quad;
    bool right = false;
    // C ^ C2 equals the shift, so (Q, Q2) = (P2, P) trivially
    bool degenerate = false;
};

QuadrupleOutcome generate_quadruple(const Cipher& c, const ExpandedKey& ek, const BoomerangDistinguisher& dist,
                                    ShiftMode mode, Rng& rng);

struct RateEstimate {
    uint64_t trials = 0;
    uint64_t right = 0;
    uint64_t degenerate = 0;
    uint64_t degenerate_right = 0;

    double rate() const { return trials ? static_cast<double>(right) / trials : 0; }
    double nondegenerate_rate() const {
        uint64_t n = trials - degenerate;
        return n ? static_cast<double>(right - degenerate_right) / n : 0;
    }
    uint64_t nondegenerate_trials() const { return trials - degenerate; }
};

// trials with one key
RateEstimate right_rate_for_key(const Cipher& c, uint64_t key, const BoomerangDistinguisher& dist, uint64_t trials,
                                ShiftMode mode, Rng& rng);
// trials with a fresh uniform key each
RateEstimate right_rate_random_keys(const Cipher& c, const BoomerangDistinguisher& dist, uint64_t trials,
                                    ShiftMode mode, Rng& rng, std::string* csv_log = nullptr);

struct DistinguishReport {
    std::string cipher_a, cipher_b;
    RateEstimate a, b;
    double baseline = 0;
    int baseline_d = 0;
    double z = 0;
    double z_critical = 0;
    double significance = 1e-3;
    bool distinguished = false;
    // random target against 2^-d, non-degenerate quadruples
    double baseline_z = 0;
    ShiftMode mode = ShiftMode::InverseInput;
};

double two_proportion_z(uint64_t x1, uint64_t n1, uint64_t x2, uint64_t n2);
double normal_two_sided_critical(double alpha);

DistinguishReport boomerang_distinguish(const Cipher& a, const Cipher& b, const BoomerangDistinguisher& dist,
                                        uint64_t trials, uint64_t seed, ShiftMode mode = ShiftMode::InverseInput,
                                        double significance = 1e-3, std::string* csv_log = nullptr);

nlohmann::json to_json(const RecoveryResult& r);
nlohmann::json to_json(const RecoveryExperiment& r);
nlohmann::json to_json(const DistinguishReport& r);

}  // namespace qtrunc
