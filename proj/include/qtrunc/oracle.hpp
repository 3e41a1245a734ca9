#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtrunc/cipher.hpp"
#include "qtrunc/truncated.hpp"

namespace qtrunc {

struct Rational {
    uint64_t num = 0;
    uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    // num / den > x, exact for dyadic x
    bool above(double x) const { return static_cast<long double>(num) > static_cast<long double>(x) * den; }
    bool operator==(const Rational& o) const {
        return static_cast<unsigned __int128>(num) * o.den == static_cast<unsigned __int128>(o.num) * den;
    }
};

inline constexpr int kMaxOracleBits = 20;

Rational differential_probability(const Cipher& c, int t, uint64_t k, uint64_t dx, uint64_t dy,
                                  Direction dir = Direction::Forward);
Rational truncated_probability(const Cipher& c, int t, uint64_t k, uint64_t a, const TruncatedDifference& b,
                               Direction dir = Direction::Forward);
// average over every nonzero dx matching the input truncated difference
Rational omega_probability(const Cipher& c, int t, uint64_t k, const TruncatedDifference& in,
                           const TruncatedDifference& b, Direction dir = Direction::Forward);

struct KeyProfile {
    std::string cipher;
    int t = 0;
    Direction direction = Direction::Forward;
    uint64_t a = 0;
    TruncatedDifference b;
    bool sampled = false;
    uint64_t den = 1;
    std::vector<uint64_t> num;  // Z(k) = num[k] / den

    Rational z(uint64_t k) const { return {num.at(k), den}; }
    Rational fraction_above(double sigma) const;
    double mean() const;
    std::string csv() const;
};

struct ProfileOptions {
    Direction direction = Direction::Forward;
    bool sampled = false;
    uint64_t sample_inputs = 4096;
    uint64_t seed = 0;
    int workers = 1;
};

KeyProfile key_profile(const Cipher& c, int t, uint64_t a, const TruncatedDifference& b,
                       const ProfileOptions& options = {});
Rational key_fraction_above(const Cipher& c, int t, uint64_t a, const TruncatedDifference& b, double sigma,
                            Direction dir = Direction::Forward);

struct CompleteDifferentials {
    std::vector<uint64_t> d0;
    std::vector<uint64_t> d1;
};
CompleteDifferentials complete_differentials(const std::vector<uint8_t>& table, int N);

// probability that f(x ^ dx) ^ f(x) = 0, for every dx (count over 2^N inputs)
std::vector<uint64_t> autocorrelation_counts(const std::vector<uint8_t>& table, int N);

struct GammaResult {
    bool all_complete = false;
    Rational gamma;
    uint64_t dx = 0;
    int i = 0;
};
GammaResult gamma(const std::vector<uint8_t>& table, int N);

struct ComplexityReport {
    int n = 0, m = 0, r = 0;
    double sigma = 0, tau = 0;
    double enc_gates = 0;
    double q_exact = 0;
    uint64_t q = 0;
    double alg2_gates = 0;
    double alg3_gates = 0;
    double classical_cost = 0;
    int qubits = 0;
    double pairs = 0;
};
ComplexityReport complexity_report(int n, int m, double sigma, double tau, int r, double enc_gates);
nlohmann::json to_json(const ComplexityReport& c);

}  // namespace qtrunc
