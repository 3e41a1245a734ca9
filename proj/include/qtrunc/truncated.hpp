#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtrunc/cipher.hpp"
#include "qtrunc/gf2.hpp"

namespace qtrunc {

// Trit vector over {0, 1, *}. Stored as a mask of predicted positions and
// their values; the string form lists position 1 (MSB) first.
class TruncatedDifference {
  public:
    TruncatedDifference() = default;
    TruncatedDifference(int width, uint64_t mask, uint64_t value);
    static TruncatedDifference parse(const std::string& trits);
    static TruncatedDifference exact(uint64_t value, int width) { return {width, low_mask(width), value}; }
    static TruncatedDifference unknown(int width) { return {width, 0, 0}; }

    int width() const { return width_; }
    uint64_t mask() const { return mask_; }
    uint64_t value() const { return value_; }
    int d() const;
    bool matches(uint64_t delta) const { return ((delta ^ value_) & mask_) == 0; }
    // predicted bits kept, unpredicted bits set to zero
    uint64_t concrete() const { return value_; }
    std::string str() const;
    bool operator==(const TruncatedDifference& o) const = default;

  private:
    int width_ = 1;
    uint64_t mask_ = 0;
    uint64_t value_ = 0;
};

struct SNParams {
    double L = 1;
    double p = 0;
    double alpha = 1;
    double lambda = 1;

    static SNParams counting(double L, double p, int d);
};

double signal_to_noise(const SNParams& params);
bool sn_gate(int d, double sigma);

// q(n) = tau^2 n^3 / (2 (1 - sigma)^2), rounded up
uint64_t sample_budget(int n, double sigma, double tau);

enum class ScanMode { Ascending, PreferMaxD };
const char* to_string(ScanMode m);
ScanMode parse_scan_mode(const std::string& s);

struct TruncatedDifferential {
    uint64_t a = 0;
    TruncatedDifference b;
    int d = 0;
    double sigma = 0;
    double tau = 0;
    uint64_t q = 0;
    bool q_overridden = false;
    std::string cipher;
    int t = 0;
    Direction direction = Direction::Forward;
    ScanMode mode = ScanMode::Ascending;
    std::vector<int> subscripts;
    std::vector<int> bits;  // i_j for each subscript
    uint64_t seed = 0;
};

struct ComponentRecord {
    int j = 0;
    int rank = 0;
    bool degenerate = false;
    SolutionPair z;
    uint64_t samples = 0;
    // distinct full-width samples (x || k bits) with multiplicities
    std::vector<std::pair<uint64_t, uint64_t>> w;
};

struct Alg2Options {
    Direction direction = Direction::Forward;
    ScanMode mode = ScanMode::Ascending;
    std::optional<uint64_t> q_override;
    int workers = 1;
    uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct Alg2Result {
    bool found = false;
    TruncatedDifferential td;
    std::vector<ComponentRecord> components;
    int max_common = 0;
    bool enumeration_truncated = false;
};

Alg2Result algorithm2(TruthTableCache& cache, int t, double sigma, double tau, uint64_t seed,
                      const Alg2Options& options = {});

// J(a): subscripts whose Z_j holds a, with the half each one came from
struct CommonSet {
    uint64_t a = 0;
    std::vector<int> subscripts;
    std::vector<int> bits;
};
std::vector<CommonSet> common_subscripts(const std::vector<ComponentRecord>& comps, uint64_t cap,
                                         bool* truncated = nullptr);

nlohmann::json to_json(const TruncatedDifferential& td);
TruncatedDifferential truncated_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Alg2Result& r);

}  // namespace qtrunc
