#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtrunc/cipher.hpp"
#include "qtrunc/rng.hpp"

namespace qtrunc {

// s(u) = sum_x (-1)^(f(x) + u.x), i.e. the normalized Walsh transform scaled by 2^N.
struct WalshSpectrum {
    int N = 0;
    std::vector<int32_t> coeffs;

    bool parseval_holds() const;
};

WalshSpectrum walsh_spectrum(const std::vector<uint8_t>& table, int N);
// O(4^N) definitional sum, for cross-checks
WalshSpectrum walsh_spectrum_naive(const std::vector<uint8_t>& table, int N);
void fwht_inplace(std::vector<int64_t>& a);

// Draws u with probability s(u)^2 / 2^(2N), exactly.
class BvSampler {
  public:
    explicit BvSampler(const WalshSpectrum& spectrum);

    uint64_t sample(Rng& rng) const { return support_[sample_index(rng)]; }
    size_t sample_index(Rng& rng) const;
    std::vector<uint64_t> sample(Rng& rng, uint64_t count) const;

    int N() const { return N_; }
    const std::vector<uint32_t>& support() const { return support_; }
    // weight s(u)^2 of support entry i
    uint64_t weight(size_t i) const { return cum_[i + 1] - cum_[i]; }
    uint64_t total() const { return cum_.back(); }

  private:
    int N_;
    std::vector<uint32_t> support_;
    std::vector<uint64_t> cum_;  // cum_[0] = 0, cum_.back() = 2^(2N)
    int guide_bits_;
    std::vector<uint32_t> guide_;
};

struct SpectrumHeader {
    std::string cipher;
    uint32_t j = 0;
    uint32_t t = 0;
    Direction direction = Direction::Forward;
};

void write_spectrum(const std::string& path, const WalshSpectrum& s, const SpectrumHeader& h);
WalshSpectrum read_spectrum(const std::string& path, SpectrumHeader* header = nullptr);

}  // namespace qtrunc
