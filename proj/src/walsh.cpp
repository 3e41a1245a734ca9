#include "qtrunc/walsh.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "qtrunc/bitword.hpp"
#include "qtrunc/error.hpp"

namespace qtrunc {

namespace {

void check_table(const std::vector<uint8_t>& table, int N) {
    if (N < 0 || N > kMaxJointBits)
        throw ResourceError("spectrum over N = " + std::to_string(N) + " bits exceeds the " +
                            std::to_string(kMaxJointBits) + "-bit guard");
    if (table.size() != (size_t{1} << N)) throw std::invalid_argument("truth table length must be 2^N");
}

}  // namespace

bool WalshSpectrum::parseval_holds() const {
    unsigned __int128 sum = 0;
    for (int32_t c : coeffs) sum += static_cast<unsigned __int128>(static_cast<int64_t>(c) * c);
    return sum == (static_cast<unsigned __int128>(1) << (2 * N));
}

void fwht_inplace(std::vector<int64_t>& a) {
    for (size_t h = 1; h < a.size(); h <<= 1)
        for (size_t i = 0; i < a.size(); i += h << 1)
            for (size_t j = i; j < i + h; ++j) {
                int64_t x = a[j], y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
}

WalshSpectrum walsh_spectrum(const std::vector<uint8_t>& table, int N) {
    check_table(table, N);
    WalshSpectrum s;
    s.N = N;
    s.coeffs.resize(table.size());
    for (size_t i = 0; i < table.size(); ++i) s.coeffs[i] = table[i] ? -1 : 1;
    auto& a = s.coeffs;
    for (size_t h = 1; h < a.size(); h <<= 1)
        for (size_t i = 0; i < a.size(); i += h << 1)
            for (size_t j = i; j < i + h; ++j) {
                int32_t x = a[j], y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
    return s;
}

WalshSpectrum walsh_spectrum_naive(const std::vector<uint8_t>& table, int N) {
    check_table(table, N);
    WalshSpectrum s;
    s.N = N;
    s.coeffs.assign(table.size(), 0);
    for (size_t u = 0; u < table.size(); ++u) {
        int32_t acc = 0;
        for (size_t x = 0; x < table.size(); ++x) acc += ((table[x] ^ parity(u & x)) & 1) ? -1 : 1;
        s.coeffs[u] = acc;
    }
    return s;
}

BvSampler::BvSampler(const WalshSpectrum& spectrum) : N_(spectrum.N) {
    cum_.push_back(0);
    for (size_t u = 0; u < spectrum.coeffs.size(); ++u) {
        int64_t c = spectrum.coeffs[u];
        if (c == 0) continue;
        support_.push_back(static_cast<uint32_t>(u));
        cum_.push_back(cum_.back() + static_cast<uint64_t>(c * c));
    }
    if (support_.empty() || cum_.back() != (uint64_t{1} << (2 * N_)))
        throw std::invalid_argument("spectrum violates Parseval; not a Boolean function spectrum");
    guide_bits_ = std::min(2 * N_, 12);
    guide_.resize((size_t{1} << guide_bits_) + 1);
    int shift = 2 * N_ - guide_bits_;
    for (size_t g = 0; g < guide_.size(); ++g) {
        uint64_t target = static_cast<uint64_t>(g) << shift;
        auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
        guide_[g] = static_cast<uint32_t>(std::max<ptrdiff_t>(0, (it - cum_.begin()) - 1));
    }
}

size_t BvSampler::sample_index(Rng& rng) const {
    uint64_t r = rng.below(cum_.back());
    size_t g = static_cast<size_t>(r >> (2 * N_ - guide_bits_));
    size_t lo = guide_[g];
    size_t hi = std::min(static_cast<size_t>(guide_[g + 1]) + 1, support_.size());
    // first index i in [lo, hi) with cum_[i + 1] > r
    auto it = std::upper_bound(cum_.begin() + lo + 1, cum_.begin() + hi + 1, r);
    return static_cast<size_t>((it - cum_.begin()) - 1);
}

std::vector<uint64_t> BvSampler::sample(Rng& rng, uint64_t count) const {
    std::vector<uint64_t> out;
    out.reserve(count);
    for (uint64_t i = 0; i < count; ++i) out.push_back(sample(rng));
    return out;
}

namespace {

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated spectrum file");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void write_spectrum(const std::string& path, const WalshSpectrum& s, const SpectrumHeader& h) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write("WHS1", 4);
    put_u32(os, static_cast<uint32_t>(s.N));
    put_u32(os, static_cast<uint32_t>(h.cipher.size()));
    os.write(h.cipher.data(), static_cast<std::streamsize>(h.cipher.size()));
    put_u32(os, h.j);
    put_u32(os, h.t);
    char dir = h.direction == Direction::Forward ? 0 : 1;
    os.write(&dir, 1);
    for (int32_t c : s.coeffs) {
        uint64_t v = static_cast<uint64_t>(static_cast<int64_t>(c));
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        os.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!os) throw std::runtime_error("write failed for " + path);
}

WalshSpectrum read_spectrum(const std::string& path, SpectrumHeader* header) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "WHS1", 4) != 0) throw std::runtime_error("not a WHS1 file: " + path);
    WalshSpectrum s;
    s.N = static_cast<int>(get_u32(is));
    if (s.N > kMaxJointBits) throw ResourceError("spectrum file N exceeds guard");
    SpectrumHeader h;
    uint32_t len = get_u32(is);
    h.cipher.resize(len);
    if (!is.read(h.cipher.data(), len)) throw std::runtime_error("truncated spectrum file");
    h.j = get_u32(is);
    h.t = get_u32(is);
    char dir;
    if (!is.read(&dir, 1)) throw std::runtime_error("truncated spectrum file");
    h.direction = dir ? Direction::Inverse : Direction::Forward;
    s.coeffs.resize(size_t{1} << s.N);
    for (auto& c : s.coeffs) {
        unsigned char b[8];
        if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated spectrum file");
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
        c = static_cast<int32_t>(static_cast<int64_t>(v));
    }
    if (header) *header = h;
    return s;
}

}  // namespace qtrunc
