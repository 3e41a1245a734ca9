#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qtrunc {

inline constexpr const char* kRngIdentity = "mt19937_64/splitmix64";

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stream seed for (master, tag, index...). Pure function so workers can
// derive their streams independently.
inline uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t a = 0, uint64_t b = 0) {
    uint64_t s = master ^ fnv1a64(tag);
    uint64_t out = splitmix64(s);
    s ^= a * 0xd1b54a32d192ed03ULL;
    out ^= splitmix64(s);
    s ^= b * 0x8cb92ba72f3d8dd7ULL;
    out ^= splitmix64(s);
    return out;
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // uniform on [0, bound), bound >= 1
    uint64_t below(uint64_t bound) {
        if ((bound & (bound - 1)) == 0) return eng_() & (bound - 1);
        uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    uint64_t bits(int count) { return count >= 64 ? eng_() : (eng_() >> (64 - count)); }

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

template <class T>
void shuffle(T& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace qtrunc
