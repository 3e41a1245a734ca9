#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qtrunc {

inline constexpr uint64_t low_mask(int width) {
    return width >= 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
}

inline constexpr int parity(uint64_t v) { return std::popcount(v) & 1; }

inline constexpr uint64_t rotl_w(uint64_t x, int s, int width) {
    s %= width;
    if (s == 0) return x & low_mask(width);
    return ((x << s) | (x >> (width - s))) & low_mask(width);
}

inline constexpr uint64_t rotr_w(uint64_t x, int s, int width) {
    s %= width;
    return rotl_w(x, width - s, width);
}

// Fixed-width bit string. Bit positions are stored LSB-first; the external
// component index j (1-based, j = 1 is the most significant bit) maps to
// position width - j.
class BitWord {
  public:
    BitWord() = default;
    BitWord(uint64_t bits, int width) : bits_(bits), width_(width) {
        if (width < 1 || width > 64) throw std::invalid_argument("BitWord width must be in 1..64");
        if (bits & ~low_mask(width)) throw std::invalid_argument("BitWord has bits above its width");
    }

    uint64_t bits() const { return bits_; }
    int width() const { return width_; }
    bool is_zero() const { return bits_ == 0; }

    int component(int j) const { return static_cast<int>((bits_ >> (width_ - j)) & 1); }

    BitWord operator^(const BitWord& o) const {
        check_same(o);
        return BitWord(bits_ ^ o.bits_, width_);
    }
    int dot(const BitWord& o) const {
        check_same(o);
        return parity(bits_ & o.bits_);
    }
    bool operator==(const BitWord& o) const = default;

    std::string to_hex() const;
    std::string to_binary() const;

  private:
    void check_same(const BitWord& o) const {
        if (o.width_ != width_) throw std::invalid_argument("BitWord width mismatch");
    }

    uint64_t bits_ = 0;
    int width_ = 1;
};

std::string hex_word(uint64_t v, int width);
uint64_t parse_word(const std::string& text);

}  // namespace qtrunc
