#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace qtrunc {

enum class Direction { Forward, Inverse };

const char* to_string(Direction d);
Direction parse_direction(const std::string& s);

struct ExpandedKey {
    uint64_t key = 0;
    // k_1..k_r, followed by the whitening key when the cipher has one
    std::vector<uint64_t> round_keys;
    std::shared_ptr<const std::vector<uint32_t>> table;
    std::shared_ptr<const std::vector<uint32_t>> inverse;
};

inline constexpr int kMaxJointBits = 28;

class Cipher {
  public:
    virtual ~Cipher() = default;

    virtual std::string name() const = 0;
    virtual int block_bits() const = 0;
    virtual int key_bits() const = 0;
    virtual int rounds() const = 0;

    virtual ExpandedKey expand(uint64_t k) const = 0;
    virtual uint64_t encrypt_round(uint64_t x, const ExpandedKey& ek, int i) const = 0;
    virtual uint64_t decrypt_round(uint64_t y, const ExpandedKey& ek, int i) const = 0;

    // Key material mixed in by round r after its nonlinear layer. Ciphers that
    // only add key before the nonlinear layer of the final round report the
    // round key itself, and strip_final_round then shows it has no influence.
    virtual int final_key_bits() const { return 0; }
    virtual uint64_t final_round_key(const ExpandedKey&) const { return 0; }
    // Undo round r with a guessed final key, up to a constant XOR that
    // cancels in differences.
    virtual uint64_t strip_final_round(uint64_t y, uint64_t final_key) const;

    virtual nlohmann::json describe() const;

    std::vector<uint64_t> key_schedule(uint64_t k) const;
    uint64_t encrypt_rounds(uint64_t x, const ExpandedKey& ek, int from, int to) const;
    uint64_t encrypt_reduced(uint64_t x, const ExpandedKey& ek, int t) const;
    uint64_t encrypt_reduced(uint64_t x, uint64_t k, int t) const;
    uint64_t encrypt(uint64_t x, const ExpandedKey& ek) const { return encrypt_reduced(x, ek, rounds()); }
    uint64_t decrypt_suffix(uint64_t y, const ExpandedKey& ek, int t1) const;
    uint64_t decrypt_suffix(uint64_t y, uint64_t k, int t1) const;
    uint64_t decrypt(uint64_t y, const ExpandedKey& ek) const { return decrypt_suffix(y, ek, 0); }

    // Enc^t (forward) or the inverse of the last t rounds (inverse)
    uint64_t apply(uint64_t x, const ExpandedKey& ek, int t, Direction dir) const;

    int joint_bits() const { return block_bits() + key_bits(); }
};

using CipherPtr = std::shared_ptr<const Cipher>;

struct SpnParams {
    std::string name = "SPN";
    int n = 8;
    int m = 8;
    int r = 4;
    int sbox_bits = 4;
    std::vector<uint32_t> sbox;
    // perm[i] is the destination of bit i (LSB = 0)
    std::vector<int> perm;
    // per round; bit s set bypasses S-box s (s = 0 is the least significant)
    std::vector<uint64_t> skip;
    // k_i = rotl(k, key_rotate * i) ^ (key_xor_index ? i : 0), low n bits
    int key_rotate = 1;
    bool key_xor_index = true;
    // extra k_{r+1} XORed after the last round
    bool whitening = false;
};

class SpnCipher : public Cipher {
  public:
    explicit SpnCipher(SpnParams p);

    std::string name() const override { return p_.name; }
    int block_bits() const override { return p_.n; }
    int key_bits() const override { return p_.m; }
    int rounds() const override { return p_.r; }
    ExpandedKey expand(uint64_t k) const override;
    uint64_t encrypt_round(uint64_t x, const ExpandedKey& ek, int i) const override;
    uint64_t decrypt_round(uint64_t y, const ExpandedKey& ek, int i) const override;
    int final_key_bits() const override { return p_.n; }
    uint64_t final_round_key(const ExpandedKey& ek) const override;
    uint64_t strip_final_round(uint64_t y, uint64_t final_key) const override;
    nlohmann::json describe() const override;

    const SpnParams& params() const { return p_; }
    uint64_t round_key(uint64_t k, int i) const;

  private:
    uint64_t layer(uint64_t v, int round) const;
    uint64_t layer_inv(uint64_t v, int round) const;
    uint64_t sub(uint64_t v, uint64_t skip, const std::vector<uint32_t>& box) const;
    uint64_t permute(uint64_t v, const std::vector<int>& perm) const;

    SpnParams p_;
    std::vector<uint32_t> sbox_inv_;
    std::vector<int> perm_inv_;
    std::vector<int> round_table_;  // index into tables_ per round, -1 if computed directly
    std::vector<std::vector<uint32_t>> tables_, tables_inv_;
};

struct FeistelParams {
    std::string name = "TOYFEISTEL";
    int n = 8;
    int m = 8;
    int r = 4;
    std::vector<uint32_t> sbox;
    int key_rotate = 1;
};

// (L, R) -> (R, L ^ S(R ^ k_i)); L is the high half.
class FeistelCipher : public Cipher {
  public:
    explicit FeistelCipher(FeistelParams p);

    std::string name() const override { return p_.name; }
    int block_bits() const override { return p_.n; }
    int key_bits() const override { return p_.m; }
    int rounds() const override { return p_.r; }
    ExpandedKey expand(uint64_t k) const override;
    uint64_t encrypt_round(uint64_t x, const ExpandedKey& ek, int i) const override;
    uint64_t decrypt_round(uint64_t y, const ExpandedKey& ek, int i) const override;
    int final_key_bits() const override { return p_.n / 2; }
    uint64_t final_round_key(const ExpandedKey& ek) const override { return ek.round_keys.back(); }
    uint64_t strip_final_round(uint64_t y, uint64_t final_key) const override;
    nlohmann::json describe() const override;

  private:
    FeistelParams p_;
    int h_;
};

// Keyed random permutation: each key seeds a Fisher-Yates shuffle.
class RandomPermCipher : public Cipher {
  public:
    RandomPermCipher(int n, int m, uint64_t salt);

    std::string name() const override { return "RANDOMPERM"; }
    int block_bits() const override { return n_; }
    int key_bits() const override { return m_; }
    int rounds() const override { return 1; }
    ExpandedKey expand(uint64_t k) const override;
    uint64_t encrypt_round(uint64_t x, const ExpandedKey& ek, int i) const override;
    uint64_t decrypt_round(uint64_t y, const ExpandedKey& ek, int i) const override;
    nlohmann::json describe() const override;

  private:
    int n_, m_;
    uint64_t salt_;
};

const std::vector<uint32_t>& toy_sbox();

CipherPtr make_toy8(int rounds = 4);
// S = identity; the bit permutation is the identity or rotl2
CipherPtr make_toy8_identity(int rounds = 1, bool rotate = false);
CipherPtr make_toyfeistel(int rounds = 4);
// high-nibble S-box bypassed in rounds 1..t_star
CipherPtr make_planted(int rounds = 3, int t_star = 2, bool whitening = true);
// skip pattern hi, lo, hi, hi over four rounds
CipherPtr make_planted_boomerang();
CipherPtr make_randomperm(int n = 8, int m = 32, uint64_t salt = 0x5eedULL);

// Builds a cipher from a config block: {"name": ..., rounds, ...} or a
// custom SPN definition.
CipherPtr make_cipher(const nlohmann::json& block);

// Lazily materialized outputs of Enc^t / (Enc^t)^-1 over every joint input
// (x << m) | k; thread safe.
class TruthTableCache {
  public:
    explicit TruthTableCache(CipherPtr cipher);

    const Cipher& cipher() const { return *cipher_; }
    CipherPtr cipher_ptr() const { return cipher_; }
    std::shared_ptr<const std::vector<uint32_t>> outputs(int t, Direction dir);
    // bit j (1-based, MSB first) of the outputs, one byte per joint input
    std::vector<uint8_t> component(int j, int t, Direction dir);

  private:
    CipherPtr cipher_;
    std::mutex mu_;
    std::map<std::pair<int, int>, std::shared_ptr<const std::vector<uint32_t>>> cache_;
};

std::vector<uint8_t> component_truth_table(const Cipher& c, int j, int t, Direction dir);
void check_joint_size(const Cipher& c);

}  // namespace qtrunc
