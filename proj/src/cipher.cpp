#include "qtrunc/cipher.hpp"

#include <numeric>
#include <stdexcept>

#include "qtrunc/bitword.hpp"
#include "qtrunc/error.hpp"
#include "qtrunc/rng.hpp"

namespace qtrunc {

const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "inverse"; }

Direction parse_direction(const std::string& s) {
    if (s == "forward") return Direction::Forward;
    if (s == "inverse") return Direction::Inverse;
    throw std::invalid_argument("direction must be 'forward' or 'inverse', got '" + s + "'");
}

uint64_t Cipher::strip_final_round(uint64_t, uint64_t) const {
    throw std::invalid_argument(name() + " exposes no final-round key for recovery");
}

nlohmann::json Cipher::describe() const {
    return {{"name", name()}, {"n", block_bits()}, {"m", key_bits()}, {"rounds", rounds()}};
}

std::vector<uint64_t> Cipher::key_schedule(uint64_t k) const { return expand(k).round_keys; }

uint64_t Cipher::encrypt_rounds(uint64_t x, const ExpandedKey& ek, int from, int to) const {
    for (int i = from; i <= to; ++i) x = encrypt_round(x, ek, i);
    return x;
}

uint64_t Cipher::encrypt_reduced(uint64_t x, const ExpandedKey& ek, int t) const {
    if (t < 1 || t > rounds()) throw std::out_of_range("round count t out of range");
    return encrypt_rounds(x, ek, 1, t);
}

uint64_t Cipher::encrypt_reduced(uint64_t x, uint64_t k, int t) const { return encrypt_reduced(x, expand(k), t); }

uint64_t Cipher::decrypt_suffix(uint64_t y, const ExpandedKey& ek, int t1) const {
    if (t1 < 0 || t1 >= rounds()) throw std::out_of_range("split t1 out of range");
    for (int i = rounds(); i > t1; --i) y = decrypt_round(y, ek, i);
    return y;
}

uint64_t Cipher::decrypt_suffix(uint64_t y, uint64_t k, int t1) const { return decrypt_suffix(y, expand(k), t1); }

uint64_t Cipher::apply(uint64_t x, const ExpandedKey& ek, int t, Direction dir) const {
    if (dir == Direction::Forward) return encrypt_reduced(x, ek, t);
    if (t < 1 || t > rounds()) throw std::out_of_range("round count t out of range");
    return decrypt_suffix(x, ek, rounds() - t);
}

// ---- SPN ----

SpnCipher::SpnCipher(SpnParams p) : p_(std::move(p)) {
    if (p_.n < 1 || p_.n > 32) throw std::invalid_argument("SPN block size must be in 1..32");
    if (p_.m < 1 || p_.m > 64) throw std::invalid_argument("SPN key size must be in 1..64");
    if (p_.r < 1) throw std::invalid_argument("SPN needs at least one round");
    if (p_.sbox_bits < 1 || p_.n % p_.sbox_bits) throw std::invalid_argument("S-box width must divide the block size");
    if (p_.sbox.size() != (size_t{1} << p_.sbox_bits)) throw std::invalid_argument("S-box table has the wrong length");
    sbox_inv_.assign(p_.sbox.size(), 0);
    std::vector<bool> seen(p_.sbox.size(), false);
    for (size_t i = 0; i < p_.sbox.size(); ++i) {
        uint32_t v = p_.sbox[i];
        if (v >= p_.sbox.size() || seen[v]) throw std::invalid_argument("S-box is not a permutation");
        seen[v] = true;
        sbox_inv_[v] = static_cast<uint32_t>(i);
    }
    if (p_.perm.empty()) {
        p_.perm.resize(p_.n);
        std::iota(p_.perm.begin(), p_.perm.end(), 0);
    }
    if (static_cast<int>(p_.perm.size()) != p_.n) throw std::invalid_argument("bit permutation has the wrong length");
    perm_inv_.assign(p_.n, -1);
    for (int i = 0; i < p_.n; ++i) {
        int d = p_.perm[i];
        if (d < 0 || d >= p_.n || perm_inv_[d] != -1) throw std::invalid_argument("bit permutation is not a permutation");
        perm_inv_[d] = i;
    }
    if (p_.skip.empty()) p_.skip.assign(p_.r, 0);
    if (static_cast<int>(p_.skip.size()) != p_.r) throw std::invalid_argument("skip list must have one entry per round");

    round_table_.assign(p_.r, -1);
    if (p_.n <= 16) {
        std::map<uint64_t, int> by_skip;
        for (int i = 0; i < p_.r; ++i) {
            auto it = by_skip.find(p_.skip[i]);
            if (it != by_skip.end()) {
                round_table_[i] = it->second;
                continue;
            }
            size_t size = size_t{1} << p_.n;
            std::vector<uint32_t> fwd(size), inv(size);
            for (size_t v = 0; v < size; ++v) {
                uint64_t y = permute(sub(v, p_.skip[i], p_.sbox), p_.perm);
                fwd[v] = static_cast<uint32_t>(y);
                inv[y] = static_cast<uint32_t>(v);
            }
            int idx = static_cast<int>(tables_.size());
            tables_.push_back(std::move(fwd));
            tables_inv_.push_back(std::move(inv));
            by_skip[p_.skip[i]] = idx;
            round_table_[i] = idx;
        }
    }
}

uint64_t SpnCipher::sub(uint64_t v, uint64_t skip, const std::vector<uint32_t>& box) const {
    int w = p_.sbox_bits;
    uint64_t mask = low_mask(w);
    uint64_t out = 0;
    for (int s = 0; s * w < p_.n; ++s) {
        uint64_t part = (v >> (s * w)) & mask;
        if (!((skip >> s) & 1)) part = box[part];
        out |= part << (s * w);
    }
    return out;
}

uint64_t SpnCipher::permute(uint64_t v, const std::vector<int>& perm) const {
    uint64_t out = 0;
    for (int i = 0; i < p_.n; ++i) out |= ((v >> i) & 1) << perm[i];
    return out;
}

uint64_t SpnCipher::layer(uint64_t v, int round) const {
    int idx = round_table_[round - 1];
    if (idx >= 0) return tables_[idx][v];
    return permute(sub(v, p_.skip[round - 1], p_.sbox), p_.perm);
}

uint64_t SpnCipher::layer_inv(uint64_t v, int round) const {
    int idx = round_table_[round - 1];
    if (idx >= 0) return tables_inv_[idx][v];
    return sub(permute(v, perm_inv_), p_.skip[round - 1], sbox_inv_);
}

uint64_t SpnCipher::round_key(uint64_t k, int i) const {
    uint64_t rk = rotl_w(k, p_.key_rotate * i, p_.m);
    if (p_.key_xor_index) rk ^= static_cast<uint64_t>(i);
    return rk & low_mask(p_.n);
}

ExpandedKey SpnCipher::expand(uint64_t k) const {
    ExpandedKey ek;
    ek.key = k;
    int count = p_.r + (p_.whitening ? 1 : 0);
    ek.round_keys.reserve(count);
    for (int i = 1; i <= count; ++i) ek.round_keys.push_back(round_key(k, i));
    return ek;
}

uint64_t SpnCipher::encrypt_round(uint64_t x, const ExpandedKey& ek, int i) const {
    uint64_t y = layer(x ^ ek.round_keys[i - 1], i);
    if (p_.whitening && i == p_.r) y ^= ek.round_keys[p_.r];
    return y;
}

uint64_t SpnCipher::decrypt_round(uint64_t y, const ExpandedKey& ek, int i) const {
    if (p_.whitening && i == p_.r) y ^= ek.round_keys[p_.r];
    return layer_inv(y, i) ^ ek.round_keys[i - 1];
}

uint64_t SpnCipher::final_round_key(const ExpandedKey& ek) const {
    return p_.whitening ? ek.round_keys[p_.r] : ek.round_keys[p_.r - 1];
}

uint64_t SpnCipher::strip_final_round(uint64_t y, uint64_t final_key) const {
    if (p_.whitening) return layer_inv(y ^ final_key, p_.r);
    return layer_inv(y, p_.r) ^ final_key;
}

nlohmann::json SpnCipher::describe() const {
    nlohmann::json j = Cipher::describe();
    j["kind"] = "spn";
    j["sbox_bits"] = p_.sbox_bits;
    j["sbox"] = p_.sbox;
    j["perm"] = p_.perm;
    j["skip"] = p_.skip;
    j["key_rotate"] = p_.key_rotate;
    j["key_xor_index"] = p_.key_xor_index;
    j["whitening"] = p_.whitening;
    return j;
}

// ---- Feistel ----

FeistelCipher::FeistelCipher(FeistelParams p) : p_(std::move(p)) {
    if (p_.n < 2 || p_.n % 2 || p_.n > 32) throw std::invalid_argument("Feistel block size must be even and <= 32");
    h_ = p_.n / 2;
    if (p_.sbox.size() != (size_t{1} << h_)) throw std::invalid_argument("Feistel S-box must cover one half-block");
    if (p_.r < 1) throw std::invalid_argument("Feistel needs at least one round");
}

ExpandedKey FeistelCipher::expand(uint64_t k) const {
    ExpandedKey ek;
    ek.key = k;
    for (int i = 1; i <= p_.r; ++i)
        ek.round_keys.push_back((rotl_w(k, p_.key_rotate * i, p_.m) ^ static_cast<uint64_t>(i)) & low_mask(h_));
    return ek;
}

uint64_t FeistelCipher::encrypt_round(uint64_t x, const ExpandedKey& ek, int i) const {
    uint64_t l = x >> h_, r = x & low_mask(h_);
    uint64_t nr = l ^ p_.sbox[r ^ ek.round_keys[i - 1]];
    return (r << h_) | nr;
}

uint64_t FeistelCipher::decrypt_round(uint64_t y, const ExpandedKey& ek, int i) const {
    return strip_final_round(y, ek.round_keys[i - 1]);
}

uint64_t FeistelCipher::strip_final_round(uint64_t y, uint64_t final_key) const {
    uint64_t l = y >> h_, r = y & low_mask(h_);
    uint64_t pl = r ^ p_.sbox[l ^ final_key];
    return (pl << h_) | l;
}

nlohmann::json FeistelCipher::describe() const {
    nlohmann::json j = Cipher::describe();
    j["kind"] = "feistel";
    j["sbox"] = p_.sbox;
    j["key_rotate"] = p_.key_rotate;
    return j;
}

// ---- random permutation ----

RandomPermCipher::RandomPermCipher(int n, int m, uint64_t salt) : n_(n), m_(m), salt_(salt) {
    if (n < 1 || n > 24) throw std::invalid_argument("RANDOMPERM block size must be in 1..24");
    if (m < 1 || m > 64) throw std::invalid_argument("RANDOMPERM key size must be in 1..64");
}

ExpandedKey RandomPermCipher::expand(uint64_t k) const {
    ExpandedKey ek;
    ek.key = k;
    ek.round_keys.push_back(k);
    std::vector<uint32_t> t(size_t{1} << n_);
    std::iota(t.begin(), t.end(), 0u);
    Rng rng(derive_seed(salt_, "randomperm", k));
    shuffle(t, rng);
    std::vector<uint32_t> inv(t.size());
    for (size_t i = 0; i < t.size(); ++i) inv[t[i]] = static_cast<uint32_t>(i);
    ek.table = std::make_shared<const std::vector<uint32_t>>(std::move(t));
    ek.inverse = std::make_shared<const std::vector<uint32_t>>(std::move(inv));
    return ek;
}

uint64_t RandomPermCipher::encrypt_round(uint64_t x, const ExpandedKey& ek, int) const { return (*ek.table)[x]; }

uint64_t RandomPermCipher::decrypt_round(uint64_t y, const ExpandedKey& ek, int) const { return (*ek.inverse)[y]; }

nlohmann::json RandomPermCipher::describe() const {
    nlohmann::json j = Cipher::describe();
    j["kind"] = "randomperm";
    j["salt"] = salt_;
    return j;
}

// ---- built-ins ----

const std::vector<uint32_t>& toy_sbox() {
    static const std::vector<uint32_t> s = {0xC, 5, 6, 0xB, 9, 0, 0xA, 0xD, 3, 0xE, 0xF, 8, 4, 7, 1, 2};
    return s;
}

namespace {

std::vector<int> rotl_perm(int n, int s) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = (i + s) % n;
    return p;
}

SpnParams toy8_params(const std::string& name, int rounds) {
    if (rounds < 1 || rounds > 8) throw std::invalid_argument("TOY8 family supports 1..8 rounds");
    SpnParams p;
    p.name = name;
    p.r = rounds;
    p.sbox = toy_sbox();
    p.perm = rotl_perm(8, 2);
    return p;
}

constexpr uint64_t kHi = 0b10;
constexpr uint64_t kLo = 0b01;

}  // namespace

CipherPtr make_toy8(int rounds) { return std::make_shared<SpnCipher>(toy8_params("TOY8", rounds)); }

CipherPtr make_toy8_identity(int rounds, bool rotate) {
    SpnParams p = toy8_params(rotate ? "TOY8-ID-ROTL2" : "TOY8-ID", rounds);
    p.sbox.resize(16);
    std::iota(p.sbox.begin(), p.sbox.end(), 0u);
    if (!rotate) p.perm = rotl_perm(8, 0);
    return std::make_shared<SpnCipher>(p);
}

CipherPtr make_toyfeistel(int rounds) {
    FeistelParams p;
    p.r = rounds;
    p.sbox = toy_sbox();
    return std::make_shared<FeistelCipher>(p);
}

CipherPtr make_planted(int rounds, int t_star, bool whitening) {
    SpnParams p = toy8_params("PLANTED", rounds);
    if (t_star < 0 || t_star > rounds) throw std::invalid_argument("PLANTED t_star out of range");
    for (int i = 0; i < t_star; ++i) p.skip.push_back(kHi);
    for (int i = t_star; i < rounds; ++i) p.skip.push_back(0);
    p.whitening = whitening;
    return std::make_shared<SpnCipher>(p);
}

CipherPtr make_planted_boomerang() {
    SpnParams p = toy8_params("PLANTED-BOOMERANG", 4);
    p.skip = {kHi, kLo, kHi, kHi};
    return std::make_shared<SpnCipher>(p);
}

CipherPtr make_randomperm(int n, int m, uint64_t salt) { return std::make_shared<RandomPermCipher>(n, m, salt); }

namespace {

std::vector<uint64_t> parse_skip(const nlohmann::json& j) {
    std::vector<uint64_t> out;
    for (const auto& e : j) {
        if (e.is_number_unsigned() || e.is_number_integer()) {
            out.push_back(e.get<uint64_t>());
        } else {
            std::string s = e.get<std::string>();
            if (s == "none" || s.empty()) out.push_back(0);
            else if (s == "hi") out.push_back(kHi);
            else if (s == "lo") out.push_back(kLo);
            else if (s == "both") out.push_back(kHi | kLo);
            else out.push_back(parse_word(s));
        }
    }
    return out;
}

}  // namespace

CipherPtr make_cipher(const nlohmann::json& block) {
    if (block.is_string()) return make_cipher(nlohmann::json{{"name", block}});
    std::string name = block.value("name", std::string("TOY8"));
    if (name == "TOY8") return make_toy8(block.value("rounds", 4));
    if (name == "TOY8-ID") return make_toy8_identity(block.value("rounds", 1), block.value("perm", std::string("identity")) == "rotl2");
    if (name == "TOYFEISTEL") return make_toyfeistel(block.value("rounds", 4));
    if (name == "PLANTED")
        return make_planted(block.value("rounds", 3), block.value("t_star", 2), block.value("whitening", true));
    if (name == "PLANTED-BOOMERANG") return make_planted_boomerang();
    if (name == "RANDOMPERM")
        return make_randomperm(block.value("n", 8), block.value("m", 32), block.value("salt", uint64_t{0x5eed}));
    if (name == "SPN" || block.contains("sbox")) {
        SpnParams p;
        p.name = name;
        p.n = block.value("n", 8);
        p.m = block.value("m", 8);
        p.r = block.value("rounds", 4);
        p.sbox_bits = block.value("sbox_bits", 4);
        p.sbox = block.at("sbox").get<std::vector<uint32_t>>();
        if (block.contains("perm")) p.perm = block.at("perm").get<std::vector<int>>();
        if (block.contains("skip")) p.skip = parse_skip(block.at("skip"));
        if (block.contains("schedule")) {
            const auto& s = block.at("schedule");
            p.key_rotate = s.value("rotate", 1);
            p.key_xor_index = s.value("xor_index", true);
        }
        p.whitening = block.value("whitening", false);
        return std::make_shared<SpnCipher>(p);
    }
    throw std::invalid_argument("unknown cipher '" + name + "'");
}

// ---- truth tables ----

void check_joint_size(const Cipher& c) {
    if (c.joint_bits() > kMaxJointBits)
        throw ResourceError("n + m = " + std::to_string(c.joint_bits()) + " exceeds the " +
                            std::to_string(kMaxJointBits) + "-bit truth-table guard for " + c.name());
}

namespace {

std::vector<uint32_t> build_outputs(const Cipher& c, int t, Direction dir) {
    check_joint_size(c);
    if (t < 1 || t > c.rounds()) throw std::out_of_range("round count t out of range");
    int n = c.block_bits(), m = c.key_bits();
    std::vector<uint32_t> out(size_t{1} << (n + m));
    for (uint64_t k = 0; k < (uint64_t{1} << m); ++k) {
        ExpandedKey ek = c.expand(k);
        for (uint64_t x = 0; x < (uint64_t{1} << n); ++x)
            out[(x << m) | k] = static_cast<uint32_t>(c.apply(x, ek, t, dir));
    }
    return out;
}

}  // namespace

TruthTableCache::TruthTableCache(CipherPtr cipher) : cipher_(std::move(cipher)) {}

std::shared_ptr<const std::vector<uint32_t>> TruthTableCache::outputs(int t, Direction dir) {
    auto key = std::make_pair(t, static_cast<int>(dir));
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    auto built = std::make_shared<const std::vector<uint32_t>>(build_outputs(*cipher_, t, dir));
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, built).first->second;
}

std::vector<uint8_t> TruthTableCache::component(int j, int t, Direction dir) {
    int n = cipher_->block_bits();
    if (j < 1 || j > n) throw std::out_of_range("component index j out of range");
    auto out = outputs(t, dir);
    std::vector<uint8_t> bits(out->size());
    int shift = n - j;
    for (size_t i = 0; i < out->size(); ++i) bits[i] = static_cast<uint8_t>(((*out)[i] >> shift) & 1);
    return bits;
}

std::vector<uint8_t> component_truth_table(const Cipher& c, int j, int t, Direction dir) {
    int n = c.block_bits();
    if (j < 1 || j > n) throw std::out_of_range("component index j out of range");
    auto out = build_outputs(c, t, dir);
    std::vector<uint8_t> bits(out.size());
    for (size_t i = 0; i < out.size(); ++i) bits[i] = static_cast<uint8_t>((out[i] >> (n - j)) & 1);
    return bits;
}

}  // namespace qtrunc
