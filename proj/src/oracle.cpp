#include "qtrunc/oracle.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qtrunc/bitword.hpp"
#include "qtrunc/error.hpp"
#include "qtrunc/rng.hpp"

namespace qtrunc {

namespace {

void guard_block(const Cipher& c) {
    if (c.block_bits() > kMaxOracleBits)
        throw ResourceError("exhaustive oracle limited to n <= " + std::to_string(kMaxOracleBits) +
                            "; use the sampled mode for " + c.name());
}

void guard_keys(const Cipher& c) {
    if (c.key_bits() > kMaxOracleBits)
        throw ResourceError("exhaustive key scan limited to m <= " + std::to_string(kMaxOracleBits) + " for " +
                            c.name());
}

uint64_t count_matches(const Cipher& c, const ExpandedKey& ek, int t, Direction dir, uint64_t a,
                       const TruncatedDifference& b) {
    uint64_t hits = 0;
    uint64_t size = uint64_t{1} << c.block_bits();
    for (uint64_t x = 0; x < size; ++x)
        if (b.matches(c.apply(x ^ a, ek, t, dir) ^ c.apply(x, ek, t, dir))) ++hits;
    return hits;
}

}  // namespace

Rational differential_probability(const Cipher& c, int t, uint64_t k, uint64_t dx, uint64_t dy, Direction dir) {
    guard_block(c);
    int n = c.block_bits();
    return {count_matches(c, c.expand(k), t, dir, dx, TruncatedDifference::exact(dy, n)), uint64_t{1} << n};
}

Rational truncated_probability(const Cipher& c, int t, uint64_t k, uint64_t a, const TruncatedDifference& b,
                               Direction dir) {
    guard_block(c);
    if (a == 0) throw std::invalid_argument("truncated_probability needs a nonzero input difference");
    if (b.width() != c.block_bits()) throw std::invalid_argument("truncated difference width mismatch");
    return {count_matches(c, c.expand(k), t, dir, a, b), uint64_t{1} << c.block_bits()};
}

Rational omega_probability(const Cipher& c, int t, uint64_t k, const TruncatedDifference& in,
                           const TruncatedDifference& b, Direction dir) {
    guard_block(c);
    int n = c.block_bits();
    if (in.width() != n || b.width() != n) throw std::invalid_argument("truncated difference width mismatch");
    ExpandedKey ek = c.expand(k);
    uint64_t size = uint64_t{1} << n;
    std::vector<uint64_t> out(size);
    for (uint64_t x = 0; x < size; ++x) out[x] = c.apply(x, ek, t, dir);
    uint64_t hits = 0, members = 0;
    for (uint64_t dx = 1; dx < size; ++dx) {
        if (!in.matches(dx)) continue;
        ++members;
        for (uint64_t x = 0; x < size; ++x)
            if (b.matches(out[x ^ dx] ^ out[x])) ++hits;
    }
    if (!members) throw std::invalid_argument("input truncated difference has no nonzero member");
    return {hits, members * size};
}

Rational KeyProfile::fraction_above(double sigma) const {
    uint64_t above = 0;
    for (uint64_t v : num)
        if (Rational{v, den}.above(sigma)) ++above;
    return {above, static_cast<uint64_t>(num.size())};
}

double KeyProfile::mean() const {
    long double s = 0;
    for (uint64_t v : num) s += v;
    return static_cast<double>(s / (static_cast<long double>(den) * num.size()));
}

std::string KeyProfile::csv() const {
    std::ostringstream os;
    os << "key,numerator,denominator\n";
    int m = 1;
    while ((uint64_t{1} << m) < num.size()) ++m;
    for (size_t k = 0; k < num.size(); ++k) os << hex_word(k, m) << ',' << num[k] << ',' << den << '\n';
    return os.str();
}

KeyProfile key_profile(const Cipher& c, int t, uint64_t a, const TruncatedDifference& b, const ProfileOptions& opt) {
    guard_keys(c);
    if (!opt.sampled) guard_block(c);
    if (a == 0) throw std::invalid_argument("key profile needs a nonzero input difference");
    if (b.width() != c.block_bits()) throw std::invalid_argument("truncated difference width mismatch");
    KeyProfile p;
    p.cipher = c.name();
    p.t = t;
    p.direction = opt.direction;
    p.a = a;
    p.b = b;
    p.sampled = opt.sampled;
    uint64_t keys = uint64_t{1} << c.key_bits();
    p.num.assign(keys, 0);
    p.den = opt.sampled ? opt.sample_inputs : (uint64_t{1} << c.block_bits());

    auto work = [&](uint64_t k) {
        ExpandedKey ek = c.expand(k);
        if (!opt.sampled) {
            p.num[k] = count_matches(c, ek, t, opt.direction, a, b);
            return;
        }
        Rng rng(derive_seed(opt.seed, "profile-sampled", k));
        uint64_t hits = 0;
        for (uint64_t s = 0; s < opt.sample_inputs; ++s) {
            uint64_t x = rng.bits(c.block_bits());
            if (b.matches(c.apply(x ^ a, ek, t, opt.direction) ^ c.apply(x, ek, t, opt.direction))) ++hits;
        }
        p.num[k] = hits;
    };

    int workers = std::max(1, opt.workers);
    if (workers == 1) {
        for (uint64_t k = 0; k < keys; ++k) work(k);
    } else {
        std::atomic<uint64_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (uint64_t k = next++; k < keys; k = next++) work(k);
            });
        for (auto& th : pool) th.join();
    }
    return p;
}

Rational key_fraction_above(const Cipher& c, int t, uint64_t a, const TruncatedDifference& b, double sigma,
                            Direction dir) {
    ProfileOptions opt;
    opt.direction = dir;
    return key_profile(c, t, a, b, opt).fraction_above(sigma);
}

std::vector<uint64_t> autocorrelation_counts(const std::vector<uint8_t>& table, int N) {
    if (N < 0 || N > 16) throw ResourceError("definitional autocorrelation limited to N <= 16");
    if (table.size() != (size_t{1} << N)) throw std::invalid_argument("truth table length must be 2^N");
    std::vector<uint64_t> zero(table.size(), 0);
    for (size_t dx = 0; dx < table.size(); ++dx) {
        uint64_t c = 0;
        for (size_t x = 0; x < table.size(); ++x) c += (table[x ^ dx] == table[x]);
        zero[dx] = c;
    }
    return zero;
}

CompleteDifferentials complete_differentials(const std::vector<uint8_t>& table, int N) {
    std::vector<uint64_t> zero = autocorrelation_counts(table, N);
    CompleteDifferentials out;
    for (size_t dx = 0; dx < table.size(); ++dx) {
        if (zero[dx] == table.size()) out.d0.push_back(dx);
        else if (zero[dx] == 0) out.d1.push_back(dx);
    }
    return out;
}

GammaResult gamma(const std::vector<uint8_t>& table, int N) {
    std::vector<uint64_t> zero = autocorrelation_counts(table, N);
    uint64_t size = table.size();
    GammaResult g;
    g.all_complete = true;
    uint64_t best = 0;
    for (uint64_t dx = 0; dx < size; ++dx) {
        if (zero[dx] == size || zero[dx] == 0) continue;
        g.all_complete = false;
        uint64_t c0 = zero[dx], c1 = size - zero[dx];
        if (c0 > best) {
            best = c0;
            g.dx = dx;
            g.i = 0;
        }
        if (c1 > best) {
            best = c1;
            g.dx = dx;
            g.i = 1;
        }
    }
    g.gamma = {best, size};
    if (!g.all_complete && best >= size) throw std::logic_error("gamma reached 1 on a non-complete differential");
    return g;
}

ComplexityReport complexity_report(int n, int m, double sigma, double tau, int r, double enc_gates) {
    if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("complexity report needs sigma in (0, 1)");
    if (!(tau >= 1)) throw std::invalid_argument("complexity report needs tau >= 1");
    if (n < 1 || m < 0 || r < 1) throw std::invalid_argument("complexity report needs n >= 1, m >= 0, r >= 1");
    ComplexityReport c;
    c.n = n;
    c.m = m;
    c.r = r;
    c.sigma = sigma;
    c.tau = tau;
    c.enc_gates = enc_gates;
    long double s = 1.0L - sigma;
    long double q = static_cast<long double>(tau) * tau * n * n * n / (2.0L * s * s);
    c.q_exact = static_cast<double>(q);
    c.q = sample_budget(n, sigma, tau);
    long double nn = n;
    c.alg2_gates = static_cast<double>(q * (2 * nn * nn + (2.0L * m + 1) * nn + enc_gates));
    c.alg3_gates = static_cast<double>(r * q * (4 * nn * nn + (4.0L * m + 2) * nn + enc_gates));
    c.classical_cost = static_cast<double>(2 * q * nn * nn * nn);
    c.qubits = n + m + 1;
    c.pairs = 40.0 / sigma;
    return c;
}

nlohmann::json to_json(const ComplexityReport& c) {
    return {{"n", c.n},
            {"m", c.m},
            {"r", c.r},
            {"sigma", c.sigma},
            {"tau", c.tau},
            {"enc_gates", c.enc_gates},
            {"q_exact", c.q_exact},
            {"q", c.q},
            {"alg2_gates", c.alg2_gates},
            {"alg3_gates", c.alg3_gates},
            {"classical_cost", c.classical_cost},
            {"qubits", c.qubits},
            {"pairs", c.pairs}};
}

}  // namespace qtrunc
