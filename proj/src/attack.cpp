#include "qtrunc/attack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "qtrunc/bitword.hpp"

namespace qtrunc {

uint64_t involved_key_mask(const Cipher& c, const TruncatedDifference& b) {
    int n = c.block_bits();
    int kb = c.final_key_bits();
    if (kb == 0) return 0;
    uint64_t mask = 0;
    auto check = [&](uint64_t y, uint64_t delta) {
        uint64_t base = (c.strip_final_round(y, 0) ^ c.strip_final_round(y ^ delta, 0)) & b.mask();
        for (int i = 0; i < kb; ++i) {
            uint64_t e = uint64_t{1} << i;
            if (mask & e) continue;
            uint64_t f = (c.strip_final_round(y, e) ^ c.strip_final_round(y ^ delta, e)) & b.mask();
            if (f != base) mask |= e;
        }
    };
    uint64_t full = low_mask(kb);
    if (n <= 8) {
        for (uint64_t y = 0; y < (uint64_t{1} << n) && mask != full; ++y)
            for (uint64_t delta = 1; delta < (uint64_t{1} << n) && mask != full; ++delta) check(y, delta);
    } else {
        Rng rng(derive_seed(0, "involved-mask"));
        for (int s = 0; s < (1 << 16) && mask != full; ++s) check(rng.bits(n), rng.bits(n) | 1);
    }
    return mask;
}

namespace {

uint64_t deposit(uint64_t v, uint64_t mask) {
    uint64_t out = 0;
    for (int i = 0; mask; ++i) {
        int pos = std::countr_zero(mask);
        mask &= mask - 1;
        if ((v >> i) & 1) out |= uint64_t{1} << pos;
    }
    return out;
}

}  // namespace

RecoveryResult recover_suffix_key(const Cipher& c, const TruncatedDifferential& td, uint64_t pairs, uint64_t true_key,
                                  Rng& rng) {
    if (pairs == 0) throw std::invalid_argument("recover_suffix_key needs at least one pair");
    if (td.direction != Direction::Forward) throw std::invalid_argument("key recovery uses a forward differential");
    if (c.rounds() - td.t != 1) throw std::invalid_argument("key recovery supports a single-round suffix (r - t = 1)");
    if (td.b.width() != c.block_bits()) throw std::invalid_argument("truncated difference width mismatch");
    if (involved_key_mask(c, TruncatedDifference::exact(0, c.block_bits())) == 0)
        throw std::invalid_argument(c.name() + ": the final-round key has no influence on differences");

    RecoveryResult res;
    res.pairs = pairs;
    res.involved_mask = involved_key_mask(c, td.b);
    uint64_t space_mask = res.involved_mask ? res.involved_mask : low_mask(c.final_key_bits());
    int bits = std::popcount(space_mask);
    if (bits > 24) throw std::invalid_argument("candidate subkey space too large");

    ExpandedKey ek = c.expand(true_key);
    res.true_candidate = c.final_round_key(ek) & space_mask;

    int n = c.block_bits();
    std::vector<std::pair<uint64_t, uint64_t>> cts;
    cts.reserve(pairs);
    for (uint64_t p = 0; p < pairs; ++p) {
        uint64_t P = rng.bits(n);
        cts.emplace_back(c.encrypt(P, ek), c.encrypt(P ^ td.a, ek));
    }

    uint64_t count = uint64_t{1} << bits;
    std::vector<Candidate> cands(count);
    for (uint64_t i = 0; i < count; ++i) {
        uint64_t key = deposit(i, space_mask);
        uint64_t hits = 0;
        for (const auto& [C, C2] : cts)
            if (td.b.matches(c.strip_final_round(C, key) ^ c.strip_final_round(C2, key))) ++hits;
        cands[i] = {key, hits};
    }
    shuffle(cands, rng);
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.count > y.count; });

    long double wrong_sum = 0;
    for (size_t i = 0; i < cands.size(); ++i) {
        if (cands[i].key == res.true_candidate) {
            res.true_rank = static_cast<int>(i + 1);
            res.true_count = cands[i].count;
        } else {
            wrong_sum += cands[i].count;
        }
    }
    res.wrong_mean = count > 1 ? static_cast<double>(wrong_sum / (count - 1)) : 0;
    res.ranked = std::move(cands);
    return res;
}

RecoveryExperiment recovery_experiment(const Cipher& c, const TruncatedDifferential& td, uint64_t pairs,
                                       uint64_t trials, uint64_t seed) {
    RecoveryExperiment e;
    e.trials = trials;
    e.pairs = pairs;
    e.expected_wrong = std::ldexp(static_cast<double>(pairs), -td.b.d());
    std::vector<double> wrong;
    for (uint64_t i = 0; i < trials; ++i) {
        Rng rng(derive_seed(seed, "recovery-trial", i));
        uint64_t key = rng.bits(c.key_bits());
        RecoveryResult r = recover_suffix_key(c, td, pairs, key, rng);
        e.ranks.push_back(r.true_rank);
        if (r.true_rank == 1) ++e.first;
        wrong.push_back(r.wrong_mean);
    }
    if (!wrong.empty()) {
        double s = 0;
        for (double w : wrong) s += w;
        e.wrong_mean = s / wrong.size();
        double v = 0;
        for (double w : wrong) v += (w - e.wrong_mean) * (w - e.wrong_mean);
        if (wrong.size() > 1) e.wrong_se = std::sqrt(v / (wrong.size() - 1) / wrong.size());
    }
    return e;
}

const char* to_string(ShiftMode m) {
    switch (m) {
        case ShiftMode::InverseInput: return "inverse-input";
        case ShiftMode::OutputZero: return "output-zero";
        case ShiftMode::OutputRandom: return "output-random";
    }
    return "?";
}

ShiftMode parse_shift_mode(const std::string& s) {
    if (s == "inverse-input") return ShiftMode::InverseInput;
    if (s == "output-zero") return ShiftMode::OutputZero;
    if (s == "output-random") return ShiftMode::OutputRandom;
    throw std::invalid_argument("shift mode must be inverse-input, output-zero or output-random");
}

QuadrupleOutcome generate_quadruple(const Cipher& c, const ExpandedKey& ek, const BoomerangDistinguisher& dist,
                                    ShiftMode mode, Rng& rng) {
    int n = c.block_bits();
    uint64_t shift = 0;
    switch (mode) {
        case ShiftMode::InverseInput: shift = dist.bwd.a; break;
        case ShiftMode::OutputZero: shift = dist.bwd.b.concrete(); break;
        case ShiftMode::OutputRandom:
            shift = dist.bwd.b.value() | (rng.bits(n) & ~dist.bwd.b.mask() & low_mask(n));
            break;
    }
    QuadrupleOutcome out;
    Quadruple& q = out.quad;
    q.P = rng.bits(n);
    q.P2 = q.P ^ dist.fwd.a;
    q.C = c.encrypt(q.P, ek);
    q.C2 = c.encrypt(q.P2, ek);
    q.D = q.C ^ shift;
    q.D2 = q.C2 ^ shift;
    q.Q = c.decrypt(q.D, ek);
    q.Q2 = c.decrypt(q.D2, ek);
    out.right = TruncatedDifference::exact(dist.fwd.a, n).matches(q.Q ^ q.Q2);
    out.degenerate = q.D == q.C2;
    return out;
}

namespace {

void record(RateEstimate& est, const QuadrupleOutcome& o) {
    ++est.trials;
    if (o.right) ++est.right;
    if (o.degenerate) {
        ++est.degenerate;
        if (o.right) ++est.degenerate_right;
    }
}

}  // namespace

RateEstimate right_rate_for_key(const Cipher& c, uint64_t key, const BoomerangDistinguisher& dist, uint64_t trials,
                                ShiftMode mode, Rng& rng) {
    RateEstimate est;
    ExpandedKey ek = c.expand(key);
    for (uint64_t i = 0; i < trials; ++i) record(est, generate_quadruple(c, ek, dist, mode, rng));
    return est;
}

RateEstimate right_rate_random_keys(const Cipher& c, const BoomerangDistinguisher& dist, uint64_t trials,
                                    ShiftMode mode, Rng& rng, std::string* csv_log) {
    RateEstimate est;
    std::ostringstream log;
    int n = c.block_bits();
    for (uint64_t i = 0; i < trials; ++i) {
        uint64_t key = rng.bits(c.key_bits());
        ExpandedKey ek = c.expand(key);
        QuadrupleOutcome o = generate_quadruple(c, ek, dist, mode, rng);
        record(est, o);
        if (csv_log)
            log << c.name() << ',' << i << ',' << hex_word(key, c.key_bits()) << ',' << hex_word(o.quad.P, n) << ','
                << hex_word(o.quad.P2, n) << ',' << hex_word(o.quad.Q, n) << ',' << hex_word(o.quad.Q2, n) << ','
                << o.right << ',' << o.degenerate << '\n';
    }
    if (csv_log) *csv_log += log.str();
    return est;
}

double two_proportion_z(uint64_t x1, uint64_t n1, uint64_t x2, uint64_t n2) {
    if (!n1 || !n2) return 0;
    double p1 = static_cast<double>(x1) / n1, p2 = static_cast<double>(x2) / n2;
    double p = static_cast<double>(x1 + x2) / (n1 + n2);
    double se = std::sqrt(p * (1 - p) * (1.0 / n1 + 1.0 / n2));
    if (se == 0) return p1 == p2 ? 0 : (p1 > p2 ? INFINITY : -INFINITY);
    return (p1 - p2) / se;
}

double normal_two_sided_critical(double alpha) {
    boost::math::normal_distribution<double> nd;
    return boost::math::quantile(boost::math::complement(nd, alpha / 2));
}

DistinguishReport boomerang_distinguish(const Cipher& a, const Cipher& b, const BoomerangDistinguisher& dist,
                                        uint64_t trials, uint64_t seed, ShiftMode mode, double significance,
                                        std::string* csv_log) {
    if (a.block_bits() != b.block_bits()) throw std::invalid_argument("targets must share a block size");
    DistinguishReport r;
    r.cipher_a = a.name();
    r.cipher_b = b.name();
    r.mode = mode;
    r.significance = significance;
    if (csv_log) *csv_log = "target,trial,key,P,P2,Q,Q2,right,degenerate\n";
    Rng ra(derive_seed(seed, "distinguish-a"));
    Rng rb(derive_seed(seed, "distinguish-b"));
    r.a = right_rate_random_keys(a, dist, trials, mode, ra, csv_log);
    r.b = right_rate_random_keys(b, dist, trials, mode, rb, csv_log);
    r.baseline_d = dist.fwd.b.width();
    r.baseline = std::ldexp(1.0, -r.baseline_d);
    r.z = two_proportion_z(r.a.right, r.a.trials, r.b.right, r.b.trials);
    r.z_critical = normal_two_sided_critical(significance);
    r.distinguished = std::fabs(r.z) > r.z_critical;
    uint64_t nd = r.b.nondegenerate_trials();
    if (nd) r.baseline_z = (r.b.nondegenerate_rate() - r.baseline) / std::sqrt(r.baseline * (1 - r.baseline) / nd);
    return r;
}

nlohmann::json to_json(const RecoveryResult& r) {
    nlohmann::json top = nlohmann::json::array();
    for (size_t i = 0; i < r.ranked.size() && i < 8; ++i)
        top.push_back({{"key", r.ranked[i].key}, {"count", r.ranked[i].count}});
    return {{"pairs", r.pairs},
            {"true_candidate", r.true_candidate},
            {"true_count", r.true_count},
            {"true_rank", r.true_rank},
            {"involved_mask", r.involved_mask},
            {"candidates", r.ranked.size()},
            {"wrong_mean", r.wrong_mean},
            {"top", top}};
}

nlohmann::json to_json(const RecoveryExperiment& r) {
    return {{"trials", r.trials},
            {"pairs", r.pairs},
            {"ranked_first", r.first},
            {"wrong_mean", r.wrong_mean},
            {"wrong_se", r.wrong_se},
            {"expected_wrong", r.expected_wrong},
            {"ranks", r.ranks}};
}

nlohmann::json to_json(const DistinguishReport& r) {
    auto rate = [](const RateEstimate& e) {
        return nlohmann::json{{"trials", e.trials},
                              {"right", e.right},
                              {"rate", e.rate()},
                              {"degenerate", e.degenerate},
                              {"nondegenerate_rate", e.nondegenerate_rate()}};
    };
    return {{"target", r.cipher_a},
            {"reference", r.cipher_b},
            {"target_rates", rate(r.a)},
            {"reference_rates", rate(r.b)},
            {"baseline", r.baseline},
            {"baseline_d", r.baseline_d},
            {"baseline_z", r.baseline_z},
            {"z", r.z},
            {"z_critical", r.z_critical},
            {"significance", r.significance},
            {"decision", r.distinguished ? "distinguished" : "not-distinguished"},
            {"shift_mode", to_string(r.mode)}};
}

}  // namespace qtrunc
