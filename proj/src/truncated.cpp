#include "qtrunc/truncated.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "qtrunc/rng.hpp"
#include "qtrunc/walsh.hpp"

namespace qtrunc {

TruncatedDifference::TruncatedDifference(int width, uint64_t mask, uint64_t value)
    : width_(width), mask_(mask), value_(value & mask) {
    if (width < 1 || width > 64) throw std::invalid_argument("truncated difference width must be in 1..64");
    if (mask & ~low_mask(width)) throw std::invalid_argument("truncated difference mask wider than width");
}

TruncatedDifference TruncatedDifference::parse(const std::string& trits) {
    int n = static_cast<int>(trits.size());
    if (n < 1 || n > 64) throw std::invalid_argument("truncated difference must have 1..64 trits");
    uint64_t mask = 0, value = 0;
    for (int j = 1; j <= n; ++j) {
        char c = trits[j - 1];
        uint64_t bit = uint64_t{1} << (n - j);
        if (c == '*') continue;
        if (c != '0' && c != '1') throw std::invalid_argument("trit must be 0, 1 or *: '" + trits + "'");
        mask |= bit;
        if (c == '1') value |= bit;
    }
    return {n, mask, value};
}

int TruncatedDifference::d() const { return std::popcount(mask_); }

std::string TruncatedDifference::str() const {
    std::string s;
    for (int j = 1; j <= width_; ++j) {
        uint64_t bit = uint64_t{1} << (width_ - j);
        s.push_back(!(mask_ & bit) ? '*' : ((value_ & bit) ? '1' : '0'));
    }
    return s;
}

SNParams SNParams::counting(double L, double p, int d) { return {L, p, L / std::ldexp(1.0, d), 1.0}; }

double signal_to_noise(const SNParams& s) {
    if (s.alpha * s.lambda == 0) throw std::domain_error("signal_to_noise: alpha * lambda is zero");
    return s.L * s.p / (s.alpha * s.lambda);
}

bool sn_gate(int d, double sigma) { return std::ldexp(sigma, d) > 1.0; }

uint64_t sample_budget(int n, double sigma, double tau) {
    if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("sigma must lie in (0, 1)");
    if (!(tau >= 1)) throw std::invalid_argument("tau must be >= 1");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    long double s = 1.0L - static_cast<long double>(sigma);
    long double q = static_cast<long double>(tau) * tau * n * n * n / (2.0L * s * s);
    if (q > 1.8e19L) throw std::overflow_error("sample budget does not fit in 64 bits");
    long double r = std::round(q);
    if (std::fabs(q - r) <= 1e-9L * q) return static_cast<uint64_t>(r);
    return static_cast<uint64_t>(std::ceil(q));
}

const char* to_string(ScanMode m) { return m == ScanMode::Ascending ? "ascending" : "prefer-max-d"; }

ScanMode parse_scan_mode(const std::string& s) {
    if (s == "ascending") return ScanMode::Ascending;
    if (s == "prefer-max-d" || s == "descending") return ScanMode::PreferMaxD;
    throw std::invalid_argument("mode must be 'ascending' or 'prefer-max-d', got '" + s + "'");
}

namespace {

ComponentRecord run_component(TruthTableCache& cache, int j, int t, Direction dir, uint64_t q, uint64_t seed) {
    const Cipher& c = cache.cipher();
    int n = c.block_bits(), m = c.key_bits();
    WalshSpectrum spec = walsh_spectrum(cache.component(j, t, dir), n + m);
    BvSampler sampler(spec);
    Rng rng(derive_seed(seed, "alg2-component", static_cast<uint64_t>(j), static_cast<uint64_t>(dir)));

    const auto& support = sampler.support();
    std::vector<uint64_t> counts(support.size(), 0);
    for (uint64_t l = 0; l < q; ++l) ++counts[sampler.sample_index(rng)];

    ComponentRecord rec;
    rec.j = j;
    rec.samples = q;
    IncrementalSolver s0(n, 0), s1(n, 1);
    for (size_t i = 0; i < support.size(); ++i) {
        if (!counts[i]) continue;
        rec.w.emplace_back(support[i], counts[i]);
        uint64_t head = static_cast<uint64_t>(support[i]) >> m;
        s0.add(head);
        s1.add(head);
    }
    rec.rank = s0.rank();
    rec.z.zero = s0.solution();
    rec.z.one = s1.solution();
    rec.degenerate = rec.z.zero.is_full_space();
    return rec;
}

}  // namespace

std::vector<CommonSet> common_subscripts(const std::vector<ComponentRecord>& comps, uint64_t cap, bool* truncated) {
    std::map<uint64_t, CommonSet> by_a;
    bool trunc = false;
    for (const auto& rec : comps) {
        if (rec.degenerate) continue;
        for (int half = 0; half < 2; ++half) {
            const AffineSolutionSet& z = half ? rec.z.one : rec.z.zero;
            Enumeration e = enumerate(z, cap);
            trunc = trunc || e.truncated;
            for (const auto& w : e.members) {
                if (w.is_zero()) continue;
                CommonSet& cs = by_a[w.bits()];
                cs.a = w.bits();
                cs.subscripts.push_back(rec.j);
                cs.bits.push_back(half);
            }
        }
    }
    if (truncated) *truncated = trunc;
    std::vector<CommonSet> out;
    for (auto& [a, cs] : by_a) {
        std::vector<size_t> order(cs.subscripts.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return cs.subscripts[x] < cs.subscripts[y]; });
        CommonSet sorted;
        sorted.a = a;
        for (size_t i : order) {
            sorted.subscripts.push_back(cs.subscripts[i]);
            sorted.bits.push_back(cs.bits[i]);
        }
        out.push_back(std::move(sorted));
    }
    return out;
}

Alg2Result algorithm2(TruthTableCache& cache, int t, double sigma, double tau, uint64_t seed,
                      const Alg2Options& opt) {
    const Cipher& c = cache.cipher();
    check_joint_size(c);
    if (t < 1 || t > c.rounds()) throw std::out_of_range("round count t out of range");
    int n = c.block_bits();
    uint64_t q = opt.q_override ? *opt.q_override : sample_budget(n, sigma, tau);
    if (opt.q_override) {
        if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("sigma must lie in (0, 1)");
        if (q < 1) throw std::invalid_argument("q override must be >= 1");
    }

    Alg2Result res;
    res.components.resize(n);
    int workers = std::max(1, std::min(opt.workers, n));
    if (workers == 1) {
        for (int j = 1; j <= n; ++j) res.components[j - 1] = run_component(cache, j, t, opt.direction, q, seed);
    } else {
        std::atomic<int> next{1};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int j = next++; j <= n; j = next++)
                        res.components[j - 1] = run_component(cache, j, t, opt.direction, q, seed);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<CommonSet> common = common_subscripts(res.components, opt.enumeration_cap, &res.enumeration_truncated);
    for (const auto& cs : common) res.max_common = std::max(res.max_common, static_cast<int>(cs.subscripts.size()));

    TruncatedDifferential& td = res.td;
    td.sigma = sigma;
    td.tau = tau;
    td.q = q;
    td.q_overridden = opt.q_override.has_value();
    td.cipher = c.name();
    td.t = t;
    td.direction = opt.direction;
    td.mode = opt.mode;
    td.seed = seed;

    int d = 0;
    if (opt.mode == ScanMode::Ascending) {
        for (int k = 1; k <= n && !d; ++k)
            if (sn_gate(k, sigma) && res.max_common >= k) d = k;
    } else {
        for (int k = n; k >= 1 && !d; --k)
            if (sn_gate(k, sigma) && res.max_common >= k) d = k;
    }
    if (!d) return res;

    Rng rng(derive_seed(seed, "alg2-select"));
    std::vector<const CommonSet*> best;
    for (const auto& cs : common)
        if (static_cast<int>(cs.subscripts.size()) == res.max_common) best.push_back(&cs);
    const CommonSet& pick = *best[rng.below(best.size())];

    std::vector<size_t> idx(pick.subscripts.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (int i = 0; i < d; ++i) {
        size_t k = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[k]);
    }
    idx.resize(d);
    std::sort(idx.begin(), idx.end());

    uint64_t mask = 0, value = 0;
    for (size_t i : idx) {
        int j = pick.subscripts[i];
        int bit = pick.bits[i];
        td.subscripts.push_back(j);
        td.bits.push_back(bit);
        mask |= uint64_t{1} << (n - j);
        if (bit) value |= uint64_t{1} << (n - j);
    }
    td.a = pick.a;
    td.b = TruncatedDifference(n, mask, value);
    td.d = d;
    res.found = true;
    return res;
}

nlohmann::json to_json(const TruncatedDifferential& td) {
    int n = td.b.width();
    return {{"cipher", td.cipher},
            {"t", td.t},
            {"direction", to_string(td.direction)},
            {"sigma", td.sigma},
            {"tau", td.tau},
            {"q", td.q},
            {"q_overridden", td.q_overridden},
            {"mode", to_string(td.mode)},
            {"a", hex_word(td.a, n)},
            {"b", td.b.str()},
            {"d", td.d},
            {"subscripts", td.subscripts},
            {"seed", td.seed}};
}

TruncatedDifferential truncated_from_json(const nlohmann::json& j) {
    TruncatedDifferential td;
    td.cipher = j.value("cipher", std::string());
    td.t = j.at("t").get<int>();
    td.direction = parse_direction(j.value("direction", std::string("forward")));
    td.sigma = j.at("sigma").get<double>();
    td.tau = j.at("tau").get<double>();
    td.q = j.value("q", uint64_t{0});
    td.q_overridden = j.value("q_overridden", false);
    td.mode = parse_scan_mode(j.value("mode", std::string("ascending")));
    td.a = parse_word(j.at("a").get<std::string>());
    td.b = TruncatedDifference::parse(j.at("b").get<std::string>());
    td.d = td.b.d();
    if (j.contains("subscripts")) td.subscripts = j.at("subscripts").get<std::vector<int>>();
    td.seed = j.value("seed", uint64_t{0});
    return td;
}

nlohmann::json to_json(const Alg2Result& r) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : r.components)
        comps.push_back({{"j", c.j},
                         {"rank", c.rank},
                         {"degenerate", c.degenerate},
                         {"z0_dim", c.z.zero.empty ? -1 : c.z.zero.dimension()},
                         {"z1_dim", c.z.one.empty ? -1 : c.z.one.dimension()},
                         {"distinct_samples", c.w.size()}});
    nlohmann::json j = {{"found", r.found}, {"components", comps}, {"max_common", r.max_common},
                        {"enumeration_truncated", r.enumeration_truncated}};
    if (r.found) j["differential"] = to_json(r.td);
    return j;
}

}  // namespace qtrunc
