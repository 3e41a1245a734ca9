// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qtrunc/attack.hpp"
#include "qtrunc/bitword.hpp"
#include "qtrunc/boomerang.hpp"
#include "qtrunc/bv.hpp"
#include "qtrunc/commands.hpp"
#include "qtrunc/oracle.hpp"
#include "qtrunc/walsh.hpp"

using namespace qtrunc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<uint8_t> random_table(int N, Rng& rng) {
    std::vector<uint8_t> t(size_t{1} << N);
    for (auto& b : t) b = static_cast<uint8_t>(rng.bits(1));
    return t;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Outcome walsh_exactness() {
    Rng gen(derive_seed(1, "acc-walsh"));
    int mismatches = 0, parseval = 0;
    for (int i = 0; i < 100; ++i) {
        int N = 1 + i % 12;
        auto t = random_table(N, gen);
        auto fast = walsh_spectrum(t, N);
        if (fast.coeffs != walsh_spectrum_naive(t, N).coeffs) ++mismatches;
        if (!fast.parseval_holds()) ++parseval;
    }
    return {mismatches == 0 && parseval == 0,
            fmt("100 functions N<=12: %d spectrum mismatches, %d Parseval failures", mismatches, parseval)};
}

Outcome bv_fidelity() {
    Rng gen(derive_seed(1, "acc-bv"));
    int passes = 0;
    uint64_t off_support = 0;
    double min_p = 1;
    for (int f = 0; f < 20; ++f) {
        auto spec = walsh_spectrum(random_table(4, gen), 4);
        BvSampler s(spec);
        Rng rng(derive_seed(1, "acc-bv-draws", f));
        std::map<uint64_t, uint64_t> counts;
        const uint64_t draws = 100000;
        for (uint64_t u : s.sample(rng, draws)) {
            if (spec.coeffs[u] == 0) ++off_support;
            ++counts[u];
        }
        double chi = 0;
        for (size_t i = 0; i < s.support().size(); ++i) {
            double e = draws * static_cast<double>(s.weight(i)) / static_cast<double>(s.total());
            double o = static_cast<double>(counts[s.support()[i]]);
            chi += (o - e) * (o - e) / e;
        }
        int dof = static_cast<int>(s.support().size()) - 1;
        double p = dof > 0 ? boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), chi)) : 1.0;
        min_p = std::min(min_p, p);
        if (p > 1e-3) ++passes;
    }
    return {passes >= 19 && off_support == 0,
            fmt("chi-square p > 0.001 in %d/20 (min p %.4f), %llu draws off the support", passes, min_p,
                static_cast<unsigned long long>(off_support))};
}

Outcome alg1_soundness() {
    Rng gen(derive_seed(1, "acc-sound"));
    uint64_t violations = 0, checked = 0;
    for (int i = 0; i < 200; ++i) {
        int N = 1 + i % 10;
        auto f = random_table(N, gen);
        if (i % 2 == 0) {
            // add a linear term on the top bits so D_f is nontrivial
            uint64_t s = gen.bits(N);
            int low = N / 2;
            for (size_t x = 0; x < f.size(); ++x) f[x] = static_cast<uint8_t>(parity(x & s) ^ f[x & low_mask(low)]);
        }
        auto d = complete_differentials(f, N);
        Rng rng(derive_seed(1, "acc-sound-run", i));
        auto r = algorithm1(f, N, 1 + gen.below(2 * N), rng);
        for (uint64_t dx : d.d0) {
            ++checked;
            violations += !member(r.z0, BitWord(dx, N));
        }
        for (uint64_t dx : d.d1) {
            ++checked;
            violations += !member(r.z1, BitWord(dx, N));
        }
    }
    return {violations == 0, fmt("200 functions N<=10: %llu complete differentials checked, %llu missing from Z",
                                 static_cast<unsigned long long>(checked), static_cast<unsigned long long>(violations))};
}

Outcome alg1_false_positives() {
    const int N = 8;
    Rng gen(derive_seed(1, "acc-fp"));
    std::vector<std::vector<uint8_t>> fns;
    Rational worst{0, 1};
    while (fns.size() < 200) {
        auto f = random_table(N, gen);
        auto d = complete_differentials(f, N);
        if (d.d0.size() != 1 || !d.d1.empty()) continue;
        auto g = gamma(f, N);
        if (g.gamma.value() > 0.9) continue;
        if (g.gamma.value() > worst.value()) worst = g.gamma;
        fns.push_back(std::move(f));
    }
    double a0 = worst.value();
    double bound = std::pow(a0, N);
    uint64_t hits = 0, events = 0, non_no = 0;
    for (size_t i = 0; i < fns.size(); ++i) {
        Rng rng(derive_seed(1, "acc-fp-run", i));
        auto r = algorithm1(fns[i], N, N, rng);
        non_no += r.found;
        // every nonzero dx is outside D_f here, for both i
        events += 2 * ((uint64_t{1} << N) - 1);
        for (const auto* z : {&r.z0, &r.z1})
            for (const auto& v : enumerate(*z).members) hits += !v.is_zero();
    }
    boost::math::binomial_distribution<double> bin(static_cast<double>(events), bound);
    double p = hits == 0 ? 1.0 : boost::math::cdf(boost::math::complement(bin, static_cast<double>(hits - 1)));
    return {p > 1e-3,
            fmt("a0 = max gamma = %.4f, bound a0^N = %.3e; Pr[dx in Z^i] observed %llu/%llu = %.3e (upper-tail p %.3g); "
                "runs not answering No %llu/200",
                a0, bound, static_cast<unsigned long long>(hits), static_cast<unsigned long long>(events),
                static_cast<double>(hits) / events, p, static_cast<unsigned long long>(non_no))};
}

struct Emitted {
    std::vector<TruncatedDifferential> tds;
};

RunConfig planted_search(uint64_t seed) {
    RunConfig c;
    c.cipher = {{"name", "PLANTED"}};
    c.t = 2;
    c.sigma = 0.9;
    c.tau = 4;
    c.seed = seed;
    c.workers = 4;
    return c;
}

Outcome truncated_key_fraction(Emitted& em, std::vector<std::string>& reports) {
    const int seeds = 20;
    int emitted = 0, good = 0;
    double worst = 1;
    auto cipher = make_planted(3, 2, true);
    for (int s = 1; s <= seeds; ++s) {
        auto out = run_find_truncated(planted_search(s));
        reports.push_back(dump_report(out.report));
        if (out.exit_code != kExitOk) continue;
        ++emitted;
        auto td = truncated_from_json(out.report["result"]["differential"]);
        em.tds.push_back(td);
        double frac = key_fraction_above(*cipher, td.t, td.a, td.b, td.sigma).value();
        worst = std::min(worst, frac);
        if (frac > 1 - 1 / td.tau) ++good;
    }
    return {good == emitted && emitted >= 0.95 * seeds,
            fmt("PLANTED t=2 sigma=0.9 tau=4 q=%llu: %d/%d seeds emitted, %d/%d with key fraction > 0.75 (min %.4f)",
                static_cast<unsigned long long>(sample_budget(8, 0.9, 4)), emitted, seeds, good, emitted, worst)};
}

TruncatedDifferential recovery_td() {
    TruncatedDifferential td;
    td.a = 0x20;
    td.b = TruncatedDifference::parse("******1*");
    td.d = 1;
    td.sigma = 0.9;
    td.tau = 4;
    td.t = 2;
    return td;
}

Outcome sn_gate_check(const Emitted& em) {
    int bad = 0;
    for (const auto& td : em.tds)
        if (!(std::ldexp(td.sigma, td.d) > 1.0) || td.b.d() != td.d) ++bad;
    auto cipher = make_planted(3, 2, true);
    TruncatedDifferential td = recovery_td();
    uint64_t pairs = static_cast<uint64_t>(std::ceil(40 / td.sigma));
    auto e = recovery_experiment(*cipher, td, pairs, 200, derive_seed(1, "acc-sn"));
    double dev = std::fabs(e.wrong_mean - e.expected_wrong);
    bool within = dev <= 3 * e.wrong_se;
    return {bad == 0 && !em.tds.empty() && within,
            fmt("%zu emitted differentials, %d violate 2^d sigma > 1; wrong-key mean %.3f vs pairs*2^-d = %.3f "
                "(%.2f SE)",
                em.tds.size(), bad, e.wrong_mean, e.expected_wrong, e.wrong_se > 0 ? dev / e.wrong_se : 0.0)};
}

Outcome key_recovery(std::vector<std::string>& reports) {
    auto cipher = make_planted(3, 2, true);
    TruncatedDifferential td = recovery_td();
    uint64_t pairs = static_cast<uint64_t>(std::ceil(40 / td.sigma));
    auto e = recovery_experiment(*cipher, td, pairs, 100, derive_seed(1, "acc-recovery"));
    reports.push_back(dump_report(to_json(e)));
    return {e.first >= 90, fmt("PLANTED, a=0x20 b=%s, %llu pairs per trial: true final-round key ranked first in "
                               "%llu/100 trials",
                               td.b.str().c_str(), static_cast<unsigned long long>(pairs),
                               static_cast<unsigned long long>(e.first))};
}

Outcome boomerang(Emitted& em, std::vector<std::string>& reports) {
    RunConfig c;
    c.cipher = {{"name", "PLANTED-BOOMERANG"}};
    c.sigma = 0.9;
    c.tau = 4;
    c.seed = 3;
    c.workers = 4;
    auto found = run_find_boomerang(c);
    reports.push_back(dump_report(found.report));
    if (found.exit_code != kExitOk) return {false, "no boomerang distinguisher found on PLANTED-BOOMERANG"};
    auto dist = boomerang_from_json(found.report["result"]["distinguisher"]);
    em.tds.push_back(dist.fwd);
    em.tds.push_back(dist.bwd);

    RunConfig ac;
    ac.seed = 11;
    ac.quadruple_trials = 100000;
    ac.per_key_trials = 10000;
    auto out = run_attack(ac, found.report);
    reports.push_back(dump_report(out.report));
    const auto& pk = out.report["per_key"];
    double frac = pk["fraction"];
    double required = pk["required"];
    const auto& ref = out.report["distinguish"]["reference_rates"];
    double z = out.report["distinguish"]["baseline_z"];
    double raw = ref["rate"];
    double nd = ref["nondegenerate_rate"];
    bool pass = frac >= required && std::fabs(z) <= 3;
    return {pass, fmt("split t1=%d t2=%d; keys with rate >= sigma^4: %.4f (need %.2f); RANDOMPERM rate %.6f, "
                      "non-degenerate %.6f vs 2^-8 = %.6f (%.2f SE)",
                      dist.t1, dist.t2, frac, required, raw, nd, std::ldexp(1.0, -8), z)};
}

Outcome complexity() {
    struct Spot {
        int n, m, r;
        double sigma, tau, enc;
    };
    int bad = 0, spots = 0;
    for (Spot s : {Spot{8, 8, 4, 0.75, 4, 1000}, Spot{4, 4, 2, 0.5, 1, 0}, Spot{16, 32, 8, 0.875, 2, 5000},
                   Spot{8, 16, 6, 0.9375, 4, 12345}}) {
        ++spots;
        auto c = complexity_report(s.n, s.m, s.sigma, s.tau, s.r, s.enc);
        // integer evaluation: q = tau^2 n^3 / (2 (1 - sigma)^2) with dyadic sigma, tau
        long double q = s.tau * s.tau * s.n * s.n * s.n / (2 * (1 - s.sigma) * (1 - s.sigma));
        long double a2 = q * (2.0L * s.n * s.n + (2.0L * s.m + 1) * s.n + s.enc);
        long double a3 = s.r * q * (4.0L * s.n * s.n + (4.0L * s.m + 2) * s.n + s.enc);
        long double cl = 2 * q * s.n * s.n * s.n;
        if (c.alg2_gates != static_cast<double>(a2) || c.alg3_gates != static_cast<double>(a3) ||
            c.classical_cost != static_cast<double>(cl) || c.qubits != s.n + s.m + 1 ||
            c.pairs != 40.0 / s.sigma)
            ++bad;
    }
    auto ref = complexity_report(8, 8, 0.75, 4, 4, 1000);
    bool headline = ref.alg2_gates == 65536.0 * 1264 && ref.qubits == 17 && ref.q == 65536;
    return {bad == 0 && headline, fmt("%d spot inputs, %d mismatches; n=m=8: q=%llu, Alg-2 gates=%.0f (65536*1264), "
                                      "qubits=%d",
                                      spots, bad, static_cast<unsigned long long>(ref.q), ref.alg2_gates, ref.qubits)};
}

Outcome determinism(const std::vector<std::string>& first, const std::function<void(std::vector<std::string>&)>& again) {
    std::vector<std::string> second;
    again(second);
    size_t same = 0;
    for (size_t i = 0; i < std::min(first.size(), second.size()); ++i) same += first[i] == second[i];
    return {first.size() == second.size() && same == first.size(),
            fmt("%zu/%zu reports byte-identical on rerun", same, first.size())};
}

}  // namespace

int main() {
    struct Line {
        Outcome o;
        const char* name;
        double secs;
        bool in_time;
    };
    std::map<int, Line> lines;
    auto run = [&](int id, const char* name, double limit_s, const std::function<Outcome()>& fn) {
        auto start = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        lines[id] = {o, name, secs, limit_s <= 0 || secs < limit_s};
    };

    Emitted em;
    std::vector<std::string> reports;
    run(1, "Walsh exactness", 10, walsh_exactness);
    run(2, "BV distribution fidelity", 30, bv_fidelity);
    run(3, "Algorithm 1 soundness", 0, alg1_soundness);
    run(4, "Algorithm 1 false positives", 0, alg1_false_positives);
    run(5, "truncated differential key fraction", 300, [&] { return truncated_key_fraction(em, reports); });
    run(7, "key recovery", 120, [&] { return key_recovery(reports); });
    run(8, "boomerang rates", 600, [&] { return boomerang(em, reports); });
    run(6, "S/N gate", 0, [&] { return sn_gate_check(em); });
    run(9, "complexity report", 0, complexity);
    run(10, "determinism", 0, [&] {
        return determinism(reports, [](std::vector<std::string>& out) {
            Emitted scratch;
            truncated_key_fraction(scratch, out);
            key_recovery(out);
            boomerang(scratch, out);
        });
    });

    int failures = 0;
    for (const auto& [id, l] : lines) {
        bool pass = l.o.pass && l.in_time;
        failures += !pass;
        std::printf("%s %d: %s: %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", id, l.name, l.o.detail.c_str(), l.secs,
                    l.in_time ? "" : ", over the time limit");
    }
    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
