#include "qtrunc/commands.hpp"

#include <cmath>
#include <sstream>

#include "qtrunc/attack.hpp"
#include "qtrunc/bitword.hpp"
#include "qtrunc/boomerang.hpp"
#include "qtrunc/oracle.hpp"

namespace qtrunc {

CommandOutput run_find_truncated(const RunConfig& c) {
    c.validate();
    TruthTableCache cache(make_cipher(c.cipher));
    Alg2Options opt;
    opt.direction = c.direction;
    opt.mode = c.mode;
    opt.q_override = c.q_override;
    opt.workers = c.workers;
    Alg2Result r = algorithm2(cache, c.t, c.sigma, c.tau, c.seed, opt);
    CommandOutput out;
    out.report = report_envelope(c, "find-truncated");
    out.report["cipher"] = cache.cipher().describe();
    out.report["result"] = to_json(r);
    out.exit_code = r.found ? kExitOk : kExitNo;
    return out;
}

CommandOutput run_find_boomerang(const RunConfig& c) {
    c.validate();
    TruthTableCache cache(make_cipher(c.cipher));
    Alg3Options opt;
    opt.mode = c.mode;
    opt.q_override = c.q_override;
    opt.workers = c.workers;
    Alg3Result r = algorithm3(cache, c.sigma, c.tau, c.seed, opt);
    CommandOutput out;
    out.report = report_envelope(c, "find-boomerang");
    out.report["cipher"] = cache.cipher().describe();
    out.report["result"] = to_json(r);
    out.exit_code = r.found ? kExitOk : kExitNo;
    return out;
}

namespace {

struct HalfVerdict {
    nlohmann::json json;
    bool pass = false;
    std::string csv;
};

HalfVerdict verify_half(const Cipher& cipher, const TruncatedDifferential& td, double threshold, const RunConfig& c) {
    ProfileOptions opt;
    opt.direction = td.direction;
    opt.sampled = c.sampled;
    opt.seed = c.seed;
    opt.workers = c.workers;
    KeyProfile p = key_profile(cipher, td.t, td.a, td.b, opt);
    Rational frac = p.fraction_above(td.sigma);
    HalfVerdict v;
    v.pass = frac.value() > threshold;
    v.csv = p.csv();
    int n = cipher.block_bits();
    double omega = 0;
    // input class: bits set in a are predicted, the rest are free
    if (!c.sampled && cipher.key_bits() <= 8) {
        TruncatedDifference in(n, td.a, td.a);
        long double s = 0;
        for (uint64_t k = 0; k < (uint64_t{1} << cipher.key_bits()); ++k)
            s += omega_probability(cipher, td.t, k, in, td.b, td.direction).value();
        omega = static_cast<double>(s / (uint64_t{1} << cipher.key_bits()));
    }
    v.json = {{"t", td.t},
              {"direction", to_string(td.direction)},
              {"a", hex_word(td.a, n)},
              {"b", td.b.str()},
              {"sigma", td.sigma},
              {"keys_above", frac.num},
              {"keys", frac.den},
              {"fraction_above", frac.value()},
              {"threshold", threshold},
              {"mean_z", p.mean()},
              {"omega_mean", omega},
              {"pass", v.pass}};
    return v;
}

}  // namespace

CommandOutput run_verify(const RunConfig& c, const nlohmann::json& report) {
    CommandOutput out;
    std::string cmd = report.value("command", std::string());
    if (cmd != "find-truncated" && cmd != "find-boomerang") {
        out.exit_code = kExitUsage;
        out.message = "verify expects a find-truncated or find-boomerang report";
        return out;
    }
    const auto& result = report.at("result");
    if (!result.value("found", false)) {
        out.exit_code = kExitUsage;
        out.message = "report holds no distinguisher (the search answered No); nothing to verify";
        return out;
    }
    RunConfig rc = config_from_json(report.at("config"));
    rc.sampled = c.sampled;
    rc.workers = c.workers;
    CipherPtr cipher = make_cipher(rc.cipher);
    out.report = report_envelope(rc, "verify");
    out.report["source_config_hash"] = report.value("config_hash", std::string());
    bool pass = true;
    if (cmd == "find-truncated") {
        TruncatedDifferential td = truncated_from_json(result.at("differential"));
        HalfVerdict v = verify_half(*cipher, td, 1.0 - 1.0 / td.tau, rc);
        out.report["halves"] = nlohmann::json::array({v.json});
        out.csv = v.csv;
        pass = v.pass;
    } else {
        BoomerangDistinguisher b = boomerang_from_json(result.at("distinguisher"));
        HalfVerdict f = verify_half(*cipher, b.fwd, 1.0 - 1.0 / b.tau, rc);
        HalfVerdict i = verify_half(*cipher, b.bwd, 1.0 - 1.0 / b.tau, rc);
        out.report["halves"] = nlohmann::json::array({f.json, i.json});
        out.csv = f.csv + i.csv;
        pass = f.pass && i.pass;
    }
    out.report["verdict"] = pass ? "pass" : "fail";
    out.exit_code = pass ? kExitOk : kExitFail;
    return out;
}

CommandOutput run_attack(const RunConfig& c, const nlohmann::json& report) {
    CommandOutput out;
    std::string cmd = report.value("command", std::string());
    const auto& result = report.at("result");
    if (!result.value("found", false)) {
        out.exit_code = kExitUsage;
        out.message = "report holds no distinguisher; nothing to attack with";
        return out;
    }
    RunConfig rc = config_from_json(report.at("config"));
    rc.seed = c.seed;
    rc.trials = c.trials;
    rc.pairs = c.pairs;
    rc.quadruple_trials = c.quadruple_trials;
    rc.per_key_trials = c.per_key_trials;
    rc.reference = c.reference;
    rc.shift_mode = c.shift_mode;
    rc.significance = c.significance;
    CipherPtr cipher = make_cipher(rc.cipher);
    out.report = report_envelope(rc, "attack");
    out.report["source_config_hash"] = report.value("config_hash", std::string());
    if (cmd == "find-truncated") {
        TruncatedDifferential td = truncated_from_json(result.at("differential"));
        uint64_t pairs = rc.pairs ? *rc.pairs : static_cast<uint64_t>(std::ceil(40.0 / td.sigma));
        RecoveryExperiment e = recovery_experiment(*cipher, td, pairs, rc.trials, rc.seed);
        out.report["recovery"] = to_json(e);
        std::ostringstream csv;
        csv << "trial,true_rank\n";
        for (size_t i = 0; i < e.ranks.size(); ++i) csv << i << ',' << e.ranks[i] << '\n';
        out.csv = csv.str();
    } else if (cmd == "find-boomerang") {
        BoomerangDistinguisher b = boomerang_from_json(result.at("distinguisher"));
        CipherPtr ref = make_cipher(rc.reference);
        DistinguishReport d =
            boomerang_distinguish(*cipher, *ref, b, rc.quadruple_trials, rc.seed, rc.shift_mode, rc.significance, &out.csv);
        out.report["distinguish"] = to_json(d);
        if (rc.per_key_trials) {
            if (cipher->key_bits() > 16) throw std::invalid_argument("per-key experiment limited to m <= 16");
            double target = std::pow(b.sigma, 4);
            uint64_t keys = uint64_t{1} << cipher->key_bits(), good = 0;
            nlohmann::json rates = nlohmann::json::array();
            for (uint64_t k = 0; k < keys; ++k) {
                Rng rng(derive_seed(rc.seed, "per-key", k));
                RateEstimate e = right_rate_for_key(*cipher, k, b, rc.per_key_trials, rc.shift_mode, rng);
                if (e.rate() >= target) ++good;
                rates.push_back(e.rate());
            }
            double frac = static_cast<double>(good) / keys;
            out.report["per_key"] = {{"trials_per_key", rc.per_key_trials}, {"target_rate", target},
                                     {"keys_at_target", good},          {"keys", keys},
                                     {"fraction", frac},                 {"required", 1.0 - 2.0 / b.tau},
                                     {"rates", rates}};
        }
    } else {
        out.exit_code = kExitUsage;
        out.message = "attack expects a find-truncated or find-boomerang report";
    }
    return out;
}

CommandOutput run_complexity(int n, int m, double sigma, double tau, int r, double enc_gates) {
    CommandOutput out;
    out.report = {{"tool", "qtrunc"}, {"version", kToolVersion}, {"command", "complexity"},
                  {"complexity", to_json(complexity_report(n, m, sigma, tau, r, enc_gates))}};
    return out;
}

}  // namespace qtrunc
