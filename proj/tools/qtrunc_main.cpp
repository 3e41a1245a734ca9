#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtrunc/commands.hpp"
#include "qtrunc/error.hpp"
#include "qtrunc/walsh.hpp"

using namespace qtrunc;

namespace {

struct Flags {
    std::string config;
    std::string cipher;
    std::optional<int> rounds;
    std::optional<int> t;
    std::optional<double> sigma;
    std::optional<double> tau;
    std::optional<uint64_t> q;
    std::string mode;
    std::string direction;
    std::optional<uint64_t> seed;
    std::optional<int> workers;
    bool sampled = false;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> pairs;
    std::optional<uint64_t> quadruple_trials;
    std::optional<uint64_t> per_key_trials;
    std::string shift_mode;
    std::string out;
    std::string csv;
    std::string report;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("-c,--config", f.config, "JSON run configuration");
    sub->add_option("--cipher", f.cipher, "built-in cipher name");
    sub->add_option("--rounds", f.rounds, "round count for the built-in cipher");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--workers", f.workers, "worker threads");
    sub->add_option("-o,--out", f.out, "report path (stdout when omitted)");
}

void add_search(CLI::App* sub, Flags& f) {
    sub->add_option("-t,--t", f.t, "reduced round count");
    sub->add_option("--sigma", f.sigma, "probability threshold in (0,1)");
    sub->add_option("--tau", f.tau, "key-fraction polynomial value (>= 1)");
    sub->add_option("--q", f.q, "override the per-component sample budget");
    sub->add_option("--mode", f.mode, "ascending | prefer-max-d");
    sub->add_option("--direction", f.direction, "forward | inverse");
}

RunConfig build_config(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (!f.cipher.empty()) c.cipher = {{"name", f.cipher}};
    if (f.rounds) c.cipher["rounds"] = *f.rounds;
    if (f.t) c.t = *f.t;
    if (f.sigma) c.sigma = *f.sigma;
    if (f.tau) c.tau = *f.tau;
    if (f.q) c.q_override = *f.q;
    if (!f.mode.empty()) c.mode = parse_scan_mode(f.mode);
    if (!f.direction.empty()) c.direction = parse_direction(f.direction);
    if (f.seed) c.seed = *f.seed;
    if (f.workers) c.workers = *f.workers;
    if (f.sampled) c.sampled = true;
    if (f.trials) c.trials = *f.trials;
    if (f.pairs) c.pairs = *f.pairs;
    if (f.quadruple_trials) c.quadruple_trials = *f.quadruple_trials;
    if (f.per_key_trials) c.per_key_trials = *f.per_key_trials;
    if (!f.shift_mode.empty()) c.shift_mode = parse_shift_mode(f.shift_mode);
    c.validate();
    return c;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open " + path);
    return nlohmann::json::parse(is);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

int emit(const CommandOutput& out, const Flags& f) {
    if (!out.message.empty()) std::cerr << "qtrunc: " << out.message << "\n";
    if (!out.report.is_null()) write_text(f.out, dump_report(out.report));
    if (!f.csv.empty() && !out.csv.empty()) write_text(f.csv, out.csv);
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated-differential and boomerang distinguisher search on toy block ciphers"};
    app.require_subcommand(1);
    Flags f;

    auto* ft = app.add_subcommand("find-truncated", "search a truncated differential of Enc^t");
    add_common(ft, f);
    add_search(ft, f);

    auto* fb = app.add_subcommand("find-boomerang", "search a boomerang distinguisher over all splits");
    add_common(fb, f);
    add_search(fb, f);

    auto* ve = app.add_subcommand("verify", "recompute key profiles for a search report");
    add_common(ve, f);
    ve->add_option("-r,--report", f.report, "report from find-truncated or find-boomerang")->required();
    ve->add_flag("--sampled", f.sampled, "estimate Z(k) from random inputs instead of exhaustively");
    ve->add_option("--csv", f.csv, "key profile CSV output");

    auto* at = app.add_subcommand("attack", "key recovery or boomerang distinguishing from a report");
    add_common(at, f);
    at->add_option("-r,--report", f.report, "report from find-truncated or find-boomerang")->required();
    at->add_option("--trials", f.trials, "key-recovery trials");
    at->add_option("--pairs", f.pairs, "plaintext pairs per recovery (default ceil(40/sigma))");
    at->add_option("--quadruples", f.quadruple_trials, "quadruples per target");
    at->add_option("--per-key", f.per_key_trials, "quadruples per key for the per-key rate scan");
    at->add_option("--shift", f.shift_mode, "inverse-input | output-zero | output-random");
    at->add_option("--csv", f.csv, "trial log CSV output");

    int sj = 1;
    auto* sd = app.add_subcommand("spectrum-dump", "write the Walsh spectrum of one component function");
    add_common(sd, f);
    add_search(sd, f);
    sd->add_option("-j,--component", sj, "component index, 1 = most significant bit");

    int cn = 8, cm = 8, cr = 4;
    double cs = 0.75, ctau = 4, cenc = 1000;
    auto* cx = app.add_subcommand("complexity", "closed-form gate, qubit and classical cost counts");
    cx->add_option("-n", cn, "block bits");
    cx->add_option("-m", cm, "key bits");
    cx->add_option("--sigma", cs, "probability threshold");
    cx->add_option("--tau", ctau, "key-fraction polynomial value");
    cx->add_option("-r,--rounds", cr, "total rounds");
    cx->add_option("--enc-gates", cenc, "gate count of the encryption circuit");
    cx->add_option("-o,--out", f.out, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ft) return emit(run_find_truncated(build_config(f)), f);
        if (*fb) return emit(run_find_boomerang(build_config(f)), f);
        if (*ve) return emit(run_verify(build_config(f), read_json(f.report)), f);
        if (*at) return emit(run_attack(build_config(f), read_json(f.report)), f);
        if (*sd) {
            RunConfig c = build_config(f);
            if (f.out.empty()) throw std::invalid_argument("spectrum-dump needs --out");
            TruthTableCache cache(make_cipher(c.cipher));
            WalshSpectrum s = walsh_spectrum(cache.component(sj, c.t, c.direction), cache.cipher().joint_bits());
            write_spectrum(f.out, s, {cache.cipher().name(), static_cast<uint32_t>(sj), static_cast<uint32_t>(c.t), c.direction});
            return kExitOk;
        }
        if (*cx) return emit(run_complexity(cn, cm, cs, ctau, cr, cenc), f);
    } catch (const ResourceError& e) {
        std::cerr << "qtrunc: resource guard: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qtrunc: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "qtrunc: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "qtrunc: malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
