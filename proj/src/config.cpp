#include "qtrunc/config.hpp"

#include <fstream>
#include <stdexcept>

#include "qtrunc/bitword.hpp"
#include "qtrunc/rng.hpp"

namespace qtrunc {

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = {{"config_version", kConfigVersion},
                        {"cipher", cipher},
                        {"t", t},
                        {"sigma", sigma},
                        {"tau", tau},
                        {"q_override", q_override ? nlohmann::json(*q_override) : nlohmann::json(nullptr)},
                        {"mode", qtrunc::to_string(mode)},
                        {"direction", qtrunc::to_string(direction)},
                        {"seed", seed},
                        {"workers", workers},
                        {"sampled", sampled},
                        {"trials", trials},
                        {"pairs", pairs ? nlohmann::json(*pairs) : nlohmann::json(nullptr)},
                        {"quadruple_trials", quadruple_trials},
                        {"per_key_trials", per_key_trials},
                        {"reference", reference},
                        {"shift_mode", qtrunc::to_string(shift_mode)},
                        {"significance", significance}};
    return j;
}

void RunConfig::validate() const {
    if (!(sigma > 0 && sigma < 1)) throw std::invalid_argument("config: sigma must lie in (0, 1)");
    if (!(tau >= 1)) throw std::invalid_argument("config: tau must be >= 1");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (!(significance > 0 && significance < 1)) throw std::invalid_argument("config: significance must lie in (0, 1)");
}

RunConfig config_from_json(const nlohmann::json& j) {
    int version = j.value("config_version", kConfigVersion);
    if (version != kConfigVersion)
        throw std::invalid_argument("unsupported config_version " + std::to_string(version));
    RunConfig c;
    if (j.contains("cipher")) c.cipher = j.at("cipher").is_string() ? nlohmann::json{{"name", j.at("cipher")}} : j.at("cipher");
    c.t = j.value("t", c.t);
    c.sigma = j.value("sigma", c.sigma);
    c.tau = j.value("tau", c.tau);
    if (j.contains("q_override") && !j.at("q_override").is_null()) c.q_override = j.at("q_override").get<uint64_t>();
    if (j.contains("mode")) c.mode = parse_scan_mode(j.at("mode").get<std::string>());
    if (j.contains("direction")) c.direction = parse_direction(j.at("direction").get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.sampled = j.value("sampled", c.sampled);
    c.trials = j.value("trials", c.trials);
    if (j.contains("pairs") && !j.at("pairs").is_null()) c.pairs = j.at("pairs").get<uint64_t>();
    c.quadruple_trials = j.value("quadruple_trials", c.quadruple_trials);
    c.per_key_trials = j.value("per_key_trials", c.per_key_trials);
    if (j.contains("reference")) c.reference = j.at("reference").is_string() ? nlohmann::json{{"name", j.at("reference")}} : j.at("reference");
    if (j.contains("shift_mode")) c.shift_mode = parse_shift_mode(j.at("shift_mode").get<std::string>());
    c.significance = j.value("significance", c.significance);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

std::string config_hash(const RunConfig& c) { return hex_word(fnv1a64(c.to_json().dump()), 64); }

nlohmann::json report_envelope(const RunConfig& c, const std::string& command) {
    return {{"tool", "qtrunc"},
            {"version", kToolVersion},
            {"command", command},
            {"config", c.to_json()},
            {"config_hash", config_hash(c)},
            {"seed", c.seed},
            {"rng", kRngIdentity},
            {"guard_mode", c.sampled ? "sampled" : "exhaustive"}};
}

std::string dump_report(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace qtrunc
