#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qtrunc/attack.hpp"
#include "qtrunc/cipher.hpp"
#include "qtrunc/truncated.hpp"

namespace qtrunc {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kConfigVersion = 1;

// JSON run configuration, versioned by "config_version".
struct RunConfig {
    nlohmann::json cipher = {{"name", "TOY8"}};
    int t = 1;
    double sigma = 0.75;
    double tau = 4;
    std::optional<uint64_t> q_override;
    ScanMode mode = ScanMode::Ascending;
    Direction direction = Direction::Forward;
    uint64_t seed = 1;
    int workers = 1;
    bool sampled = false;
    uint64_t trials = 100;
    std::optional<uint64_t> pairs;
    uint64_t quadruple_trials = 100000;
    uint64_t per_key_trials = 0;
    nlohmann::json reference = {{"name", "RANDOMPERM"}};
    ShiftMode shift_mode = ShiftMode::InverseInput;
    double significance = 1e-3;

    nlohmann::json to_json() const;
    void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
std::string config_hash(const RunConfig& c);

// Fields every report carries.
nlohmann::json report_envelope(const RunConfig& c, const std::string& command);
std::string dump_report(const nlohmann::json& j);

}  // namespace qtrunc
