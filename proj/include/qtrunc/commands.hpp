#pragma once

#include <string>

#include <json.hpp>

#include "qtrunc/config.hpp"

namespace qtrunc {

enum ExitCode { kExitOk = 0, kExitFail = 1, kExitUsage = 2, kExitNo = 3 };

struct CommandOutput {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::string csv;  // profile or trial log, when the command produces one
    std::string message;
};

CommandOutput run_find_truncated(const RunConfig& c);
CommandOutput run_find_boomerang(const RunConfig& c);
CommandOutput run_verify(const RunConfig& c, const nlohmann::json& report);
CommandOutput run_attack(const RunConfig& c, const nlohmann::json& report);
CommandOutput run_complexity(int n, int m, double sigma, double tau, int r, double enc_gates);

}  // namespace qtrunc
