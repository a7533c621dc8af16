#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace padiclz::cli {

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "0.1.0";

enum class Status { Pass, Fail, LowerBound, Error };
std::string to_string(Status s);

struct Check {
    std::string name;
    Status status = Status::Pass;
    std::optional<int> residual;  // valuation of the difference
    std::optional<int> required;
    std::string detail;
    double wall_ms = 0;
};

// Pass when residual >= required.
Check residual_check(std::string name, int residual, int required, std::string detail = {});

struct JobReport {
    nlohmann::json echo;
    std::vector<Check> checks;  // sorted by name
    nlohmann::json values = nlohmann::json::object();
    double wall_ms = 0;
};

// Convention fingerprint written into every report.
nlohmann::json conventions(const std::string& seed);

// The whole report. Keys are sorted and the check arrays are sorted by name, so
// the dump is byte-identical across reruns unless timings are requested.
nlohmann::json build_report(const std::vector<JobReport>& jobs, const std::string& seed, bool lower_bound_is_pass,
                            bool timings);
int exit_code(const nlohmann::json& report);

// Fixed-width text table.
std::string render_report(const nlohmann::json& report);

}  // namespace padiclz::cli
