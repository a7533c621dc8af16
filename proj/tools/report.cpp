#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "padiclz/lfun.hpp"
#include "padiclz/units.hpp"

namespace padiclz::cli {

namespace {

// 64-bit FNV-1a, hex.
std::string fingerprint(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

nlohmann::json check_json(const Check& c, bool timings) {
    nlohmann::json j{{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}};
    j["residual"] = c.residual ? nlohmann::json(*c.residual) : nlohmann::json(nullptr);
    j["required"] = c.required ? nlohmann::json(*c.required) : nlohmann::json(nullptr);
    if (timings) j["wall_ms"] = std::round(c.wall_ms * 1000) / 1000;
    return j;
}

std::string cell(const nlohmann::json& v) {
    if (v.is_null()) return "-";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::LowerBound: return "lower-bound";
        case Status::Error: return "error";
    }
    return "error";
}

Check residual_check(std::string name, int residual, int required, std::string detail) {
    Check c;
    c.name = std::move(name);
    c.residual = residual;
    c.required = required;
    c.status = residual >= required ? Status::Pass : Status::Fail;
    c.detail = std::move(detail);
    return c;
}

nlohmann::json conventions(const std::string& seed) {
    nlohmann::json c{
        {"seed", seed},
        {"gross_twist_omega", kFrozenGrossConvention.twist_omega},
        {"gross_inverse", kFrozenGrossConvention.inverse},
        {"artin_sign", kArtinSign},
        {"bernoulli_b1", "-1/2"},
        {"character_index", "1-based"},
    };
    c["hash"] = fingerprint(c.dump());
    return c;
}

nlohmann::json build_report(const std::vector<JobReport>& jobs, const std::string& seed, bool lower_bound_is_pass,
                            bool timings) {
    nlohmann::json r;
    r["schema_version"] = kSchemaVersion;
    r["tool"] = {{"name", "padic-lzero"}, {"version", kToolVersion}};
    r["conventions"] = conventions(seed);
    r["lower_bound_is_pass"] = lower_bound_is_pass;
    int counts[4] = {0, 0, 0, 0};
    double total = 0;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& j : jobs) {
        nlohmann::json jj;
        jj["job"] = j.echo;
        jj["values"] = j.values;
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : j.checks) {
            checks.push_back(check_json(c, timings));
            ++counts[static_cast<int>(c.status)];
        }
        jj["checks"] = checks;
        if (timings) jj["wall_ms"] = std::round(j.wall_ms * 1000) / 1000;
        total += j.wall_ms;
        arr.push_back(jj);
    }
    r["jobs"] = arr;
    const bool ok = counts[1] == 0 && counts[3] == 0 && (lower_bound_is_pass || counts[2] == 0);
    r["summary"] = {{"pass", counts[0]},     {"fail", counts[1]},  {"lower-bound", counts[2]},
                    {"error", counts[3]},    {"exit_code", ok ? 0 : 1}};
    if (timings) r["summary"]["wall_ms"] = std::round(total * 1000) / 1000;
    return r;
}

int exit_code(const nlohmann::json& report) { return report.at("summary").at("exit_code").get<int>(); }

std::string render_report(const nlohmann::json& report) {
    std::ostringstream os;
    os << "padic-lzero report (schema " << cell(report.value("schema_version", nlohmann::json(nullptr)))
       << ", conventions " << cell(report.at("conventions").value("hash", nlohmann::json(nullptr))) << ")\n";
    const std::vector<std::string> head{"CHECK", "STATUS", "RESIDUAL", "REQUIRED", "DETAIL"};
    for (const auto& job : report.at("jobs")) {
        const auto& echo = job.at("job");
        os << "\n== " << cell(echo.value("name", nlohmann::json(nullptr))) << " ("
           << cell(echo.value("kind", nlohmann::json(nullptr))) << ")\n";
        std::vector<std::vector<std::string>> rows;
        for (const auto& c : job.at("checks")) {
            std::string st = c.at("status").get<std::string>();
            std::transform(st.begin(), st.end(), st.begin(), [](unsigned char ch) { return std::toupper(ch); });
            rows.push_back({cell(c.at("name")), st, cell(c.at("residual")), cell(c.at("required")), cell(c.at("detail"))});
        }
        std::vector<std::size_t> w(head.size());
        for (std::size_t i = 0; i < head.size(); ++i) w[i] = head[i].size();
        for (const auto& r : rows)
            for (std::size_t i = 0; i + 1 < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
        auto line = [&](const std::vector<std::string>& r) {
            std::string s;
            for (std::size_t i = 0; i < r.size(); ++i) {
                s += r[i];
                if (i + 1 < r.size()) s += std::string(w[i] - r[i].size() + 2, ' ');
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            os << s << '\n';
        };
        line(head);
        for (const auto& r : rows) line(r);
        if (job.contains("values") && !job.at("values").empty()) {
            os << "values:\n";
            for (const auto& [k, v] : job.at("values").items()) os << "  " << k << " = " << cell(v) << '\n';
        }
    }
    const auto& s = report.at("summary");
    os << "\nsummary: " << cell(s.at("pass")) << " pass, " << cell(s.at("fail")) << " fail, "
       << cell(s.at("lower-bound")) << " lower-bound, " << cell(s.at("error")) << " error; exit "
       << cell(s.at("exit_code")) << '\n';
    return os.str();
}

}  // namespace padiclz::cli
