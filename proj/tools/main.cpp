#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "jobs.hpp"
#include "report.hpp"

namespace {

constexpr int kConfigExit = 2;

int cmd_run(const std::string& path, const std::string& out, std::optional<int> precision, const std::string& seed,
            bool timings) {
    using namespace padiclz::cli;
    RunConfig rc;
    std::size_t workers = 1;
    try {
        if (seed != "default") throw ConfigError("unknown convention seed '" + seed + "' (only 'default' exists)");
        rc = load_config(path, precision);
        workers = worker_count();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    }
    const auto jobs = run_jobs(rc, workers);
    const nlohmann::json report = build_report(jobs, seed, rc.lower_bound_is_pass, timings);
    const std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write '" << out << "'\n";
            return kConfigExit;
        }
        f << text;
        std::cerr << render_report(report);
    }
    return exit_code(report);
}

int cmd_render(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read '" << path << "'\n";
        return kConfigExit;
    }
    try {
        const nlohmann::json report = nlohmann::json::parse(in);
        std::cout << padiclz::cli::render_report(report);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid report: " << e.what() << '\n';
        return kConfigExit;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"padic-lzero: p-adic exceptional-zero verification jobs"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the jobs of a TOML config and write a JSON report");
    std::string config, out, seed = "default";
    std::optional<int> precision;
    bool timings = false;
    run->add_option("config", config, "config file")->required();
    run->add_option("--out", out, "report path (default: stdout)");
    run->add_option("--precision", precision, "override the precision N of every job");
    run->add_option("--seed-conventions", seed, "convention set")->capture_default_str();
    run->add_flag("--timings", timings, "record wall times (reports are then not byte-identical)");

    auto* render = app.add_subcommand("render", "print a report as a table");
    std::string report;
    render->add_option("report", report, "report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigExit;
    }
    if (*run) return cmd_run(config, out, precision, seed, timings);
    return cmd_render(report);
}
