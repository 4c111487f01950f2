#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cfastap/config.hpp"
#include "cfastap/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheck = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformal-array STAP clutter compensation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int workers = 0;
    bool check = false;
    bool emit_trace = false;

    auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config file");
    run->add_option("config", config_path, "Config file (JSON; empty file = defaults)")->required();
    run->add_option("--output-dir", output_dir, "Override output_dir from the config");
    run->add_option("--workers", workers, "Override the worker count")->check(CLI::PositiveNumber);
    run->add_flag("--check", check, "Evaluate acceptance thresholds; exit 3 on failure");
    run->add_flag("--emit-trace", emit_trace, "Write per-iteration IRLS diagnostics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    cfastap::RunConfig cfg;
    try {
        cfg = cfastap::load_config(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (workers > 0) cfg.workers = workers;
        cfg.validate();
    } catch (const cfastap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    cfastap::ExperimentReport report;
    try {
        report = cfastap::run_experiment(cfg, {check, emit_trace});
    } catch (const cfastap::NumericalError& e) {
        std::cerr << "numerical failure in " << e.stage() << ": " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }

    std::printf("notch %.4f cycles/PRI\n", report.notch);
    for (std::size_t i = 0; i < report.curves.size(); ++i) {
        std::printf("%-12s mean off-notch IF loss %8.3f dB\n", report.curves[i].method.c_str(), report.mean_loss_db[i]);
    }
    std::printf("outputs in %s\n", report.output_dir.string().c_str());
    if (!check) return kExitOk;

    for (const auto& c : report.checks) {
        const char* status = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
        std::printf("%s %s: %.4f (threshold %.4g)\n", status, c.name.c_str(), c.value, c.threshold);
    }
    return report.checks_passed() ? kExitOk : kExitCheck;
}
