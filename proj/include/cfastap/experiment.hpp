#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cfastap/compensation.hpp"
#include "cfastap/config.hpp"
#include "cfastap/evaluation.hpp"

namespace cfastap {

struct ExperimentOptions {
    bool check = false;
    bool emit_trace = false;
};

struct CheckOutcome {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    bool skipped = false;
};

struct ExperimentReport {
    std::filesystem::path output_dir;
    std::vector<IfLossCurve> curves;  // sr-rbc, lsmi, clairvoyant order, as requested
    double notch = 0.0;
    std::vector<double> mean_loss_db;  // per curve, off-notch
    std::vector<CellDiagnostics> cells;
    std::vector<CheckOutcome> checks;
    std::vector<std::filesystem::path> files;  // data files written, in write order

    bool checks_passed() const;
};

// Runs the configured methods on the configured scenario and writes:
//   resolved_config.json, if_loss.csv, spectrum_{fourier,irls}.csv with
//   .json sidecars and clutter_locus.csv (fourier-image), irls_trace.csv
//   (emit_trace), manifest.json.
// Data files depend only on the config, never on worker count or timing.
ExperimentReport run_experiment(const RunConfig& cfg, const ExperimentOptions& opt = {});

}  // namespace cfastap
