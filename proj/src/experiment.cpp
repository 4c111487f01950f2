#include "cfastap/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

#include <json.hpp>

#include "cfastap/dictionary.hpp"
#include "cfastap/irls.hpp"
#include "cfastap/simd/kernels.hpp"
#include "cfastap/steering.hpp"

namespace cfastap {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class FileWriter {
public:
    FileWriter(fs::path dir, std::vector<fs::path>& written) : dir_(std::move(dir)), written_(written) {}

    void write(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << content;
        if (!out) throw std::runtime_error("cannot write " + p.string());
        written_.push_back(p);
    }

private:
    fs::path dir_;
    std::vector<fs::path>& written_;
};

std::string if_loss_csv(const std::vector<IfLossCurve>& curves) {
    std::string s = "doppler_cycles_per_pri";
    for (const auto& c : curves) s += "," + c.method + "_loss_db";
    s += "\n";
    const std::size_t n = curves.front().target_dopplers.size();
    for (std::size_t i = 0; i < n; ++i) {
        s += num(curves.front().target_dopplers[i]);
        for (const auto& c : curves) s += "," + num(c.loss_db[i]);
        s += "\n";
    }
    return s;
}

std::string image_csv(const RMatrix& img, const GridSpec& grid) {
    std::string s = "doppler_cycles_per_pri";
    for (int i = 0; i < grid.azimuth_bins; ++i) s += ",az_" + num(grid.azimuth(i) * 180.0 / kPi) + "_deg";
    s += "\n";
    for (int j = 0; j < grid.doppler_bins; ++j) {
        s += num(grid.doppler(j));
        for (int i = 0; i < grid.azimuth_bins; ++i) s += "," + num(img(j, i));
        s += "\n";
    }
    return s;
}

std::string image_sidecar(const GridSpec& grid, const std::string& estimator, std::size_t range_index,
                          double slant_range, double floor_db) {
    json j;
    j["estimator"] = estimator;
    j["range_index"] = range_index;
    j["slant_range_m"] = slant_range;
    j["rows"] = {{"axis", "doppler"}, {"unit", "cycles_per_pri"}, {"start", grid.doppler(0)},
                 {"step", 1.0 / grid.doppler_bins}, {"count", grid.doppler_bins}};
    j["columns"] = {{"axis", "azimuth"}, {"unit", "deg"}, {"start", 0.0},
                    {"step", 360.0 / grid.azimuth_bins}, {"count", grid.azimuth_bins}};
    j["values"] = {{"quantity", "|alpha|^2"}, {"unit", "dB"}, {"normalization", "peak = 0 dB"},
                   {"floor_db", floor_db}};
    j["doppler_to_hz"] = "multiply by 1/pri_s";
    return j.dump(2) + "\n";
}

std::string locus_csv(const ClutterScenario& sc, std::size_t k, const GridSpec& grid) {
    std::string s = "azimuth_deg,doppler_cycles_per_pri\n";
    const double theta = sc.elevation(k);
    for (int i = 0; i < grid.azimuth_bins; ++i) {
        const AngleVector psi = AngleVector::make(grid.azimuth(i), theta);
        s += num(grid.azimuth(i) * 180.0 / kPi) + "," +
             num(doppler_frequency(psi, sc.platform, sc.geometry.wavelength)) + "\n";
    }
    return s;
}

std::string trace_csv(const std::vector<CellDiagnostics>& cells) {
    std::string s = "range_index,iteration,support_size,residual,relative_change\n";
    for (const auto& c : cells) {
        for (const auto& r : c.trace) {
            s += std::to_string(c.range_index) + "," + std::to_string(r.iteration) + "," +
                 std::to_string(r.support_size) + "," + num(r.residual) + "," + num(r.relative_change) + "\n";
        }
    }
    return s;
}

json cell_json(const CellDiagnostics& c) {
    json j = {{"range_index", c.range_index}, {"slant_range_m", c.slant_range}, {"dropped", c.dropped}};
    if (c.dropped) {
        j["error"] = c.error;
    } else {
        j["iterations"] = c.iterations;
        j["converged"] = c.converged;
        j["support_size"] = c.support_size;
        j["residual"] = c.residual;
    }
    return j;
}

const IfLossCurve* find_curve(const std::vector<IfLossCurve>& curves, std::string_view method) {
    for (const auto& c : curves)
        if (c.method == method) return &c;
    return nullptr;
}

std::vector<CheckOutcome> evaluate_checks(const RunConfig& cfg, const ExperimentReport& r) {
    std::vector<CheckOutcome> out;
    const auto mean = [&](const IfLossCurve* c) {
        return mean_loss_off_notch(*c, r.notch, cfg.check.notch_exclusion);
    };
    const IfLossCurve* sr = find_curve(r.curves, kMethodSrRbc);
    const IfLossCurve* ls = find_curve(r.curves, kMethodLsmi);
    const IfLossCurve* cv = find_curve(r.curves, kMethodClairvoyant);

    CheckOutcome gain{"sr-rbc gain over lsmi (dB)", 0.0, cfg.check.min_gain_db};
    if (sr && ls) {
        gain.value = mean(sr) - mean(ls);
        gain.passed = gain.value >= gain.threshold;
    } else {
        gain.skipped = true;
    }
    out.push_back(gain);

    CheckOutcome level{"sr-rbc mean loss (dB)", 0.0, -cfg.check.max_srrbc_loss_db};
    if (sr) {
        level.value = mean(sr);
        level.passed = level.value >= level.threshold;
    } else {
        level.skipped = true;
    }
    out.push_back(level);

    CheckOutcome calib{"clairvoyant max |loss| (dB)", 0.0, cfg.check.clairvoyant_tol_db};
    if (cv) {
        for (double v : cv->loss_db) calib.value = std::max(calib.value, std::abs(v));
        calib.passed = calib.value <= calib.threshold;
    } else {
        calib.skipped = true;
    }
    out.push_back(calib);
    return out;
}

}  // namespace

bool ExperimentReport::checks_passed() const {
    for (const auto& c : checks)
        if (!c.skipped && !c.passed) return false;
    return true;
}

ExperimentReport run_experiment(const RunConfig& cfg, const ExperimentOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    const ClutterScenario sc = cfg.build_scenario();
    PipelineOptions popt = cfg.pipeline_options();
    popt.record_trace = opt.emit_trace;
    const std::size_t t = sc.test_cell_index;
    const AngleVector target = AngleVector::make(cfg.target_look().azimuth, sc.elevation(t));
    const std::vector<double> dopplers = doppler_sweep(cfg.doppler_points);

    ExperimentReport report;
    report.output_dir = cfg.output_dir;
    report.notch = clutter_notch(sc, target);
    fs::create_directories(report.output_dir);
    FileWriter out(report.output_dir, report.files);
    out.write("resolved_config.json", config_to_json(cfg));

    std::optional<SpectrumEstimate> test_spectrum;
    if (cfg.wants(kMethodSrRbc)) {
        PipelineResult pr = sr_rbc_pipeline(sc, popt);
        report.cells = pr.cells;
        test_spectrum = std::move(pr.test_spectrum);
        report.curves.push_back(if_loss_curve(sc, pr.estimate.matrix, target, dopplers, std::string(kMethodSrRbc)));
    }
    if (cfg.wants(kMethodLsmi)) {
        const Covariance r = plain_lsmi(sc, cfg.training_cells, cfg.lsmi_loading);
        report.curves.push_back(if_loss_curve(sc, r.matrix, target, dopplers, std::string(kMethodLsmi)));
    }
    if (cfg.wants(kMethodClairvoyant)) {
        const Covariance r = clairvoyant_ccm(sc, t);
        report.curves.push_back(if_loss_curve(sc, r.matrix, target, dopplers, std::string(kMethodClairvoyant)));
    }
    for (const auto& c : report.curves) report.mean_loss_db.push_back(mean_loss_off_notch(c, report.notch, cfg.check.notch_exclusion));
    if (!report.curves.empty()) out.write("if_loss.csv", if_loss_csv(report.curves));

    if (cfg.wants(kMethodFourierImage)) {
        constexpr double kFloorDb = -120.0;
        const Dictionary dict = build_dictionary(sc, t, popt.grid);
        const Snapshot x = clutter_snapshot(sc, t);
        if (!test_spectrum) {
            test_spectrum = estimate_spectrum(dict, x, popt.irls, opt.emit_trace);
            report.cells.push_back({});
            CellDiagnostics& d = report.cells.back();
            d.range_index = t;
            d.slant_range = sc.slant_range(t);
            d.iterations = test_spectrum->iterations;
            d.converged = test_spectrum->converged;
            d.support_size = test_spectrum->support.size();
            d.residual = test_spectrum->residual;
            d.trace = test_spectrum->trace;
        }
        out.write("spectrum_fourier.csv", image_csv(fourier_spectrum_image(dict, x), popt.grid));
        out.write("spectrum_fourier.json", image_sidecar(popt.grid, "fourier", t, sc.slant_range(t), kFloorDb));
        out.write("spectrum_irls.csv",
                  image_csv(spectrum_image_db(test_spectrum->amplitudes, popt.grid, kFloorDb), popt.grid));
        out.write("spectrum_irls.json", image_sidecar(popt.grid, "irls", t, sc.slant_range(t), kFloorDb));
        out.write("clutter_locus.csv", locus_csv(sc, t, popt.grid));
    }
    if (opt.emit_trace) out.write("irls_trace.csv", trace_csv(report.cells));
    if (opt.check) report.checks = evaluate_checks(cfg, report);

    json manifest;
    manifest["seed"] = cfg.seed;
    manifest["config_hash"] = config_hash(cfg);
    manifest["kernels"] = std::string(simd::isa_name(simd::kernels().isa));
    manifest["workers"] = cfg.workers;
    manifest["test_range_index"] = t;
    manifest["clutter_notch_cycles_per_pri"] = report.notch;
    json means = json::object();
    for (std::size_t i = 0; i < report.curves.size(); ++i) means[report.curves[i].method] = report.mean_loss_db[i];
    manifest["mean_loss_off_notch_db"] = means;
    json cells = json::array();
    for (const auto& c : report.cells) cells.push_back(cell_json(c));
    manifest["cells"] = cells;
    if (opt.check) {
        json checks = json::array();
        for (const auto& c : report.checks) {
            checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                              {"status", c.skipped ? "skipped" : (c.passed ? "pass" : "fail")}});
        }
        manifest["checks"] = checks;
    }
    json files = json::array();
    for (const auto& f : report.files) files.push_back(f.filename().string());
    manifest["files"] = files;
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.write("manifest.json", manifest.dump(2) + "\n");
    return report;
}

}  // namespace cfastap
