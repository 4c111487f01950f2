#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cfastap/clutter.hpp"
#include "cfastap/compensation.hpp"
#include "cfastap/irls.hpp"

namespace cfastap {

inline constexpr std::string_view kMethodSrRbc = "sr-rbc";
inline constexpr std::string_view kMethodLsmi = "lsmi";
inline constexpr std::string_view kMethodClairvoyant = "clairvoyant";
inline constexpr std::string_view kMethodFourierImage = "fourier-image";

struct ScenarioConfig {
    ArrayGeometry geometry;
    PlatformState platform;     // crab_angle here is ignored; see crab_angle_deg
    double crab_angle_deg = 0.0;
    double sample_rate = 5e6;   // Hz, sets the range bin spacing
    double test_range = 4500.0; // m
    int scatterers_per_ring = 64;
    double cnr_db = 30.0;
    double noise_power = 1.0;
    GainModel gain = GainModel::isotropic;
    TaperModel taper;
};

struct CheckThresholds {
    double min_gain_db = 3.0;          // SR-RBC mean loss over LSMI's
    double max_srrbc_loss_db = 5.0;    // SR-RBC mean loss magnitude
    double notch_exclusion = 0.1;      // cycles per PRI around the notch
    double clairvoyant_tol_db = 1e-9;
};

struct RunConfig {
    ScenarioConfig scenario;
    double zoom_spatial = 4.0;
    double zoom_temporal = 4.0;
    IrlsConfig irls;
    int training_cells = 40;
    double reconstruction_loading = 1.0;  // beta_L
    double lsmi_loading = 1.0;            // delta
    double target_azimuth_deg = 90.0;
    int doppler_points = 101;
    std::vector<std::string> methods{std::string(kMethodSrRbc), std::string(kMethodLsmi),
                                     std::string(kMethodClairvoyant), std::string(kMethodFourierImage)};
    std::string output_dir = "cfastap_out";
    std::uint64_t seed = 1;
    int workers = 1;
    CheckThresholds check;

    bool wants(std::string_view method) const;
    AngleVector target_look() const;  // elevation left at zero
    ClutterScenario build_scenario() const;
    PipelineOptions pipeline_options() const;
    void validate() const;
};

// Parses JSON text. Blank text yields the defaults. Unknown keys, type
// mismatches and invalid values raise ConfigError naming the key path.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Fully-resolved config as JSON text; parse_config of the result reproduces
// the same RunConfig.
std::string config_to_json(const RunConfig& cfg);

// FNV-1a of the resolved JSON, hex.
std::string config_hash(const RunConfig& cfg);

}  // namespace cfastap
