#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cfastap/geometry.hpp"
#include "cfastap/steering.hpp"
#include "cfastap/types.hpp"

namespace cfastap {

enum class GainModel { isotropic, cosine_element };

// Covariance matrix taper. `identity` means A_s and A_t are all-ones (no
// decorrelation). `configured` uses A_s = c*11^T + (1-c)*I for channel
// amplitude/phase inconsistency and A_t[p,q] = rho^|p-q| for pulse-to-pulse
// decorrelation.
struct TaperModel {
    enum class Kind { identity, configured };
    Kind kind = Kind::identity;
    double spatial_consistency = 1.0;
    double temporal_correlation = 1.0;
};

struct ClutterScenario {
    ArrayGeometry geometry;
    PlatformState platform;
    int scatterers_per_ring = 64;
    double cnr_db = 30.0;
    std::vector<double> range_cells;  // slant ranges, strictly increasing
    std::size_t test_cell_index = 0;
    double noise_power = 1.0;
    GainModel gain = GainModel::isotropic;
    TaperModel taper;
    std::uint64_t seed = 1;

    int space_time_dim() const { return geometry.channels() * platform.pulses; }
    double slant_range(std::size_t k) const;
    double elevation(std::size_t k) const;
    // Scatterer count large enough to sample the clutter ridge densely.
    bool dense_enough() const { return 4 * scatterers_per_ring >= space_time_dim(); }
    void validate() const;
};

struct Scatterer {
    AngleVector angle;
    double amplitude = 0.0;  // voltage; scatterer power is amplitude^2
};

struct Snapshot {
    CVector data;
    std::size_t range_index = 0;
};

struct Covariance {
    CMatrix matrix;
    std::string label;

    Eigen::Index dim() const { return matrix.rows(); }
};

// Range bin spacing c / (2 fs).
double range_cell_spacing(double sample_rate);

// Slant ranges centred on `test_range`: `training_cells / 2` cells below,
// the rest above. The test cell sits at index training_cells / 2.
std::vector<double> training_window(double test_range, double spacing, int training_cells);

// Amplitude pattern sqrt(g_{m,n}) of every spatial channel toward psi.
RVector element_gain(const ArrayGeometry& geom, GainModel model, const AngleVector& psi);

// Gain-weighted space-time response g_st (.) s_st of one scatterer.
CVector scatterer_response(const ClutterScenario& sc, const AngleVector& psi);

// Evenly spaced azimuths 2*pi*q/N_c on the iso-range of cell k, amplitudes
// scaled so the clutter covariance meets the configured CNR.
std::vector<Scatterer> iso_range_scatterers(const ClutterScenario& sc, std::size_t k);

// Scale c with trace(c * clutter) / (NMP * noise) = 10^(cnr/10). With zero
// noise power the reference power is 1.
double cnr_scale(double clutter_trace, int space_time_dim, double noise_power, double cnr_db);
double cnr_scale(const Covariance& unnormalized_clutter, double noise_power, double cnr_db);

Covariance clairvoyant_ccm(const ClutterScenario& sc, std::size_t k);

// Seed for cell k, derived from the scenario seed only.
std::uint64_t cell_seed(std::uint64_t scenario_seed, std::size_t k);

Snapshot clutter_snapshot(const ClutterScenario& sc, std::size_t k, std::mt19937_64& rng);
Snapshot clutter_snapshot(const ClutterScenario& sc, std::size_t k);

// Draws from CN(0, 1).
cplx complex_normal(std::mt19937_64& rng);

}  // namespace cfastap
