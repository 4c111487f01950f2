#pragma once

#include <vector>

#include "cfastap/clutter.hpp"
#include "cfastap/types.hpp"

namespace cfastap {

// Angle-Doppler grid: azimuths 2*pi*i/N_s (i = 0..N_s-1) and Dopplers
// -1/2 + j/N_d (j = 0..N_d-1), cycles per PRI.
struct GridSpec {
    double zoom_spatial = 4.0;
    double zoom_temporal = 4.0;
    int azimuth_bins = 0;
    int doppler_bins = 0;

    double azimuth(int i) const { return kTwoPi * i / azimuth_bins; }
    double doppler(int j) const { return -0.5 + static_cast<double>(j) / doppler_bins; }
    int atoms() const { return azimuth_bins * doppler_bins; }
    // Azimuth index varies fastest.
    int atom_index(int i, int j) const { return j * azimuth_bins + i; }
    int azimuth_of(int atom) const { return atom % azimuth_bins; }
    int doppler_of(int atom) const { return atom / azimuth_bins; }
    // Nearest Doppler bin to f, wrapping around the unit interval.
    int nearest_doppler_bin(double f) const;
};

// Throws std::invalid_argument("dictionary not overcomplete") for zoom < 1.
GridSpec build_grid(const ArrayGeometry& geom, int pulses, double zoom_spatial, double zoom_temporal);

struct Dictionary {
    CMatrix atoms;  // NMP x (N_s * N_d), column-major
    GridSpec grid;
    std::size_t range_index = 0;
    double elevation = 0.0;
    // Factors of the Kronecker structure: column i of `spatial` is the
    // steering at (phi_i, theta_k); column j of `temporal` at Doppler f_j.
    CMatrix spatial;
    CMatrix temporal;
};

Dictionary build_dictionary(const ClutterScenario& sc, std::size_t k, const GridSpec& grid);

// max_{a != b} |phi_a^H phi_b| / NMP, computed from the Kronecker factors.
double mutual_coherence(const Dictionary& dict);

}  // namespace cfastap
