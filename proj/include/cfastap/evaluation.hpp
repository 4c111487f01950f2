#pragma once

#include <string>
#include <vector>

#include "cfastap/clutter.hpp"
#include "cfastap/dictionary.hpp"
#include "cfastap/types.hpp"

namespace cfastap {

struct IfLossCurve {
    std::vector<double> target_dopplers;  // cycles per PRI
    std::vector<double> loss_db;
    std::string method;
    std::string scenario_id;
};

// w = R_hat^{-1} s via Cholesky. Throws NumericalError("adaptive weight",
// "apply loading") when R_hat is not positive definite.
CVector adaptive_weight(const CMatrix& r_hat, const CVector& s);

// 10 log10 of |w^H s|^2 / (w^H R w * s^H R^{-1} s); at most 0 dB and
// independent of the scale of w.
double if_loss(const CVector& w, const CVector& s, const CMatrix& r_true);

// IF loss of the estimate r_hat against the clairvoyant covariance of the
// test cell, for a target at `target` swept over `dopplers`.
IfLossCurve if_loss_curve(const ClutterScenario& sc, const CMatrix& r_hat, const AngleVector& target,
                          const std::vector<double>& dopplers, std::string method = {});

// `points` evenly spaced Dopplers covering [-1/2, 1/2).
std::vector<double> doppler_sweep(int points);

// Main-lobe clutter Doppler toward the target look direction.
double clutter_notch(const ClutterScenario& sc, const AngleVector& target);

// Circular distance between two normalized Dopplers.
double doppler_distance(double a, double b);

// Arithmetic mean of the dB losses at Dopplers at least `exclusion` away from
// the notch. Throws std::invalid_argument when no bin qualifies.
double mean_loss_off_notch(const IfLossCurve& curve, double notch, double exclusion);

// Angle-Doppler image |alpha|^2 in dB relative to its peak: rows are Doppler
// bins, columns azimuth bins. Values are floored at `floor_db`.
RMatrix spectrum_image_db(const CVector& amplitudes, const GridSpec& grid, double floor_db = -120.0);

// |Phi^H x|^2 on the grid, dB relative to its peak, floored at -120 dB.
RMatrix fourier_spectrum_image(const Dictionary& dict, const Snapshot& x);

// Share of the spectral power lying within +-`halfwidth` Doppler bins of the
// stationary clutter ridge of range cell k.
double locus_energy_fraction(const CVector& amplitudes, const ClutterScenario& sc, std::size_t k,
                             const GridSpec& grid, int halfwidth = 1);

}  // namespace cfastap
