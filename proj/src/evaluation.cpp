#include "cfastap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfastap/steering.hpp"
#include "cfastap/irls.hpp"

namespace cfastap {

CVector adaptive_weight(const CMatrix& r_hat, const CVector& s) {
    if (r_hat.rows() != s.size()) throw std::invalid_argument("adaptive_weight: size mismatch");
    Eigen::LLT<CMatrix> llt(r_hat);
    if (llt.info() != Eigen::Success) throw NumericalError("adaptive weight", "apply loading");
    CVector w = llt.solve(s);
    if (!w.allFinite()) throw NumericalError("adaptive weight", "apply loading");
    return w;
}

double if_loss(const CVector& w, const CVector& s, const CMatrix& r_true) {
    const double num = std::norm(w.dot(s));
    const double wrw = w.dot(r_true * w).real();
    if (!(wrw > 0)) throw NumericalError("if loss", "adaptive weight has zero output power");
    Eigen::LLT<CMatrix> llt(r_true);
    if (llt.info() != Eigen::Success) throw NumericalError("if loss", "true covariance is not positive definite");
    const double srs = s.dot(llt.solve(s)).real();
    return 10.0 * std::log10(num / (wrw * srs));
}

IfLossCurve if_loss_curve(const ClutterScenario& sc, const CMatrix& r_hat, const AngleVector& target,
                          const std::vector<double>& dopplers, std::string method) {
    const std::size_t t = sc.test_cell_index;
    const Covariance r_true = clairvoyant_ccm(sc, t);
    const AngleVector psi = AngleVector::make(target.azimuth, sc.elevation(t));
    Eigen::LLT<CMatrix> hat(r_hat);
    if (hat.info() != Eigen::Success) throw NumericalError("adaptive weight", "apply loading");
    Eigen::LLT<CMatrix> truth(r_true.matrix);
    if (truth.info() != Eigen::Success) throw NumericalError("if loss", "true covariance is not positive definite");

    IfLossCurve curve;
    curve.method = std::move(method);
    curve.target_dopplers = dopplers;
    curve.loss_db.reserve(dopplers.size());
    for (double f : dopplers) {
        const CVector s = space_time_steering(sc.geometry, psi, sc.platform.pulses, f).values;
        const CVector w = hat.solve(s);
        const double wrw = w.dot(r_true.matrix * w).real();
        if (!(wrw > 0)) throw NumericalError("if loss", "adaptive weight has zero output power");
        const double srs = s.dot(truth.solve(s)).real();
        curve.loss_db.push_back(10.0 * std::log10(std::norm(w.dot(s)) / (wrw * srs)));
    }
    return curve;
}

std::vector<double> doppler_sweep(int points) {
    if (points < 1) throw std::invalid_argument("doppler sweep needs at least one point");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) out[i] = -0.5 + static_cast<double>(i) / points;
    return out;
}

double clutter_notch(const ClutterScenario& sc, const AngleVector& target) {
    const AngleVector psi = AngleVector::make(target.azimuth, sc.elevation(sc.test_cell_index));
    return doppler_frequency(psi, sc.platform, sc.geometry.wavelength);
}

double doppler_distance(double a, double b) {
    const double d = std::abs(std::remainder(a - b, 1.0));
    return d;
}

double mean_loss_off_notch(const IfLossCurve& curve, double notch, double exclusion) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < curve.target_dopplers.size(); ++i) {
        if (doppler_distance(curve.target_dopplers[i], notch) >= exclusion) {
            sum += curve.loss_db[i];
            ++n;
        }
    }
    if (n == 0) throw std::invalid_argument("no Doppler bin outside the clutter notch");
    return sum / static_cast<double>(n);
}

RMatrix spectrum_image_db(const CVector& amplitudes, const GridSpec& grid, double floor_db) {
    if (amplitudes.size() != grid.atoms()) throw std::invalid_argument("spectrum size does not match the grid");
    const double peak = amplitudes.cwiseAbs2().maxCoeff();
    RMatrix img(grid.doppler_bins, grid.azimuth_bins);
    for (int j = 0; j < grid.doppler_bins; ++j) {
        for (int i = 0; i < grid.azimuth_bins; ++i) {
            const double p = std::norm(amplitudes[grid.atom_index(i, j)]);
            img(j, i) = (peak > 0 && p > 0) ? std::max(floor_db, 10.0 * std::log10(p / peak)) : floor_db;
        }
    }
    return img;
}

RMatrix fourier_spectrum_image(const Dictionary& dict, const Snapshot& x) {
    if (x.data.size() != dict.atoms.rows()) throw std::invalid_argument("snapshot size does not match the dictionary");
    return spectrum_image_db(dict.atoms.adjoint() * x.data, dict.grid);
}

double locus_energy_fraction(const CVector& amplitudes, const ClutterScenario& sc, std::size_t k,
                             const GridSpec& grid, int halfwidth) {
    if (amplitudes.size() != grid.atoms()) throw std::invalid_argument("spectrum size does not match the grid");
    const double total = amplitudes.squaredNorm();
    if (!(total > 0)) return 0.0;
    const double theta = sc.elevation(k);
    double on = 0.0;
    for (int i = 0; i < grid.azimuth_bins; ++i) {
        const AngleVector psi = AngleVector::make(grid.azimuth(i), theta);
        const int centre = grid.nearest_doppler_bin(doppler_frequency(psi, sc.platform, sc.geometry.wavelength));
        for (int dj = -halfwidth; dj <= halfwidth; ++dj) {
            const int j = ((centre + dj) % grid.doppler_bins + grid.doppler_bins) % grid.doppler_bins;
            on += std::norm(amplitudes[grid.atom_index(i, j)]);
        }
    }
    return on / total;
}

}  // namespace cfastap
