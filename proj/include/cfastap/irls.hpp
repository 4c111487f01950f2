#pragma once

#include <vector>

#include "cfastap/clutter.hpp"
#include "cfastap/dictionary.hpp"
#include "cfastap/gram.hpp"
#include "cfastap/types.hpp"

namespace cfastap {

struct IrlsConfig {
    double prune_ratio = 1e-3;       // support threshold relative to max |alpha|
    double convergence_tol = 1e-3;   // relative L2 change between iterations
    int max_iterations = 30;
    double ridge = 1.0;              // regularization of the reweighted solve

    void validate() const;
};

struct IterationRecord {
    int iteration = 0;
    std::size_t support_size = 0;
    double residual = 0.0;
    double relative_change = 0.0;
};

struct SpectrumEstimate {
    CVector amplitudes;                  // full grid, zero off-support
    std::vector<Eigen::Index> support;   // ascending atom indices
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;               // ||x - Phi alpha||_2
    std::vector<IterationRecord> trace;  // filled when requested
};

// Matched-filter spectrum Phi^H x.
CVector fourier_init(const Dictionary& dict, const Snapshot& x);

// One reweighted minimum-norm solve on the retained atoms:
//   W A^H (A A^H + ridge I)^{-1} x,   A = Phi_Gamma W.
// For |Gamma| <= rows the equivalent W (A^H A + ridge I)^{-1} A^H x is used.
// Throws NumericalError("irls_step", "regularize or prune") when the system
// is singular with ridge = 0. With a positive ridge that has dropped below
// roundoff, the solve falls back to a truncated eigen-inverse.
CVector irls_step(const ColumnSet& atoms, std::span<const double> weights, const CVector& x, double ridge);
CVector irls_step(const CMatrix& atoms, const RVector& weights, const CVector& x, double ridge);

// Indices i with |alpha_i| >= ratio * max |alpha|. All-zero input keeps every
// index (with a warning).
std::vector<Eigen::Index> prune_support(const CVector& alpha, double ratio);

RVector update_weights(const CVector& alpha_on_support);

double relative_change(const CVector& current, const CVector& previous);
bool has_converged(const CVector& current, const CVector& previous, double tol);

SpectrumEstimate estimate_spectrum(const CMatrix& atoms, const CVector& x, const IrlsConfig& cfg,
                                   bool record_trace = false);
SpectrumEstimate estimate_spectrum(const Dictionary& dict, const Snapshot& x, const IrlsConfig& cfg,
                                   bool record_trace = false);

// sum_{i in support} |alpha_i|^2 phi_i phi_i^H + loading * I
Covariance spectrum_to_ccm(const SpectrumEstimate& est, const CMatrix& atoms, double loading);
Covariance spectrum_to_ccm(const SpectrumEstimate& est, const Dictionary& dict, double loading);

}  // namespace cfastap
