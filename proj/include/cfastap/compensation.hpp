#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfastap/clutter.hpp"
#include "cfastap/dictionary.hpp"
#include "cfastap/irls.hpp"
#include "cfastap/types.hpp"

namespace cfastap {

struct Transform {
    CMatrix matrix;
    std::size_t source_range = 0;
    std::size_t target_range = 0;
};

// Eigenpairs of a Hermitian matrix, eigenvalues descending. Each eigenvector
// is rotated so that its first non-negligible component is real positive.
struct EigenPairs {
    RVector values;
    CMatrix vectors;
};
EigenPairs sorted_eigenpairs(const CMatrix& hermitian);

// T = V_t L_t^{1/2} L_k^{-1/2} V_k^H, pairing eigenvectors by descending
// eigenvalue, so that T R_k T^H = R_t. Both inputs must be positive definite.
Transform transform_matrix(const Covariance& source, const Covariance& target, std::size_t source_range = 0,
                           std::size_t target_range = 0);

Snapshot apply_transform(const Transform& t, const Snapshot& x);

// (1/L) sum x_l x_l^H + loading * I, summed in the given order.
Covariance lsmi(std::span<const Snapshot> snapshots, double loading);

// Training cells adjacent to the test cell: L/2 below, the rest above,
// ascending range order. Throws if the scenario does not hold them.
std::vector<std::size_t> training_indices(const ClutterScenario& sc, int training_cells);

struct PipelineOptions {
    GridSpec grid;
    IrlsConfig irls;
    int training_cells = 40;
    double reconstruction_loading = 1.0;  // beta_L
    double lsmi_loading = 1.0;            // delta
    int workers = 1;
    bool record_trace = false;
    bool keep_intermediates = false;
};

struct CellDiagnostics {
    std::size_t range_index = 0;
    double slant_range = 0.0;
    int iterations = 0;
    bool converged = false;
    std::size_t support_size = 0;
    double residual = 0.0;
    bool dropped = false;
    std::string error;
    std::vector<IterationRecord> trace;
};

struct PipelineResult {
    Covariance estimate;
    SpectrumEstimate test_spectrum;
    std::vector<CellDiagnostics> cells;  // test cell first, then training cells in range order
    // Populated with keep_intermediates: reconstructed covariances of the test
    // cell and of every retained training cell, plus the training transforms.
    Covariance test_reconstruction;
    std::vector<Covariance> training_reconstructions;
    std::vector<Transform> transforms;
};

// Sparse-recovery registration: estimate every cell's spectrum, rebuild its
// covariance, register each training snapshot onto the test cell, and
// estimate the test-cell covariance by LSMI over the registered snapshots.
PipelineResult sr_rbc_pipeline(const ClutterScenario& sc, const PipelineOptions& opt);

// LSMI over the raw training snapshots.
Covariance plain_lsmi(const ClutterScenario& sc, int training_cells, double loading);

}  // namespace cfastap
