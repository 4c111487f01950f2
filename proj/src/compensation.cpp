#include "cfastap/compensation.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "cfastap/gram.hpp"
#include "cfastap/log.hpp"
#include "cfastap/parallel.hpp"

namespace cfastap {
namespace {

constexpr double kPhaseReferenceFloor = 1e-10;
constexpr double kMaxDroppedFraction = 0.10;

struct CellWork {
    Snapshot snapshot;
    SpectrumEstimate spectrum;
    Covariance reconstruction;
};

CellWork process_cell(const ClutterScenario& sc, std::size_t k, const PipelineOptions& opt) {
    CellWork w;
    w.snapshot = clutter_snapshot(sc, k);
    const Dictionary dict = build_dictionary(sc, k, opt.grid);
    w.spectrum = estimate_spectrum(dict, w.snapshot, opt.irls, opt.record_trace);
    w.reconstruction = spectrum_to_ccm(w.spectrum, dict, opt.reconstruction_loading);
    return w;
}

CellDiagnostics diagnostics_for(const ClutterScenario& sc, std::size_t k, const SpectrumEstimate& s) {
    CellDiagnostics d;
    d.range_index = k;
    d.slant_range = sc.slant_range(k);
    d.iterations = s.iterations;
    d.converged = s.converged;
    d.support_size = s.support.size();
    d.residual = s.residual;
    d.trace = s.trace;
    return d;
}

}  // namespace

EigenPairs sorted_eigenpairs(const CMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(hermitian));
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition", "eigensolver did not converge");
    const Eigen::Index n = hermitian.rows();
    EigenPairs out{RVector(n), CMatrix(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = n - 1 - i;
        out.values[i] = es.eigenvalues()[src];
        auto v = out.vectors.col(i);
        v = es.eigenvectors().col(src);
        for (Eigen::Index r = 0; r < n; ++r) {
            const double mag = std::abs(v[r]);
            if (mag > kPhaseReferenceFloor) {
                v *= std::conj(v[r]) / mag;
                v[r] = mag;
                break;
            }
        }
    }
    return out;
}

Transform transform_matrix(const Covariance& source, const Covariance& target, std::size_t source_range,
                           std::size_t target_range) {
    if (source.dim() != target.dim()) throw std::invalid_argument("transform_matrix: covariance sizes differ");
    const EigenPairs ek = sorted_eigenpairs(source.matrix);
    const EigenPairs et = sorted_eigenpairs(target.matrix);
    const Eigen::Index n = source.dim();
    if (!(ek.values[n - 1] > 0) || !(et.values[n - 1] > 0)) {
        throw NumericalError("transform", "load covariance before transforming");
    }
    const RVector gains = (et.values.array() / ek.values.array()).sqrt();
    Transform t;
    t.matrix = et.vectors * gains.cast<cplx>().asDiagonal() * ek.vectors.adjoint();
    t.source_range = source_range;
    t.target_range = target_range;
    return t;
}

Snapshot apply_transform(const Transform& t, const Snapshot& x) {
    if (t.matrix.cols() != x.data.size()) throw std::invalid_argument("apply_transform: size mismatch");
    return {t.matrix * x.data, x.range_index};
}

Covariance lsmi(std::span<const Snapshot> snapshots, double loading) {
    if (snapshots.empty()) throw std::invalid_argument("lsmi needs at least one snapshot");
    ColumnSet cols;
    cols.rows = snapshots.front().data.size();
    for (const auto& s : snapshots) {
        if (s.data.size() != cols.rows) throw std::invalid_argument("lsmi: snapshot lengths differ");
        cols.columns.push_back(s.data.data());
    }
    const std::vector<double> weights(snapshots.size(), 1.0 / std::sqrt(static_cast<double>(snapshots.size())));
    CMatrix r = weighted_gram(cols, weights);
    r.diagonal().array() += loading;
    return {std::move(r), "lsmi"};
}

std::vector<std::size_t> training_indices(const ClutterScenario& sc, int training_cells) {
    if (training_cells < 0) throw std::invalid_argument("training cell count must be non-negative");
    const auto below = static_cast<std::size_t>(training_cells / 2);
    const auto above = static_cast<std::size_t>(training_cells) - below;
    const std::size_t t = sc.test_cell_index;
    if (t < below || t + above >= sc.range_cells.size()) {
        throw std::invalid_argument("scenario holds fewer than " + std::to_string(training_cells) +
                                    " training cells around the test cell");
    }
    std::vector<std::size_t> out;
    for (std::size_t k = t - below; k <= t + above; ++k)
        if (k != t) out.push_back(k);
    return out;
}

PipelineResult sr_rbc_pipeline(const ClutterScenario& sc, const PipelineOptions& opt) {
    sc.validate();
    const auto training = training_indices(sc, opt.training_cells);
    const std::size_t t = sc.test_cell_index;

    PipelineResult result;
    CellWork test;
    try {
        test = process_cell(sc, t, opt);
    } catch (const NumericalError& e) {
        throw NumericalError("test cell " + std::to_string(t) + ": " + e.stage(), e.what());
    }
    result.cells.push_back(diagnostics_for(sc, t, test.spectrum));
    result.test_spectrum = test.spectrum;

    if (training.empty()) {
        result.estimate = test.reconstruction;
        result.estimate.label = "sr-rbc";
        if (opt.keep_intermediates) result.test_reconstruction = test.reconstruction;
        return result;
    }

    std::vector<std::optional<CellWork>> work(training.size());
    std::vector<std::optional<Transform>> transforms(training.size());
    std::vector<std::string> errors(training.size());
    parallel_for(training.size(), opt.workers, [&](std::size_t i) {
        const std::size_t k = training[i];
        try {
            CellWork w = process_cell(sc, k, opt);
            transforms[i] = transform_matrix(w.reconstruction, test.reconstruction, k, t);
            work[i] = std::move(w);
        } catch (const NumericalError& e) {
            errors[i] = e.stage() + ": " + e.what();
        }
    });

    std::size_t dropped = 0;
    std::vector<Snapshot> registered;
    registered.reserve(training.size());
    for (std::size_t i = 0; i < training.size(); ++i) {
        const std::size_t k = training[i];
        if (!work[i] || !transforms[i]) {
            ++dropped;
            CellDiagnostics d;
            d.range_index = k;
            d.slant_range = sc.slant_range(k);
            d.dropped = true;
            d.error = errors[i];
            result.cells.push_back(std::move(d));
            warn("dropping range cell " + std::to_string(k) + " (" + errors[i] + ")");
            continue;
        }
        result.cells.push_back(diagnostics_for(sc, k, work[i]->spectrum));
        registered.push_back(apply_transform(*transforms[i], work[i]->snapshot));
        if (opt.keep_intermediates) {
            result.training_reconstructions.push_back(std::move(work[i]->reconstruction));
            result.transforms.push_back(std::move(*transforms[i]));
        }
    }
    if (static_cast<double>(dropped) > kMaxDroppedFraction * static_cast<double>(training.size())) {
        throw NumericalError("sr-rbc", std::to_string(dropped) + " of " + std::to_string(training.size()) +
                                           " training cells failed");
    }
    result.estimate = lsmi(registered, opt.lsmi_loading);
    result.estimate.label = "sr-rbc";
    if (opt.keep_intermediates) result.test_reconstruction = std::move(test.reconstruction);
    return result;
}

Covariance plain_lsmi(const ClutterScenario& sc, int training_cells, double loading) {
    std::vector<Snapshot> snaps;
    for (std::size_t k : training_indices(sc, training_cells)) snaps.push_back(clutter_snapshot(sc, k));
    if (snaps.empty()) throw std::invalid_argument("plain LSMI needs at least one training cell");
    Covariance c = lsmi(snaps, loading);
    c.label = "lsmi";
    return c;
}

}  // namespace cfastap
