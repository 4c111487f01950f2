#include "cfastap/irls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cfastap/log.hpp"
#include "cfastap/simd/kernels.hpp"

namespace cfastap {
namespace {

constexpr double kMinRcond = 1e-14;

// Without a ridge a singular system is an error. With a ridge the system is
// positive definite in exact arithmetic, but once the weights concentrate the
// ridge can fall below roundoff relative to the Gram matrix; the minimum-norm
// update is still well defined, so solve through a truncated eigen-inverse.
CVector solve_hermitian_pd(const CMatrix& a, const CVector& b, double ridge) {
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() == Eigen::Success && llt.rcond() > kMinRcond) return llt.solve(b);
    if (ridge == 0.0) throw NumericalError("irls_step", "regularize or prune");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("irls_step", "regularize or prune");
    const RVector& lambda = es.eigenvalues();
    const double cutoff = lambda.cwiseAbs().maxCoeff() * static_cast<double>(a.rows()) *
                          std::numeric_limits<double>::epsilon();
    RVector inv(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) inv[i] = lambda[i] > cutoff ? 1.0 / lambda[i] : 0.0;
    return es.eigenvectors() * (inv.cast<cplx>().asDiagonal() * (es.eigenvectors().adjoint() * b));
}

double residual_norm(const ColumnSet& cols, const CVector& coeffs, const CVector& x) {
    const auto& k = simd::kernels();
    CVector r = x;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        k.caxpy(-coeffs[static_cast<Eigen::Index>(c)], cols.columns[c], r.data(), static_cast<std::size_t>(r.size()));
    }
    return std::sqrt(k.cnorm2(r.data(), static_cast<std::size_t>(r.size())));
}

}  // namespace

void IrlsConfig::validate() const {
    if (!(prune_ratio > 0 && prune_ratio < 1)) throw std::invalid_argument("prune ratio must lie in (0, 1)");
    if (!(convergence_tol > 0)) throw std::invalid_argument("convergence tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
    if (!(ridge >= 0)) throw std::invalid_argument("ridge must be non-negative");
}

CVector fourier_init(const Dictionary& dict, const Snapshot& x) {
    return adjoint_apply(ColumnSet::all(dict.atoms), x.data);
}

CVector irls_step(const ColumnSet& atoms, std::span<const double> weights, const CVector& x, double ridge) {
    if (atoms.size() == 0) throw std::invalid_argument("irls_step needs a non-empty support");
    if (weights.size() != atoms.size()) throw std::invalid_argument("irls_step: weight count mismatch");
    if (x.size() != atoms.rows) throw std::invalid_argument("irls_step: snapshot length mismatch");
    for (double w : weights) {
        if (!(w >= 0)) throw std::invalid_argument("irls_step: weights must be non-negative");
    }
    const auto& k = simd::kernels();
    const auto n = static_cast<std::size_t>(atoms.rows);
    const std::size_t kc = atoms.size();
    CVector out(static_cast<Eigen::Index>(kc));

    if (kc > n) {
        // Fat: y = (A A^H + ridge I)^{-1} x,  alpha_i = w_i^2 phi_i^H y.
        CMatrix g = weighted_gram(atoms, weights);
        g.diagonal().array() += ridge;
        const CVector y = solve_hermitian_pd(g, x, ridge);
        for (std::size_t c = 0; c < kc; ++c) {
            out[static_cast<Eigen::Index>(c)] = weights[c] * weights[c] * k.cdotc(atoms.columns[c], y.data(), n);
        }
    } else {
        // Tall or square: z = (A^H A + ridge I)^{-1} A^H x,  alpha = W z.
        const auto m = static_cast<Eigen::Index>(kc);
        CMatrix h(m, m);
        CVector b(m);
        for (Eigen::Index r = 0; r < m; ++r) {
            const auto ur = static_cast<std::size_t>(r);
            b[r] = weights[ur] * k.cdotc(atoms.columns[ur], x.data(), n);
            for (Eigen::Index s = 0; s <= r; ++s) {
                const auto us = static_cast<std::size_t>(s);
                const cplx v = weights[ur] * weights[us] * k.cdotc(atoms.columns[ur], atoms.columns[us], n);
                h(r, s) = v;
                h(s, r) = std::conj(v);
            }
            h(r, r) = h(r, r).real() + ridge;
        }
        const CVector z = solve_hermitian_pd(h, b, ridge);
        for (Eigen::Index r = 0; r < m; ++r) out[r] = weights[static_cast<std::size_t>(r)] * z[r];
    }
    return out;
}

CVector irls_step(const CMatrix& atoms, const RVector& weights, const CVector& x, double ridge) {
    return irls_step(ColumnSet::all(atoms), std::span<const double>(weights.data(), static_cast<std::size_t>(weights.size())),
                     x, ridge);
}

std::vector<Eigen::Index> prune_support(const CVector& alpha, double ratio) {
    if (alpha.size() == 0) throw std::invalid_argument("prune_support needs a non-empty spectrum");
    const double peak = alpha.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    if (!(peak > 0)) {
        warn("prune_support: all-zero spectrum, keeping the full index set");
        keep.resize(static_cast<std::size_t>(alpha.size()));
        for (Eigen::Index i = 0; i < alpha.size(); ++i) keep[static_cast<std::size_t>(i)] = i;
        return keep;
    }
    const double threshold = ratio * peak;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (std::abs(alpha[i]) >= threshold) keep.push_back(i);
    }
    return keep;
}

RVector update_weights(const CVector& alpha_on_support) { return alpha_on_support.cwiseAbs(); }

double relative_change(const CVector& current, const CVector& previous) {
    const double denom = current.norm();
    if (!(denom > 0)) return 0.0;
    return (current - previous).norm() / denom;
}

bool has_converged(const CVector& current, const CVector& previous, double tol) {
    if (!(current.norm() > 0)) {
        warn("has_converged: zero estimate, treating as converged");
        return true;
    }
    return relative_change(current, previous) <= tol;
}

SpectrumEstimate estimate_spectrum(const CMatrix& atoms, const CVector& x, const IrlsConfig& cfg, bool record_trace) {
    cfg.validate();
    if (x.size() != atoms.rows()) throw std::invalid_argument("estimate_spectrum: snapshot length mismatch");
    const Eigen::Index total = atoms.cols();

    CVector previous = adjoint_apply(ColumnSet::all(atoms), x);
    std::vector<Eigen::Index> support(static_cast<std::size_t>(total));
    for (Eigen::Index i = 0; i < total; ++i) support[static_cast<std::size_t>(i)] = i;
    RVector w = update_weights(previous);

    SpectrumEstimate est;
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        const ColumnSet cols = ColumnSet::subset(atoms, support);
        const CVector step = irls_step(cols, std::span<const double>(w.data(), static_cast<std::size_t>(w.size())), x,
                                       cfg.ridge);
        const auto keep = prune_support(step, cfg.prune_ratio);

        std::vector<Eigen::Index> next_support;
        CVector kept(static_cast<Eigen::Index>(keep.size()));
        CVector current = CVector::Zero(total);
        next_support.reserve(keep.size());
        for (std::size_t p = 0; p < keep.size(); ++p) {
            const Eigen::Index atom = support[static_cast<std::size_t>(keep[p])];
            next_support.push_back(atom);
            kept[static_cast<Eigen::Index>(p)] = step[keep[p]];
            current[atom] = step[keep[p]];
        }

        const double change = relative_change(current, previous);
        const bool done = has_converged(current, previous, cfg.convergence_tol);
        support = std::move(next_support);
        w = update_weights(kept);
        previous = std::move(current);
        est.iterations = it;
        est.converged = done;
        if (record_trace) {
            const double res = residual_norm(ColumnSet::subset(atoms, support), kept, x);
            est.trace.push_back({it, support.size(), res, change});
        }
        if (done) break;
    }

    est.amplitudes = std::move(previous);
    est.support = std::move(support);
    CVector on_support(static_cast<Eigen::Index>(est.support.size()));
    for (std::size_t p = 0; p < est.support.size(); ++p) on_support[static_cast<Eigen::Index>(p)] = est.amplitudes[est.support[p]];
    est.residual = residual_norm(ColumnSet::subset(atoms, est.support), on_support, x);
    return est;
}

SpectrumEstimate estimate_spectrum(const Dictionary& dict, const Snapshot& x, const IrlsConfig& cfg, bool record_trace) {
    return estimate_spectrum(dict.atoms, x.data, cfg, record_trace);
}

Covariance spectrum_to_ccm(const SpectrumEstimate& est, const CMatrix& atoms, double loading) {
    std::vector<double> mags;
    mags.reserve(est.support.size());
    for (Eigen::Index i : est.support) mags.push_back(std::abs(est.amplitudes[i]));
    CMatrix r = weighted_gram(ColumnSet::subset(atoms, est.support), mags);
    r.diagonal().array() += loading;
    return {std::move(r), "sparse reconstruction"};
}

Covariance spectrum_to_ccm(const SpectrumEstimate& est, const Dictionary& dict, double loading) {
    Covariance c = spectrum_to_ccm(est, dict.atoms, loading);
    c.label = "sparse reconstruction cell " + std::to_string(dict.range_index);
    return c;
}

}  // namespace cfastap
