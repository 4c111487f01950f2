#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "cfastap/dictionary.hpp"
#include "cfastap/irls.hpp"
#include "cfastap/log.hpp"
#include "test_support.hpp"

using namespace cfastap;
using cfastap::testing::random_cmatrix;
using cfastap::testing::random_cvector;
using cfastap::testing::small_scenario;
using cfastap::testing::table1;

namespace {

// Unit-modulus random-phase dictionary.
CMatrix phase_dictionary(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ph(0, kTwoPi);
    CMatrix d(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) d(r, c) = std::polar(1.0, ph(rng));
    return d;
}

struct SubsetFit {
    double residual = INFINITY;
    std::vector<Eigen::Index> support;
    CVector coeffs;
};

// Exhaustive least squares over every support of size <= k.
SubsetFit best_subset(const CMatrix& d, const CVector& x, int k) {
    SubsetFit best;
    const auto n = static_cast<int>(d.cols());
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    for (int size = 1; size <= k; ++size) {
        std::fill(pick.begin(), pick.end(), 0);
        std::fill(pick.begin(), pick.begin() + size, 1);
        std::sort(pick.begin(), pick.end());
        do {
            std::vector<Eigen::Index> s;
            for (int i = 0; i < n; ++i)
                if (pick[i]) s.push_back(i);
            CMatrix a(d.rows(), size);
            for (int c = 0; c < size; ++c) a.col(c) = d.col(s[c]);
            const CVector z = a.colPivHouseholderQr().solve(x);
            const double r = (x - a * z).norm();
            if (r < best.residual) best = {r, s, z};
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return best;
}

class WarningCapture {
public:
    WarningCapture() : previous_(set_warning_sink([this](std::string_view m) { messages.emplace_back(m); })) {}
    ~WarningCapture() { set_warning_sink(previous_); }
    std::vector<std::string> messages;

private:
    WarningSink previous_;
};

}  // namespace

TEST(FourierInit, SingleAtomAndZero) {
    const ClutterScenario sc = table1();
    const GridSpec g = build_grid(sc.geometry, 16, 4, 4);
    const Dictionary d = build_dictionary(sc, 20, g);
    const Eigen::Index a = g.atom_index(10, 40);
    const CVector alpha = fourier_init(d, {d.atoms.col(a), 20});
    Eigen::Index best = -1;
    const double peak = alpha.cwiseAbs().maxCoeff(&best);
    EXPECT_EQ(best, a);
    EXPECT_NEAR(peak, 256.0, 1e-9);
    EXPECT_EQ(fourier_init(d, {CVector::Zero(256), 20}).norm(), 0.0);
}

TEST(FourierInit, NoiseSpectrumHasZeroMean) {
    const ClutterScenario sc = small_scenario();
    const Dictionary d = build_dictionary(sc, 0, build_grid(sc.geometry, sc.platform.pulses, 2, 2));
    std::mt19937_64 rng(12);
    CVector mean = CVector::Zero(d.atoms.cols());
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) mean += fourier_init(d, {random_cvector(16, rng), 0});
    mean /= draws;
    // Each entry has variance NMP = 16, so the mean has standard deviation 4/sqrt(1000).
    EXPECT_LT(mean.cwiseAbs().maxCoeff(), 5 * 4.0 / std::sqrt(draws));
}

TEST(IrlsStep, IdentityBasisReturnsSnapshot) {
    std::mt19937_64 rng(1);
    const CVector x = random_cvector(6, rng);
    const CVector alpha = irls_step(CMatrix::Identity(6, 6), RVector::Ones(6), x, 0.0);
    EXPECT_LT((alpha - x).norm(), 1e-14);
}

TEST(IrlsStep, SingleWeightClosedForm) {
    std::mt19937_64 rng(2);
    for (Eigen::Index cols : {4, 24}) {  // tall and fat supports
        const CMatrix d = phase_dictionary(8, cols, rng);
        const CVector x = random_cvector(8, rng);
        RVector w = RVector::Zero(cols);
        const Eigen::Index a = 3;
        w[a] = 1.7;
        const double ridge = 0.3;
        CVector alpha = irls_step(d, w, x, ridge);
        const cplx expected = d.col(a).dot(x) * w[a] * w[a] / (w[a] * w[a] * 8.0 + ridge);
        EXPECT_NEAR(std::abs(alpha[a] - expected), 0.0, 1e-12) << cols;
        alpha[a] = 0;
        EXPECT_LT(alpha.norm(), 1e-12);
    }
}

TEST(IrlsStep, TallAndFatFormsAgree) {
    std::mt19937_64 rng(3);
    // Square support sits on the tall branch; compare against the fat formula directly.
    const CMatrix d = random_cmatrix(8, 8, rng);
    const CVector x = random_cvector(8, rng);
    RVector w = RVector::Random(8).cwiseAbs();
    const CMatrix a = d * w.cast<cplx>().asDiagonal();
    CMatrix g = a * a.adjoint();
    g.diagonal().array() += 0.5;
    const CVector fat = w.cast<cplx>().asDiagonal() * (a.adjoint() * g.ldlt().solve(x));
    EXPECT_LT((irls_step(d, w, x, 0.5) - fat).norm(), 1e-10 * fat.norm());
}

TEST(IrlsStep, LargeRidgeShrinksToZero) {
    std::mt19937_64 rng(4);
    const CMatrix d = phase_dictionary(8, 24, rng);
    const CVector x = random_cvector(8, rng);
    const RVector w = RVector::Ones(24);
    EXPECT_LT(irls_step(d, w, x, 1e12).norm(), 1e-9 * x.norm());
}

TEST(IrlsStep, SingularSystemNeedsRegularization) {
    std::mt19937_64 rng(5);
    const CMatrix d = phase_dictionary(8, 24, rng);
    RVector w = RVector::Zero(24);
    w[0] = 1.0;
    try {
        irls_step(d, w, random_cvector(8, rng), 0.0);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.stage(), "irls_step");
        EXPECT_STREQ(e.what(), "regularize or prune");
    }
}

TEST(PruneSupport, Examples) {
    CVector a(3);
    a << 1.0, 0.5, 1e-6;
    EXPECT_EQ(prune_support(a, 1e-3), (std::vector<Eigen::Index>{0, 1}));
    EXPECT_EQ(prune_support(CVector::Constant(4, cplx(0, 2)), 1e-3).size(), 4u);
    CVector spike = CVector::Zero(9);
    spike[6] = cplx(1e-20, 0);
    EXPECT_EQ(prune_support(spike, 1e-3), (std::vector<Eigen::Index>{6}));
    WarningCapture cap;
    EXPECT_EQ(prune_support(CVector::Zero(5), 1e-3).size(), 5u);
    EXPECT_EQ(cap.messages.size(), 1u);
}

TEST(UpdateWeights, MagnitudeOnly) {
    CVector a(2);
    a << 1.0, cplx(0, 2);
    const RVector w = update_weights(a);
    EXPECT_DOUBLE_EQ(w[0], 1.0);
    EXPECT_DOUBLE_EQ(w[1], 2.0);
    EXPECT_TRUE(update_weights(CVector::Ones(5)) == RVector::Ones(5));
    std::mt19937_64 rng(6);
    EXPECT_GE(update_weights(random_cvector(50, rng)).minCoeff(), 0.0);
}

TEST(HasConverged, Examples) {
    std::mt19937_64 rng(7);
    const CVector a = random_cvector(10, rng);
    EXPECT_TRUE(has_converged(a, a, 1e-3));
    EXPECT_FALSE(has_converged(2.0 * a, a, 1e-3));
    EXPECT_DOUBLE_EQ(relative_change(2.0 * a, a), 0.5);
    CVector now(1), before(1);
    now << 1.0;
    before << 0.5;
    EXPECT_TRUE(has_converged(now, before, 0.5));
    WarningCapture cap;
    EXPECT_TRUE(has_converged(CVector::Zero(3), a.head(3), 1e-3));
    EXPECT_EQ(cap.messages.size(), 1u);
}

TEST(EstimateSpectrum, SingleOnGridScatterer) {
    const ClutterScenario sc = table1();
    const GridSpec g = build_grid(sc.geometry, 16, 4, 4);
    const Dictionary d = build_dictionary(sc, 20, g);
    IrlsConfig cfg;
    cfg.ridge = 1e-10;
    for (Eigen::Index a : {g.atom_index(0, 0), g.atom_index(17, 50), g.atom_index(63, 31)}) {
        const SpectrumEstimate est = estimate_spectrum(d, {3.0 * d.atoms.col(a), 20}, cfg);
        ASSERT_EQ(est.support, (std::vector<Eigen::Index>{a}));
        EXPECT_NEAR(std::abs(est.amplitudes[a] - 3.0), 0.0, 1e-6);
        EXPECT_LE(est.residual, 1e-8);
        EXPECT_TRUE(est.converged);
    }
}

TEST(EstimateSpectrum, MatchesBestTwoSubsetOnTinyInstances) {
    std::mt19937_64 rng(8);
    IrlsConfig cfg;
    cfg.ridge = 0.0;
    cfg.convergence_tol = 1e-10;
    cfg.max_iterations = 200;
    int matched = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const CMatrix d = phase_dictionary(6, 12, rng);
        std::vector<Eigen::Index> idx(12);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        const CVector x = complex_normal(rng) * d.col(idx[0]) + complex_normal(rng) * d.col(idx[1]);
        const SubsetFit oracle = best_subset(d, x, 2);
        const SpectrumEstimate est = estimate_spectrum(d, x, cfg);
        bool ok = est.support == oracle.support;
        for (std::size_t i = 0; ok && i < oracle.support.size(); ++i) {
            ok = std::abs(est.amplitudes[oracle.support[i]] - oracle.coeffs[static_cast<Eigen::Index>(i)]) <= 1e-6;
        }
        matched += ok;
    }
    EXPECT_GE(matched, 18) << "matched " << matched << " of " << trials;
}

TEST(EstimateSpectrum, SupportShrinksMonotonically) {
    const ClutterScenario sc = table1(30.0);
    const Dictionary d = build_dictionary(sc, 20, build_grid(sc.geometry, 16, 4, 4));
    const SpectrumEstimate est = estimate_spectrum(d, clutter_snapshot(sc, 20), IrlsConfig{}, true);
    ASSERT_EQ(est.trace.size(), static_cast<std::size_t>(est.iterations));
    std::size_t previous = static_cast<std::size_t>(d.atoms.cols());
    for (const auto& r : est.trace) {
        EXPECT_LE(r.support_size, previous);
        previous = r.support_size;
    }
    // Off-support amplitudes are exactly zero; the support is sorted.
    std::vector<bool> on(static_cast<std::size_t>(d.atoms.cols()), false);
    for (auto i : est.support) on[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < d.atoms.cols(); ++i)
        if (!on[static_cast<std::size_t>(i)]) EXPECT_EQ(est.amplitudes[i], cplx(0.0));
    EXPECT_TRUE(std::is_sorted(est.support.begin(), est.support.end()));
    EXPECT_LE(est.support.size(), 256u);
}

TEST(EstimateSpectrum, FixedSupportFitIsNonIncreasing) {
    std::mt19937_64 rng(9);
    const CMatrix d = phase_dictionary(8, 5, rng);
    const CVector x = random_cvector(8, rng);
    RVector w = RVector::Ones(5);
    double previous = INFINITY;
    for (int it = 0; it < 10; ++it) {
        const CVector alpha = irls_step(d, w, x, 0.0);
        const double r = (x - d * alpha).norm();
        EXPECT_LE(r, previous + 1e-12);
        previous = r;
        w = update_weights(alpha);
    }
}

TEST(EstimateSpectrum, NoiseOnlyExplainsLittle) {
    ClutterScenario sc = table1();
    const Dictionary d = build_dictionary(sc, 20, build_grid(sc.geometry, 16, 4, 4));
    std::mt19937_64 rng(10);
    for (int seed = 0; seed < 3; ++seed) {
        const CVector x = random_cvector(256, rng);
        const SpectrumEstimate est = estimate_spectrum(d, {x, 20}, IrlsConfig{});
        EXPECT_LT(est.support.size(), 256u);
        EXPECT_GT(est.residual, 0.5 * x.norm());
    }
}

TEST(SpectrumToCcm, Examples) {
    std::mt19937_64 rng(11);
    const CMatrix d = phase_dictionary(8, 24, rng);
    SpectrumEstimate est;
    est.amplitudes = CVector::Zero(24);
    est.support = {};
    EXPECT_LT((spectrum_to_ccm(est, d, 0.7).matrix - 0.7 * CMatrix::Identity(8, 8)).norm(), 1e-15);

    est.amplitudes[5] = cplx(0, 1);
    est.support = {5};
    const CMatrix expect = d.col(5) * d.col(5).adjoint() + 0.2 * CMatrix::Identity(8, 8);
    EXPECT_LT((spectrum_to_ccm(est, d, 0.2).matrix - expect).norm(), 1e-12);

    est.amplitudes = random_cvector(24, rng);
    est.support.resize(24);
    std::iota(est.support.begin(), est.support.end(), 0);
    const CMatrix r = spectrum_to_ccm(est, d, 0.3).matrix;
    EXPECT_NEAR(r.trace().real(), 8 * est.amplitudes.squaredNorm() + 8 * 0.3, 1e-10);
    EXPECT_LT((r - r.adjoint()).norm(), 1e-12 * r.norm());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    EXPECT_GE(es.eigenvalues().minCoeff(), 0.3 - 1e-9);
}

TEST(IrlsConfig, Validation) {
    IrlsConfig c;
    EXPECT_NO_THROW(c.validate());
    c.prune_ratio = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.max_iterations = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.ridge = -1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}
