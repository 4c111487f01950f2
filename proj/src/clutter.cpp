#include "cfastap/clutter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cfastap/gram.hpp"
#include "cfastap/simd/kernels.hpp"

namespace cfastap {
namespace {

constexpr double kBacklobePowerGain = 1e-2;

double unit_clutter_trace(const ClutterScenario& sc, std::size_t k) {
    const double theta = sc.elevation(k);
    double trace = 0.0;
    for (int q = 0; q < sc.scatterers_per_ring; ++q) {
        const auto psi = AngleVector::make(kTwoPi * q / sc.scatterers_per_ring, theta);
        trace += element_gain(sc.geometry, sc.gain, psi).squaredNorm();
    }
    return trace * sc.platform.pulses;
}

CMatrix taper_matrix(const ClutterScenario& sc) {
    const int nm = sc.geometry.channels();
    const int pulses = sc.platform.pulses;
    const double c = sc.taper.spatial_consistency;
    const double rho = sc.taper.temporal_correlation;
    RMatrix as = RMatrix::Constant(nm, nm, c);
    as.diagonal().setOnes();
    RMatrix at(pulses, pulses);
    for (int p = 0; p < pulses; ++p)
        for (int q = 0; q < pulses; ++q) at(p, q) = std::pow(rho, std::abs(p - q));
    RMatrix a(nm * pulses, nm * pulses);
    for (int p = 0; p < pulses; ++p)
        for (int q = 0; q < pulses; ++q) a.block(p * nm, q * nm, nm, nm) = at(p, q) * as;
    return a.cast<cplx>();
}

// One draw of the space-time taper a_t (x) a_s with E[a a^H] = A_t (x) A_s.
CVector taper_draw(const ClutterScenario& sc, std::mt19937_64& rng) {
    const int nm = sc.geometry.channels();
    const int pulses = sc.platform.pulses;
    const double c = sc.taper.spatial_consistency;
    const double rho = sc.taper.temporal_correlation;
    const cplx common = complex_normal(rng);
    CVector as(nm);
    for (int i = 0; i < nm; ++i) as[i] = std::sqrt(c) * common + std::sqrt(1.0 - c) * complex_normal(rng);
    CVector at(pulses);
    at[0] = complex_normal(rng);
    for (int p = 1; p < pulses; ++p) at[p] = rho * at[p - 1] + std::sqrt(1.0 - rho * rho) * complex_normal(rng);
    CVector a(nm * pulses);
    for (int p = 0; p < pulses; ++p) a.segment(p * nm, nm) = at[p] * as;
    return a;
}

}  // namespace

double ClutterScenario::slant_range(std::size_t k) const {
    if (k >= range_cells.size()) throw std::out_of_range("range cell index out of range: " + std::to_string(k));
    return range_cells[k];
}

double ClutterScenario::elevation(std::size_t k) const {
    return elevation_for_slant_range(platform.height, slant_range(k));
}

void ClutterScenario::validate() const {
    geometry.validate();
    platform.validate();
    if (scatterers_per_ring < 0) throw std::invalid_argument("scatterer count must be non-negative");
    if (!std::isfinite(cnr_db)) throw std::invalid_argument("CNR must be finite");
    if (!(noise_power >= 0)) throw std::invalid_argument("noise power must be non-negative");
    if (range_cells.empty()) throw std::invalid_argument("scenario has no range cells");
    for (std::size_t i = 0; i < range_cells.size(); ++i) {
        if (range_cells[i] < platform.height) throw std::invalid_argument("range above horizon geometry");
        if (i > 0 && !(range_cells[i] > range_cells[i - 1])) {
            throw std::invalid_argument("range cells must be strictly increasing");
        }
    }
    if (test_cell_index >= range_cells.size()) throw std::invalid_argument("test cell index out of range");
    if (taper.kind == TaperModel::Kind::configured) {
        if (!(taper.spatial_consistency >= 0 && taper.spatial_consistency <= 1) ||
            !(taper.temporal_correlation >= 0 && taper.temporal_correlation <= 1)) {
            throw std::invalid_argument("taper coefficients must lie in [0, 1]");
        }
    }
}

double range_cell_spacing(double sample_rate) {
    if (!(sample_rate > 0)) throw std::invalid_argument("sample rate must be positive");
    return kSpeedOfLight / (2.0 * sample_rate);
}

std::vector<double> training_window(double test_range, double spacing, int training_cells) {
    if (training_cells < 0) throw std::invalid_argument("training cell count must be non-negative");
    const int below = training_cells / 2;
    std::vector<double> ranges;
    ranges.reserve(static_cast<std::size_t>(training_cells) + 1);
    for (int i = 0; i <= training_cells; ++i) ranges.push_back(test_range + spacing * (i - below));
    return ranges;
}

RVector element_gain(const ArrayGeometry& geom, GainModel model, const AngleVector& psi) {
    RVector g = RVector::Ones(geom.channels());
    if (model == GainModel::isotropic) return g;
    const Vec3 k = wavevector(psi);
    Eigen::Index idx = 0;
    for (int m = 1; m <= geom.rings; ++m) {
        for (int n = 1; n <= geom.elements_per_ring; ++n) {
            const double a = kTwoPi * (n - 1) / geom.elements_per_ring;
            const Vec3 normal(std::sin(a), 0.0, -std::cos(a));
            g[idx++] = std::sqrt(std::max(k.dot(normal), kBacklobePowerGain));
        }
    }
    return g;
}

CVector scatterer_response(const ClutterScenario& sc, const AngleVector& psi) {
    CVector h = space_time_steering(sc.geometry, psi, sc.platform).values;
    if (sc.gain == GainModel::isotropic) return h;
    const RVector g = element_gain(sc.geometry, sc.gain, psi);
    const int nm = sc.geometry.channels();
    for (int p = 0; p < sc.platform.pulses; ++p) h.segment(p * nm, nm).array() *= g.array().cast<cplx>();
    return h;
}

std::vector<Scatterer> iso_range_scatterers(const ClutterScenario& sc, std::size_t k) {
    const double theta = sc.elevation(k);
    std::vector<Scatterer> out;
    if (sc.scatterers_per_ring == 0) return out;
    const double power = cnr_scale(unit_clutter_trace(sc, k), sc.space_time_dim(), sc.noise_power, sc.cnr_db);
    const double amplitude = std::sqrt(power);
    out.reserve(static_cast<std::size_t>(sc.scatterers_per_ring));
    for (int q = 0; q < sc.scatterers_per_ring; ++q) {
        out.push_back({AngleVector::make(kTwoPi * q / sc.scatterers_per_ring, theta), amplitude});
    }
    return out;
}

double cnr_scale(double clutter_trace, int space_time_dim, double noise_power, double cnr_db) {
    if (!(clutter_trace > 0)) throw std::invalid_argument("zero clutter covariance cannot be scaled to a CNR");
    const double reference = noise_power > 0 ? noise_power : 1.0;
    return db_to_linear(cnr_db) * space_time_dim * reference / clutter_trace;
}

double cnr_scale(const Covariance& unnormalized_clutter, double noise_power, double cnr_db) {
    return cnr_scale(unnormalized_clutter.matrix.trace().real(), static_cast<int>(unnormalized_clutter.dim()),
                     noise_power, cnr_db);
}

Covariance clairvoyant_ccm(const ClutterScenario& sc, std::size_t k) {
    const int dim = sc.space_time_dim();
    const auto scatterers = iso_range_scatterers(sc, k);
    CMatrix responses(dim, static_cast<Eigen::Index>(scatterers.size()));
    std::vector<double> amplitudes;
    amplitudes.reserve(scatterers.size());
    for (std::size_t q = 0; q < scatterers.size(); ++q) {
        responses.col(static_cast<Eigen::Index>(q)) = scatterer_response(sc, scatterers[q].angle);
        amplitudes.push_back(scatterers[q].amplitude);
    }
    CMatrix r = weighted_gram(ColumnSet::all(responses), amplitudes);
    if (sc.taper.kind == TaperModel::Kind::configured) r = r.cwiseProduct(taper_matrix(sc));
    r.diagonal().array() += sc.noise_power;
    return {std::move(r), "clairvoyant cell " + std::to_string(k)};
}

std::uint64_t cell_seed(std::uint64_t scenario_seed, std::size_t k) {
    // splitmix64 over (seed, k)
    std::uint64_t z = scenario_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(k) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

cplx complex_normal(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

Snapshot clutter_snapshot(const ClutterScenario& sc, std::size_t k, std::mt19937_64& rng) {
    const int dim = sc.space_time_dim();
    const auto& kern = simd::kernels();
    Snapshot snap{CVector::Zero(dim), k};
    for (const auto& s : iso_range_scatterers(sc, k)) {
        const cplx zeta = complex_normal(rng);
        CVector h = scatterer_response(sc, s.angle);
        if (sc.taper.kind == TaperModel::Kind::configured) h.array() *= taper_draw(sc, rng).array();
        kern.caxpy(zeta * s.amplitude, h.data(), snap.data.data(), static_cast<std::size_t>(dim));
    }
    const double sigma = std::sqrt(sc.noise_power);
    for (int i = 0; i < dim; ++i) snap.data[i] += sigma * complex_normal(rng);
    return snap;
}

Snapshot clutter_snapshot(const ClutterScenario& sc, std::size_t k) {
    std::mt19937_64 rng(cell_seed(sc.seed, k));
    return clutter_snapshot(sc, k, rng);
}

}  // namespace cfastap
