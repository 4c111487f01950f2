#pragma once

#include <random>

#include "cfastap/clutter.hpp"
#include "cfastap/types.hpp"

namespace cfastap::testing {

// Table I array and platform, test cell at 1.5 H with `training` cells around it.
inline ClutterScenario table1(double crab_deg = 0.0, int training = 40) {
    ClutterScenario sc;
    sc.platform.crab_angle = crab_deg * kPi / 180.0;
    sc.range_cells = training_window(1.5 * sc.platform.height, range_cell_spacing(5e6), training);
    sc.test_cell_index = static_cast<std::size_t>(training / 2);
    return sc;
}

// M = N = 2, P = 4: NMP = 16.
inline ClutterScenario small_scenario() {
    ClutterScenario sc = table1(0.0, 2);
    sc.geometry.rings = 2;
    sc.geometry.elements_per_ring = 2;
    sc.platform.pulses = 4;
    sc.scatterers_per_ring = 8;
    return sc;
}

inline CVector random_cvector(Eigen::Index n, std::mt19937_64& rng) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = complex_normal(rng);
    return v;
}

inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = random_cvector(rows, rng);
    return m;
}

// G G^H / n + loading I with G n x n Gaussian.
inline CMatrix random_pd(Eigen::Index n, double loading, std::mt19937_64& rng) {
    const CMatrix g = random_cmatrix(n, n, rng);
    CMatrix r = g * g.adjoint() / static_cast<double>(n);
    r.diagonal().array() += loading;
    return r;
}

inline double rel_fro(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace cfastap::testing
