#include "cfastap/dictionary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cfastap/log.hpp"

namespace cfastap {

int GridSpec::nearest_doppler_bin(double f) const {
    const long j = std::lround((f + 0.5) * doppler_bins);
    const long n = doppler_bins;
    return static_cast<int>(((j % n) + n) % n);
}

GridSpec build_grid(const ArrayGeometry& geom, int pulses, double zoom_spatial, double zoom_temporal) {
    if (!(zoom_spatial >= 1.0) || !(zoom_temporal >= 1.0)) {
        throw std::invalid_argument("dictionary not overcomplete");
    }
    GridSpec g;
    g.zoom_spatial = zoom_spatial;
    g.zoom_temporal = zoom_temporal;
    g.azimuth_bins = static_cast<int>(std::lround(zoom_spatial * geom.channels()));
    g.doppler_bins = static_cast<int>(std::lround(zoom_temporal * pulses));
    if (g.atoms() <= geom.channels() * pulses) {
        warn("angle-Doppler grid is not overcomplete (" + std::to_string(g.atoms()) + " atoms)");
    }
    return g;
}

Dictionary build_dictionary(const ClutterScenario& sc, std::size_t k, const GridSpec& grid) {
    const int nm = sc.geometry.channels();
    const int pulses = sc.platform.pulses;
    Dictionary d;
    d.grid = grid;
    d.range_index = k;
    d.elevation = sc.elevation(k);
    d.spatial.resize(nm, grid.azimuth_bins);
    for (int i = 0; i < grid.azimuth_bins; ++i) {
        d.spatial.col(i) = spatial_steering(sc.geometry, AngleVector::make(grid.azimuth(i), d.elevation)).values;
    }
    d.temporal.resize(pulses, grid.doppler_bins);
    for (int j = 0; j < grid.doppler_bins; ++j) d.temporal.col(j) = temporal_steering(grid.doppler(j), pulses).values;

    d.atoms.resize(static_cast<Eigen::Index>(nm) * pulses, grid.atoms());
    for (int j = 0; j < grid.doppler_bins; ++j) {
        for (int i = 0; i < grid.azimuth_bins; ++i) {
            auto col = d.atoms.col(grid.atom_index(i, j));
            for (int p = 0; p < pulses; ++p) col.segment(p * nm, nm) = d.temporal(p, j) * d.spatial.col(i);
        }
    }
    return d;
}

double mutual_coherence(const Dictionary& dict) {
    auto max_offdiag = [](const CMatrix& f) {
        const CMatrix g = f.adjoint() * f;
        double m = 0.0;
        for (Eigen::Index r = 0; r < g.rows(); ++r)
            for (Eigen::Index c = 0; c < g.cols(); ++c)
                if (r != c) m = std::max(m, std::abs(g(r, c)));
        return m;
    };
    const double nm = static_cast<double>(dict.spatial.rows());
    const double p = static_cast<double>(dict.temporal.rows());
    // |(t (x) s)^H (t' (x) s')| = |t^H t'| |s^H s'|, and the diagonal factors are p and nm.
    const double ms = max_offdiag(dict.spatial);
    const double mt = max_offdiag(dict.temporal);
    return std::max({ms * p, nm * mt, ms * mt}) / (nm * p);
}

}  // namespace cfastap
