#include "cfastap/steering.hpp"

#include <cmath>
#include <stdexcept>

namespace cfastap {

SteeringVector spatial_steering(const ArrayGeometry& geom, const AngleVector& psi) {
    const Vec3 k = wavevector(psi);
    const double scale = kTwoPi / geom.wavelength;
    SteeringVector out{CVector(geom.channels()), SteeringKind::spatial};
    Eigen::Index idx = 0;
    for (int m = 1; m <= geom.rings; ++m) {
        for (int n = 1; n <= geom.elements_per_ring; ++n) {
            out.values[idx++] = std::polar(1.0, scale * k.dot(element_position(geom, m, n)));
        }
    }
    return out;
}

double doppler_frequency(const AngleVector& psi, const PlatformState& p, double wavelength) {
    return 2.0 * wavevector(psi).dot(platform_velocity(p)) * p.pri / wavelength;
}

SteeringVector temporal_steering(double doppler, int pulses) {
    if (pulses < 2) throw std::invalid_argument("temporal steering needs at least two pulses");
    SteeringVector out{CVector(pulses), SteeringKind::temporal};
    out.values[0] = 1.0;
    for (int p = 1; p < pulses; ++p) out.values[p] = std::polar(1.0, kTwoPi * doppler * p);
    return out;
}

SteeringVector kron(const SteeringVector& temporal, const SteeringVector& spatial) {
    const Eigen::Index nt = temporal.size();
    const Eigen::Index ns = spatial.size();
    SteeringVector out{CVector(nt * ns), SteeringKind::space_time};
    for (Eigen::Index p = 0; p < nt; ++p) out.values.segment(p * ns, ns) = temporal.values[p] * spatial.values;
    return out;
}

SteeringVector space_time_steering(const ArrayGeometry& geom, const AngleVector& psi, const PlatformState& p) {
    return kron(temporal_steering(doppler_frequency(psi, p, geom.wavelength), p.pulses), spatial_steering(geom, psi));
}

SteeringVector space_time_steering(const ArrayGeometry& geom, const AngleVector& psi, int pulses, double doppler) {
    return kron(temporal_steering(doppler, pulses), spatial_steering(geom, psi));
}

}  // namespace cfastap
