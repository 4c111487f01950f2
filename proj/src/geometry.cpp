#include "cfastap/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfastap {

AngleVector AngleVector::make(double azimuth, double elevation) {
    if (!(elevation >= -kPi / 2 && elevation <= kPi / 2)) {
        throw std::invalid_argument("elevation outside [-pi/2, pi/2]: " + std::to_string(elevation));
    }
    double phi = std::fmod(azimuth, kTwoPi);
    if (phi < 0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;
    return {phi, elevation};
}

void ArrayGeometry::validate() const {
    if (rings < 1 || elements_per_ring < 1) throw std::invalid_argument("array needs at least one ring and one element");
    if (!(ring_spacing > 0) || !(ring_radius > 0) || !(wavelength > 0)) {
        throw std::invalid_argument("ring spacing, ring radius and wavelength must be positive");
    }
}

void PlatformState::validate() const {
    if (!(speed >= 0)) throw std::invalid_argument("platform speed must be non-negative");
    if (!(height > 0)) throw std::invalid_argument("platform height must be positive");
    if (!(pri > 0)) throw std::invalid_argument("pulse repetition interval must be positive");
    if (pulses < 2) throw std::invalid_argument("at least two pulses are required");
}

Vec3 wavevector(const AngleVector& psi) {
    const double ct = std::cos(psi.elevation);
    return {ct * std::cos(psi.azimuth), ct * std::sin(psi.azimuth), -std::sin(psi.elevation)};
}

Vec3 element_position(const ArrayGeometry& geom, int m, int n) {
    if (m < 1 || m > geom.rings || n < 1 || n > geom.elements_per_ring) {
        throw std::out_of_range("element index (" + std::to_string(m) + ", " + std::to_string(n) + ") out of range");
    }
    const double a = kTwoPi * (n - 1) / geom.elements_per_ring;
    return {geom.ring_radius * std::sin(a), geom.ring_spacing * (m - 1), -geom.ring_radius * std::cos(a)};
}

Vec3 platform_velocity(const PlatformState& p) {
    return {-p.speed * std::sin(p.crab_angle), p.speed * std::cos(p.crab_angle), 0.0};
}

double elevation_for_slant_range(double height, double slant_range) {
    if (!(height > 0)) throw std::invalid_argument("platform height must be positive");
    if (slant_range < height) throw std::invalid_argument("range above horizon geometry");
    return std::asin(height / slant_range);
}

}  // namespace cfastap
