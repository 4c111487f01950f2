#pragma once

#include "cfastap/geometry.hpp"
#include "cfastap/types.hpp"

namespace cfastap {

enum class SteeringKind { spatial, temporal, space_time };

// Unit-modulus steering vector. Spatial entries are ordered with the element
// index fastest and the ring index slower; space-time vectors stack one
// spatial block per pulse (pulse index slowest).
struct SteeringVector {
    CVector values;
    SteeringKind kind = SteeringKind::spatial;

    Eigen::Index size() const { return values.size(); }
};

SteeringVector spatial_steering(const ArrayGeometry& geom, const AngleVector& psi);

// Normalized Doppler in cycles per PRI of a stationary scatterer at psi.
// Multiply by 1/pri for Hz.
double doppler_frequency(const AngleVector& psi, const PlatformState& p, double wavelength);

SteeringVector temporal_steering(double doppler, int pulses);

// temporal (x) spatial Kronecker product.
SteeringVector kron(const SteeringVector& temporal, const SteeringVector& spatial);

// Stationary-scatterer response: Doppler follows from the platform motion.
SteeringVector space_time_steering(const ArrayGeometry& geom, const AngleVector& psi, const PlatformState& p);

// Moving-target response: same spatial part, Doppler given explicitly.
SteeringVector space_time_steering(const ArrayGeometry& geom, const AngleVector& psi, int pulses, double doppler);

}  // namespace cfastap
