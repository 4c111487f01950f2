#pragma once

#include "cfastap/types.hpp"

namespace cfastap {

// Azimuth phi in [0, 2pi), elevation (depression) theta in [-pi/2, pi/2].
struct AngleVector {
    double azimuth = 0.0;
    double elevation = 0.0;

    // Wraps azimuth into [0, 2pi); throws std::invalid_argument on an
    // out-of-range elevation.
    static AngleVector make(double azimuth, double elevation);
};

// Cylindrical array: `rings` parallel rings normal to the y-axis, spaced
// `ring_spacing` apart, each holding `elements_per_ring` elements evenly
// spaced on a circle of `ring_radius`. Lengths in meters.
struct ArrayGeometry {
    int rings = 4;
    int elements_per_ring = 4;
    double ring_spacing = 0.15;
    double ring_radius = 0.15;
    double wavelength = 0.3;

    int channels() const { return rings * elements_per_ring; }
    void validate() const;
};

struct PlatformState {
    double speed = 300.0;       // m/s
    double crab_angle = 0.0;    // radians, flight direction vs. cylinder axis
    double height = 3000.0;     // m
    double pri = 0.25e-3;       // s
    int pulses = 16;

    void validate() const;
};

// Unit vector orthogonal to the incoming planar wavefront.
Vec3 wavevector(const AngleVector& psi);

// Position of element n (1-based) on ring m (1-based).
Vec3 element_position(const ArrayGeometry& geom, int m, int n);

Vec3 platform_velocity(const PlatformState& p);

// Flat-earth depression angle of a slant range seen from height H.
double elevation_for_slant_range(double height, double slant_range);

}  // namespace cfastap
