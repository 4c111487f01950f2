#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cfastap/steering.hpp"

using namespace cfastap;

namespace {

// Direct scalar evaluation of one spatial steering entry.
cplx spatial_entry(double r, double d, double lambda, int elements, int m, int n, double phi, double theta) {
    const double a = 2 * kPi * (n - 1) / elements;
    const double px = r * std::sin(a), py = d * (m - 1), pz = -r * std::cos(a);
    const double kx = std::cos(theta) * std::cos(phi), ky = std::cos(theta) * std::sin(phi), kz = -std::sin(theta);
    const double phase = 2 * kPi / lambda * (kx * px + ky * py + kz * pz);
    return {std::cos(phase), std::sin(phase)};
}

ArrayGeometry tiny_array() {
    ArrayGeometry g;
    g.ring_radius = 1e-15;
    g.ring_spacing = 1e-15;
    return g;
}

}  // namespace

TEST(SpatialSteering, VanishingApertureIsAllOnes) {
    const auto s = spatial_steering(tiny_array(), AngleVector::make(1.1, 0.3));
    for (Eigen::Index i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(s.values[i] - 1.0), 0.0, 1e-12);
}

TEST(SpatialSteering, NadirDependsOnlyOnElement) {
    const ArrayGeometry g;
    const auto s = spatial_steering(g, AngleVector::make(0.8, kPi / 2));
    for (int m = 0; m < g.rings; ++m) {
        for (int n = 1; n <= g.elements_per_ring; ++n) {
            const cplx expected = std::polar(1.0, kTwoPi / g.wavelength * g.ring_radius * std::cos(kTwoPi * (n - 1) / g.elements_per_ring));
            EXPECT_NEAR(std::abs(s.values[m * g.elements_per_ring + n - 1] - expected), 0.0, 1e-12);
        }
    }
}

TEST(SpatialSteering, MatchesScalarOracleTableOne) {
    const ArrayGeometry g;
    const double phi = kPi / 4, theta = 0.7297;
    const auto s = spatial_steering(g, AngleVector::make(phi, theta));
    ASSERT_EQ(s.size(), 16);
    EXPECT_EQ(s.kind, SteeringKind::spatial);
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            EXPECT_NEAR(std::abs(s.values[(m - 1) * 4 + n - 1] - spatial_entry(0.15, 0.15, 0.3, 4, m, n, phi, theta)),
                        0.0, 1e-12);
}

TEST(Doppler, Examples) {
    const PlatformState p;
    // Velocity along +y; look along +x is orthogonal.
    EXPECT_NEAR(doppler_frequency(AngleVector::make(0, 0), p, 0.3), 0.0, 1e-15);
    EXPECT_NEAR(doppler_frequency(AngleVector::make(kPi / 2, 0), p, 0.3), 2 * 300 * 0.25e-3 / 0.3, 1e-15);
    EXPECT_NEAR(doppler_frequency(AngleVector::make(kPi / 2, 0), p, 0.3), 0.5, 1e-15);
    // Scalar oracle on a crabbed, depressed look.
    PlatformState q = p;
    q.crab_angle = 0.4;
    const double phi = 2.1, theta = 0.6;
    const double expected = 2 * 300 * (std::cos(theta) * std::cos(phi) * -std::sin(0.4) +
                                        std::cos(theta) * std::sin(phi) * std::cos(0.4)) * 0.25e-3 / 0.3;
    EXPECT_NEAR(doppler_frequency(AngleVector::make(phi, theta), q, 0.3), expected, 1e-14);
}

TEST(TemporalSteering, Examples) {
    const auto ones = temporal_steering(0.0, 16);
    for (Eigen::Index i = 0; i < 16; ++i) EXPECT_EQ(ones.values[i], cplx(1.0, 0.0));
    const auto alt = temporal_steering(0.5, 4);
    const double expect[] = {1, -1, 1, -1};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(alt.values[i] - expect[i]), 0.0, 1e-15);
    const auto quarter = temporal_steering(0.25, 16);
    EXPECT_EQ(quarter.values[0], cplx(1.0, 0.0));
    for (int i = 0; i + 4 < 16; ++i) EXPECT_NEAR(std::abs(quarter.values[i + 4] - quarter.values[i]), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(quarter.values[1] - cplx(0, 1)), 0.0, 1e-15);
    EXPECT_THROW(temporal_steering(0.1, 1), std::invalid_argument);
}

TEST(SpaceTimeSteering, ShapeAndDegenerateCase) {
    const PlatformState p;
    const auto s = space_time_steering(ArrayGeometry{}, AngleVector::make(0.3, 0.5), p);
    EXPECT_EQ(s.size(), 256);
    EXPECT_EQ(s.kind, SteeringKind::space_time);
    const auto ones = space_time_steering(tiny_array(), AngleVector::make(0, 0.5), p);  // zero Doppler at phi=0
    for (Eigen::Index i = 0; i < ones.size(); ++i) EXPECT_NEAR(std::abs(ones.values[i] - 1.0), 0.0, 1e-12);
}

TEST(SpaceTimeSteering, KroneckerIndexArithmetic) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> az(0, kTwoPi), el(0, 1.2);
    const ArrayGeometry g;
    PlatformState p;
    p.crab_angle = 0.5;
    for (int trial = 0; trial < 5; ++trial) {
        const auto psi = AngleVector::make(az(rng), el(rng));
        const auto st = space_time_steering(g, psi, p);
        const auto sp = spatial_steering(g, psi);
        const auto tp = temporal_steering(doppler_frequency(psi, p, g.wavelength), p.pulses);
        std::uniform_int_distribution<int> pi(0, p.pulses - 1), mi(0, 3), ni(0, 3);
        for (int k = 0; k < 20; ++k) {
            const int pp = pi(rng), m = mi(rng), n = ni(rng);
            const cplx expected = tp.values[pp] * sp.values[m * 4 + n];
            EXPECT_NEAR(std::abs(st.values[pp * 16 + m * 4 + n] - expected), 0.0, 1e-12);
        }
        // Reshape to P x NM recovers the outer product.
        const Eigen::Map<const CMatrix> grid(st.values.data(), 16, p.pulses);
        EXPECT_LT((grid - sp.values * tp.values.transpose()).norm(), 1e-12);
    }
}

TEST(SpaceTimeSteering, UnitModulusAndNorm) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> az(0, kTwoPi), el(-1.5, 1.5), fd(-0.5, 0.5);
    const ArrayGeometry g;
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = space_time_steering(g, AngleVector::make(az(rng), el(rng)), 16, fd(rng));
        for (Eigen::Index i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(s.values[i]), 1.0, 1e-12);
        EXPECT_NEAR(s.values.squaredNorm(), 256.0, 1e-9);
    }
}

TEST(SpaceTimeSteering, MovingTargetKeepsSpatialPart) {
    const ArrayGeometry g;
    const PlatformState p;
    const auto psi = AngleVector::make(1.0, 0.7);
    const auto stationary = space_time_steering(g, psi, p);
    const auto moving = space_time_steering(g, psi, p.pulses, 0.123);
    // First pulse block is the spatial vector in both cases.
    EXPECT_LT((stationary.values.head(16) - moving.values.head(16)).norm(), 1e-15);
    const auto same = space_time_steering(g, psi, p.pulses, doppler_frequency(psi, p, g.wavelength));
    EXPECT_LT((same.values - stationary.values).norm(), 1e-12);
}
