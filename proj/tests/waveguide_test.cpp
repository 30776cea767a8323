#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "twistgate/waveguide.hpp"

using namespace twistgate;
using twistgate::testing::kPi;
using twistgate::testing::TestRng;
using Catch::Matchers::WithinAbs;

TEST_CASE("derived angles match hand-evaluated cases", "[waveguide]") {
    const DerivedAngles plain = derive_angles({0.0, 0.5});
    REQUIRE(plain.psi == 0.0);
    REQUIRE_THAT(plain.phi, WithinAbs(kPi, 1e-12));

    // theta = pi over half a beat length: psi = arctan 2, phi = pi sqrt 5.
    const DerivedAngles mixed = derive_angles({kPi, 0.5});
    REQUIRE_THAT(mixed.psi, WithinAbs(std::atan(2.0), 1e-12));
    REQUIRE_THAT(mixed.psi, WithinAbs(1.1071487, 1e-7));
    REQUIRE_THAT(mixed.phi, WithinAbs(kPi * std::sqrt(5.0), 1e-12));
    REQUIRE_THAT(mixed.phi, WithinAbs(7.0248146, 1e-6));

    // Rapid twist: mixing ratio 10^3.
    const DerivedAngles rapid = derive_angles({10.0 * kPi, 0.01});
    REQUIRE_THAT(rapid.psi, WithinAbs(kPi / 2 - 1e-3, 1e-8));
    REQUIRE_THAT(rapid.phi, WithinAbs(20.0 * kPi * std::sqrt(1.0 + 1e-6), 1e-9));
    REQUIRE_THAT(rapid.phi, WithinAbs(62.83188, 5e-5));
}

TEST_CASE("retardance constraint phi sin psi = 2|theta|", "[waveguide][property]") {
    TestRng rng(21);
    for (int i = 0; i < 10000; ++i) {
        const TwistDesign d = testing::random_design(rng);
        const DerivedAngles a = derive_angles(d);
        const double err = std::abs(a.phi * std::sin(a.psi) - 2.0 * std::abs(d.theta));
        REQUIRE(err <= 1e-10 * std::max(1.0, a.phi));
        REQUIRE(a.phi >= 2.0 * kPi * d.length - 1e-12);
        REQUIRE(a.psi >= 0.0);
        REQUIRE(a.psi <= kPi / 2);
    }
}

TEST_CASE("degenerate designs", "[waveguide]") {
    const DerivedAngles empty = derive_angles({0.0, 0.0});
    REQUIRE(empty.psi == 0.0);
    REQUIRE(empty.phi == 0.0);

    // Zero length with twist: pure end-facet rotation, psi pinned to pi/2.
    const DerivedAngles facet = derive_angles({0.3, 0.0});
    REQUIRE(facet.psi == kPi / 2);
    REQUIRE_THAT(facet.phi, WithinAbs(0.6, 1e-15));

    REQUIRE_THROWS_AS(derive_angles({0.0, -0.1}), std::domain_error);
    REQUIRE_THROWS_AS(derive_angles({std::numeric_limits<double>::quiet_NaN(), 1.0}),
                      std::domain_error);
    REQUIRE_THROWS_AS(gate_matrix({0.0, std::numeric_limits<double>::infinity()}),
                      std::domain_error);
}

TEST_CASE("gate matrix anchors", "[waveguide]") {
    // Untwisted half-beat device: z half turn, diag(-i, i).
    const Unitary2 zhalf = gate_matrix({0.0, 0.5});
    REQUIRE(testing::diff(zhalf, Unitary2({0, -1}, {0, 0}, {0, 0}, {0, 1})) < 1e-12);

    // Rapid twist: transparent (identity up to phase).
    REQUIRE(gate_fidelity(gate_matrix({10.0 * kPi, 0.01}), Unitary2::identity()) >= 1.0 - 1e-6);

    // Slow twist over integer length: rotator by 2 theta about y.
    const Unitary2 target = axis_angle_to_unitary({{0, 1, 0}, kPi});
    REQUIRE(gate_fidelity(gate_matrix({kPi / 2, 100.0}), target) >= 1.0 - 1e-3);

    // Zero length: identity exactly, any twist.
    REQUIRE(gate_fidelity(gate_matrix({kPi / 4, 0.0}), Unitary2::identity()) >= 1.0 - 1e-14);
}

TEST_CASE("axis-angle of the gate: anchors", "[waveguide]") {
    const RotationSpec zr = gate_axis_angle({0.0, 0.5});
    REQUIRE_THAT(zr.angle, WithinAbs(kPi, 1e-12));
    REQUIRE_THAT(zr.axis[2], WithinAbs(1.0, 1e-12));

    const RotationSpec none = gate_axis_angle({kPi / 4, 0.0});
    REQUIRE_THAT(none.angle, WithinAbs(0.0, 1e-12));

    // Full-turn retarder (phi = 2pi) leaves a pure y-rotation by 2 theta.
    const RotationSpec yr = gate_axis_angle({kPi / 2, std::sqrt(3.0) / 2.0});
    REQUIRE_THAT(yr.angle, WithinAbs(kPi, 1e-12));
    REQUIRE_THAT(std::abs(yr.axis[1]), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(yr.axis[0], WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(yr.axis[2], WithinAbs(0.0, 1e-12));
}

TEST_CASE("composition and closed form agree", "[waveguide][property]") {
    TestRng rng(22);
    for (int i = 0; i < 10000; ++i) {
        const TwistDesign d = testing::random_design(rng);
        const double f =
            gate_fidelity(gate_matrix(d), axis_angle_to_unitary(gate_axis_angle(d)));
        REQUIRE(f >= 1.0 - 1e-10);
    }
}

TEST_CASE("gate matrix composes frame rotation with the retarder", "[waveguide]") {
    TestRng rng(23);
    for (int i = 0; i < 100; ++i) {
        const TwistDesign d = testing::random_design(rng);
        REQUIRE(testing::diff(gate_matrix(d), frame_rotation(d.theta) * retarder_matrix(d)) <
                1e-15);
    }
}

TEST_CASE("mirror symmetry in the twist sign", "[waveguide][property]") {
    TestRng rng(24);
    const Unitary2 sz = Unitary2::pauli_z();
    for (int i = 0; i < 1000; ++i) {
        const TwistDesign d = testing::random_design(rng);
        const TwistDesign m{-d.theta, d.length};
        REQUIRE_THAT(gate_axis_angle(m).angle, WithinAbs(gate_axis_angle(d).angle, 1e-10));
        // The mirror-image device is the sigma_z conjugate.
        REQUIRE(testing::diff(sz * gate_matrix(d) * sz, gate_matrix(m)) < 1e-12);
    }
}

TEST_CASE("retarder is 4pi periodic in phi at fixed psi", "[waveguide][property]") {
    TestRng rng(25);
    for (int i = 0; i < 1000; ++i) {
        TwistDesign d = testing::random_design(rng, 2.0 * kPi, 3.0);
        d.length += 0.05;  // keep phi well away from zero
        const double phi = derive_angles(d).phi;
        const double s = (phi + 4.0 * kPi) / phi;  // scales phi by s, keeps the ratio psi
        const TwistDesign stretched{d.theta * s, d.length * s};
        REQUIRE(testing::diff_up_to_phase(retarder_matrix(d), retarder_matrix(stretched)) <
                1e-10);
    }
}

TEST_CASE("limit regimes hold across the parameter range", "[waveguide][property]") {
    TestRng rng(26);
    // Rapid twist, ratio 2|theta|/(2 pi L) = 10^3: transparency.
    for (int i = 0; i < 200; ++i) {
        const double theta =
            (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 20.0 * kPi);
        const TwistDesign d{theta, std::abs(theta) / (1000.0 * kPi)};
        REQUIRE(gate_fidelity(gate_matrix(d), Unitary2::identity()) >= 1.0 - 1e-6);
    }
    // Slow twist over whole beat lengths (ratio <= 10^-3): rotator by 2 theta.
    for (const double len : {1000.0, 2000.0, 3000.0}) {
        for (int i = 0; i < 50; ++i) {
            const double theta = rng.uniform(-kPi, kPi);
            const Unitary2 rot = axis_angle_to_unitary({{0, 1, 0}, 2.0 * theta});
            REQUIRE(gate_fidelity(gate_matrix({theta, len}), rot) >= 1.0 - 1e-4);
        }
    }
}

TEST_CASE("mode analysis anchors", "[waveguide]") {
    const ModeAnalysis plain = mode_analysis({0.0, 1.0});
    REQUIRE(plain.stokes0 == Vec3{0.0, 0.0, 1.0});
    REQUIRE(plain.stokes1 == Vec3{0.0, 0.0, -1.0});
    REQUIRE(plain.delta_beta_norm == 1.0);

    // Rapid twist: modes at the circular pole to one part in a thousand.
    const ModeAnalysis rapid = mode_analysis({10.0 * kPi, 0.01});
    REQUIRE_THAT(rapid.stokes0[0], WithinAbs(0.0, 1e-3));
    REQUIRE_THAT(rapid.stokes0[1], WithinAbs(1.0, 1e-3));
    REQUIRE_THAT(rapid.stokes0[2], WithinAbs(0.0, 1e-3));

    const ModeAnalysis mixed = mode_analysis({kPi, 0.5});
    REQUIRE_THAT(mixed.stokes0[1], WithinAbs(2.0 / std::sqrt(5.0), 1e-12));
    REQUIRE_THAT(mixed.stokes0[2], WithinAbs(1.0 / std::sqrt(5.0), 1e-12));
    REQUIRE_THAT(mixed.delta_beta_norm, WithinAbs(std::sqrt(5.0), 1e-12));
    REQUIRE_THAT(mixed.beta_split_norm[0], WithinAbs(std::sqrt(5.0) / 2.0, 1e-12));
    REQUIRE_THAT(mixed.beta_split_norm[1], WithinAbs(-std::sqrt(5.0) / 2.0, 1e-12));
}

TEST_CASE("mode geometry invariants", "[waveguide][property]") {
    TestRng rng(27);
    for (int i = 0; i < 1000; ++i) {
        const TwistDesign d = testing::random_design(rng);
        const ModeAnalysis m = mode_analysis(d);
        for (int k = 0; k < 3; ++k) REQUIRE(m.stokes0[k] == -m.stokes1[k]);
        REQUIRE_THAT(norm(m.stokes0), WithinAbs(1.0, 1e-12));
        if (std::cos(m.psi) > 0.05)
            REQUIRE_THAT(m.delta_beta_norm, WithinAbs(1.0 / std::cos(m.psi), 1e-12));
        REQUIRE(m.beta_split_norm[0] == 0.5 * m.delta_beta_norm);
        REQUIRE(m.beta_split_norm[1] == -0.5 * m.delta_beta_norm);
        // The twist handedness decides which hemisphere mode 0 tilts into.
        if (d.theta > 0.0) REQUIRE(m.stokes0[1] >= 0.0);
        if (d.theta < 0.0) REQUIRE(m.stokes0[1] <= 0.0);
    }
}

TEST_CASE("zero-length mode splitting", "[waveguide]") {
    REQUIRE(std::isinf(mode_analysis({0.3, 0.0}).delta_beta_norm));
    REQUIRE(mode_analysis({0.0, 0.0}).delta_beta_norm == 1.0);
}

TEST_CASE("beat length", "[waveguide]") {
    REQUIRE(beat_length({1e-5, 800e-9}) == 800e-9 / 1e-5);
    REQUIRE_THAT(beat_length({1e-5, 800e-9}), WithinAbs(0.08, 1e-15));
    REQUIRE_THAT(beat_length({1e-4, 800e-9}), WithinAbs(0.008, 1e-15));
    REQUIRE_THROWS_AS(beat_length({0.0, 800e-9}), std::domain_error);
    REQUIRE_THROWS_AS(beat_length({1e-5, 0.0}), std::domain_error);
    REQUIRE_THROWS_AS(beat_length({-1e-5, 800e-9}), std::domain_error);
}

TEST_CASE("physical realization", "[waveguide]") {
    // One full twist over one beat length: 8 mm long, 8 mm pitch.
    const PhysicalDesign one = physical_design({2.0 * kPi, 1.0}, {1e-4, 800e-9});
    REQUIRE_THAT(one.length, WithinAbs(0.008, 1e-15));
    REQUIRE(one.pitch.has_value());
    REQUIRE_THAT(*one.pitch, WithinAbs(0.008, 1e-15));

    const PhysicalDesign untwisted = physical_design({0.0, 1.0}, {1e-4, 800e-9});
    REQUIRE_FALSE(untwisted.pitch.has_value());

    const PhysicalDesign big = physical_design({20.0 * kPi, 3.0}, {1e-5, 800e-9});
    REQUIRE_THAT(big.length, WithinAbs(0.24, 1e-15));
    REQUIRE_THAT(*big.pitch, WithinAbs(0.024, 1e-15));

    // Left-handed twist: signed pitch.
    REQUIRE(*physical_design({-2.0 * kPi, 1.0}, {1e-4, 800e-9}).pitch < 0.0);

    REQUIRE_THROWS_AS(physical_design({1.0, 0.0}, {1e-4, 800e-9}), std::domain_error);
}
