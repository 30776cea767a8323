#pragma once

// Jones-matrix model of a linearly birefringent waveguide whose optic axis
// twists uniformly along the propagation direction. A device is described by
// two dimensionless numbers: the total twist angle theta (radians, signed by
// handedness) and the device length in polarization beat lengths. Working in
// the co-rotating frame, the device acts on the polarization qubit as
//
//   T(theta, L) = exp(-i sigma_y theta) exp(-i (sigma_z cos psi - sigma_y sin psi_s) phi/2)
//
// where tan psi = 2|theta| / (2 pi L) measures how strongly the twist mixes
// the local modes, phi = sqrt((2 pi L)^2 + (2 theta)^2) is the accumulated
// retardance of the helical-frame eigenmodes, and sin psi_s = 2 theta / phi
// carries the twist sign. Fast twist (psi -> pi/2) yields the identity
// (twist-induced transparency); slow twist (psi -> 0, integer L) yields a
// pure rotator exp(-i sigma_y theta).

#include <optional>

#include "twistgate/su2.hpp"

namespace twistgate {

// Device parameters. theta is the total twist in radians; length is in beat
// lengths, >= 0. Both must be finite; operations throw std::domain_error
// otherwise.
struct TwistDesign {
    double theta{0.0};
    double length{0.0};
};

// Mode-mixing angle psi in [0, pi/2] and total retardance phi >= 0.
// Invariant: phi * sin(psi) = 2 |theta|.
struct DerivedAngles {
    double psi{0.0};
    double phi{0.0};
};

DerivedAngles derive_angles(const TwistDesign& d);

// exp(-i sigma_y theta): the frame-restoring rotation of the output axes.
Unitary2 frame_rotation(double theta);

// The helical-frame retardance factor exp(-i (sigma_z cos psi - sigma_y sin psi_s) phi/2).
Unitary2 retarder_matrix(const TwistDesign& d);

// Full device gate: frame_rotation(theta) * retarder_matrix(d).
Unitary2 gate_matrix(const TwistDesign& d);

// Canonical axis-angle of the device gate, from closed-form quaternion
// components (an independent route from gate_matrix; the two are asserted
// to agree in the tests).
RotationSpec gate_axis_angle(const TwistDesign& d);

// Local eigenmode data in the helical frame. stokes0/stokes1 are the unit
// Stokes vectors of the two modes (antipodal); delta_beta_norm is their
// splitting relative to the untwisted birefringence, 1/cos(psi) (+inf at
// cos psi = 0, i.e. twisting at zero length); beta_split_norm lists the two
// symmetric offsets +-delta_beta_norm/2.
struct ModeAnalysis {
    double psi{0.0};
    double delta_beta_norm{1.0};
    Vec3 stokes0{0.0, 0.0, 1.0};
    Vec3 stokes1{0.0, 0.0, -1.0};
    std::array<double, 2> beta_split_norm{0.5, -0.5};
};

ModeAnalysis mode_analysis(const TwistDesign& d);

// Material/operating-point inputs: index contrast delta_n between the slow
// and fast axes, and vacuum wavelength in meters. Both must be positive.
struct PhysicalParams {
    double delta_n{1e-5};
    double wavelength{800e-9};
};

// Beat length lambda / delta_n in meters.
double beat_length(const PhysicalParams& p);

// Physical realization of a design: device length in meters and, for a
// twisted device, the helix pitch 2 pi length / theta (signed by handedness;
// absent when theta == 0). Requires design length > 0.
struct PhysicalDesign {
    double length{0.0};
    std::optional<double> pitch{};
};

PhysicalDesign physical_design(const TwistDesign& d, const PhysicalParams& p);

}  // namespace twistgate
