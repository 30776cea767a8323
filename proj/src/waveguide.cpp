#include "twistgate/waveguide.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace twistgate {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_design(const TwistDesign& d) {
    if (!std::isfinite(d.theta) || !std::isfinite(d.length))
        throw std::domain_error("TwistDesign: parameters must be finite");
    if (d.length < 0.0)
        throw std::domain_error("TwistDesign: length must be >= 0");
}

// Signed direction cosines of the helical-frame rotation axis:
// cos psi = 2 pi L / phi, sin psi_s = 2 theta / phi (sign of the twist).
// phi == 0 (the empty device) degenerates to the +z axis.
struct Mixing {
    double phi;
    double cos_psi;
    double sin_psi;
};

Mixing mixing(const TwistDesign& d) {
    const double lin = 2.0 * kPi * d.length;
    const double twist = 2.0 * d.theta;
    const double phi = std::hypot(lin, twist);
    if (phi == 0.0) return {0.0, 1.0, 0.0};
    return {phi, lin / phi, twist / phi};
}

}  // namespace

DerivedAngles derive_angles(const TwistDesign& d) {
    check_design(d);
    const Mixing m = mixing(d);
    return {std::atan2(2.0 * std::abs(d.theta), 2.0 * kPi * d.length), m.phi};
}

Unitary2 frame_rotation(double theta) {
    if (!std::isfinite(theta))
        throw std::domain_error("frame_rotation: theta must be finite");
    return axis_angle_to_unitary({{0.0, 1.0, 0.0}, 2.0 * theta});
}

Unitary2 retarder_matrix(const TwistDesign& d) {
    check_design(d);
    const Mixing m = mixing(d);
    if (m.phi == 0.0) return Unitary2::identity();
    return axis_angle_to_unitary({{0.0, -m.sin_psi, m.cos_psi}, m.phi});
}

Unitary2 gate_matrix(const TwistDesign& d) {
    return frame_rotation(d.theta) * retarder_matrix(d);
}

RotationSpec gate_axis_angle(const TwistDesign& d) {
    check_design(d);
    const Mixing m = mixing(d);
    const double ct = std::cos(d.theta), st = std::sin(d.theta);
    const double cf = std::cos(0.5 * m.phi), sf = std::sin(0.5 * m.phi);
    return canonical_rotation(ct * cf + st * sf * m.sin_psi,
                              m.cos_psi * st * sf,
                              st * cf - ct * sf * m.sin_psi,
                              ct * m.cos_psi * sf);
}

ModeAnalysis mode_analysis(const TwistDesign& d) {
    check_design(d);
    const Mixing m = mixing(d);
    ModeAnalysis out;
    out.psi = std::atan2(2.0 * std::abs(d.theta), 2.0 * kPi * d.length);
    if (d.length > 0.0)
        out.delta_beta_norm = m.phi / (2.0 * kPi * d.length);
    else
        out.delta_beta_norm = d.theta == 0.0 ? 1.0
                                             : std::numeric_limits<double>::infinity();
    out.stokes0 = {0.0, m.sin_psi, m.cos_psi};
    out.stokes1 = {0.0, -m.sin_psi, -m.cos_psi};
    out.beta_split_norm = {0.5 * out.delta_beta_norm, -0.5 * out.delta_beta_norm};
    return out;
}

double beat_length(const PhysicalParams& p) {
    if (!std::isfinite(p.delta_n) || !std::isfinite(p.wavelength) || p.delta_n <= 0.0 ||
        p.wavelength <= 0.0)
        throw std::domain_error("beat_length: delta_n and wavelength must be positive");
    return p.wavelength / p.delta_n;
}

PhysicalDesign physical_design(const TwistDesign& d, const PhysicalParams& p) {
    check_design(d);
    if (d.length <= 0.0)
        throw std::domain_error("physical_design: design length must be > 0");
    PhysicalDesign out;
    out.length = d.length * beat_length(p);
    if (d.theta != 0.0) out.pitch = 2.0 * kPi * out.length / d.theta;
    return out;
}

}  // namespace twistgate
