#include "twistgate/su2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twistgate {

namespace {

constexpr double kUnitaryTol = 1e-12;
// Angles this close to 0 or pi trigger the canonical axis rules.
constexpr double kAxisTol = 1e-14;

bool finite(complexd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Unitary2::Unitary2(complexd a_, complexd b_, complexd c_, complexd d_)
    : a(a_), b(b_), c(c_), d(d_) {
    if (!(finite(a) && finite(b) && finite(c) && finite(d)))
        throw std::domain_error("Unitary2: entries must be finite");
    // Rows orthonormal <=> U U^dag = I for 2x2.
    const double r0 = std::norm(a) + std::norm(b);
    const double r1 = std::norm(c) + std::norm(d);
    const complexd cross = a * std::conj(c) + b * std::conj(d);
    if (std::abs(r0 - 1.0) > kUnitaryTol || std::abs(r1 - 1.0) > kUnitaryTol ||
        std::abs(cross) > kUnitaryTol || std::abs(std::abs(det()) - 1.0) > kUnitaryTol)
        throw std::domain_error("Unitary2: matrix is not unitary to 1e-12");
}

Unitary2 Unitary2::pauli_x() { return {{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }
Unitary2 Unitary2::pauli_y() { return {{0, 0}, {0, -1}, {0, 1}, {0, 0}}; }
Unitary2 Unitary2::pauli_z() { return {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }

Unitary2 Unitary2::adjoint() const {
    return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
}

Unitary2 Unitary2::operator*(const Unitary2& rhs) const {
    return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
            c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

Unitary2 operator*(complexd phase, const Unitary2& u) {
    return {phase * u.a, phase * u.b, phase * u.c, phase * u.d};
}

Vec3 spherical_to_axis(const SphericalAxis& s) {
    constexpr double pi = 3.14159265358979323846;
    if (!std::isfinite(s.polar) || !std::isfinite(s.azimuth))
        throw std::domain_error("spherical_to_axis: angles must be finite");
    if (s.polar < 0.0 || s.polar > pi)
        throw std::domain_error("spherical_to_axis: polar angle outside [0, pi]");
    if (s.azimuth < 0.0 || s.azimuth > 2.0 * pi)
        throw std::domain_error("spherical_to_axis: azimuth outside [0, 2pi]");
    const double sp = std::sin(s.polar);
    return {sp * std::cos(s.azimuth), sp * std::sin(s.azimuth), std::cos(s.polar)};
}

Unitary2 axis_angle_to_unitary(const RotationSpec& r) {
    if (!std::isfinite(r.angle))
        throw std::domain_error("axis_angle_to_unitary: angle must be finite");
    if (std::abs(norm(r.axis) - 1.0) > kUnitaryTol)
        throw std::domain_error("axis_angle_to_unitary: axis must be a unit vector");
    const double h = 0.5 * r.angle;
    const double cs = std::cos(h);
    const double sn = std::sin(h);
    const double x = r.axis[0], y = r.axis[1], z = r.axis[2];
    return {{cs, -sn * z}, {-sn * y, -sn * x}, {sn * y, -sn * x}, {cs, sn * z}};
}

RotationSpec canonical_rotation(double w, double x, double y, double z) {
    const double qn = std::sqrt(w * w + x * x + y * y + z * z);
    if (!(qn > 0.0) || !std::isfinite(qn))
        throw std::domain_error("canonical_rotation: quaternion must be nonzero and finite");
    w /= qn, x /= qn, y /= qn, z /= qn;
    if (w < 0.0) w = -w, x = -x, y = -y, z = -z;  // strip the -1 phase
    const double s = std::sqrt(x * x + y * y + z * z);
    RotationSpec out;
    out.angle = 2.0 * std::atan2(s, w);
    if (s <= kAxisTol) return out;  // angle ~ 0: axis fixed at +z
    out.axis = {x / s, y / s, z / s};
    if (w <= kAxisTol) {
        // Half turns: n and -n are the same rotation; pick the sign making
        // the first nonzero component of (z, y, x) positive.
        double lead = out.axis[2];
        if (lead == 0.0) lead = out.axis[1];
        if (lead == 0.0) lead = out.axis[0];
        if (lead < 0.0)
            out.axis = {-out.axis[0], -out.axis[1], -out.axis[2]};
    }
    return out;
}

RotationSpec unitary_to_axis_angle(const Unitary2& u) {
    // Pauli components: U = q0 I + q1 sigma_x + q2 sigma_y + q3 sigma_z, then
    // (w, x, y, z) = (q0, i q1, i q2, i q3) equals the rotation quaternion up
    // to the global phase, which the largest component anchors.
    const complexd i{0.0, 1.0};
    complexd q[4] = {0.5 * (u.a + u.d), 0.5 * i * (u.b + u.c),
                     0.5 * i * (i * (u.b - u.c)), 0.5 * i * (u.a - u.d)};
    int lead = 0;
    for (int k = 1; k < 4; ++k)
        if (std::abs(q[k]) > std::abs(q[lead])) lead = k;
    const complexd phase = q[lead] / std::abs(q[lead]);
    for (complexd& qk : q) qk /= phase;
    return canonical_rotation(q[0].real(), q[1].real(), q[2].real(), q[3].real());
}

double gate_fidelity(const Unitary2& approx, const Unitary2& target) {
    const complexd overlap = std::conj(target.a) * approx.a + std::conj(target.b) * approx.b +
                             std::conj(target.c) * approx.c + std::conj(target.d) * approx.d;
    return std::clamp((2.0 + std::norm(overlap)) / 6.0, 0.0, 1.0);
}

}  // namespace twistgate
