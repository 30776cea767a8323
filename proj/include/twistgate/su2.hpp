#pragma once

// Minimal SU(2) toolkit for single-qubit polarization gates: 2x2 unitaries,
// axis-angle rotation specs, and the average gate fidelity used to compare
// them. Conventions: a rotation by angle chi about unit axis n is
// exp(-i n.sigma chi/2) = cos(chi/2) I - i sin(chi/2) n.sigma, and gates are
// compared up to a global phase throughout.

#include <array>
#include <complex>

namespace twistgate {

using complexd = std::complex<double>;
using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);

// 2x2 unitary, row-major [[a, b], [c, d]]. Construction enforces
// U U^dag = I and |det U| = 1 to 1e-12; default is the identity.
struct Unitary2 {
    complexd a{1.0, 0.0};
    complexd b{0.0, 0.0};
    complexd c{0.0, 0.0};
    complexd d{1.0, 0.0};

    Unitary2() = default;
    Unitary2(complexd a_, complexd b_, complexd c_, complexd d_);

    static Unitary2 identity() { return {}; }
    static Unitary2 pauli_x();
    static Unitary2 pauli_y();
    static Unitary2 pauli_z();

    complexd trace() const { return a + d; }
    complexd det() const { return a * d - b * c; }
    Unitary2 adjoint() const;

    Unitary2 operator*(const Unitary2& rhs) const;
};

// Phase rotation e^{i gamma} U; |phase| must be 1 (the product is validated).
Unitary2 operator*(complexd phase, const Unitary2& u);

// Rotation axis in spherical coordinates: polar from +z in [0, pi],
// azimuth from +x in [0, 2pi] (both endpoints allowed).
struct SphericalAxis {
    double polar{0.0};
    double azimuth{0.0};
};

Vec3 spherical_to_axis(const SphericalAxis& s);

// Axis-angle rotation. Canonical form (as produced by unitary_to_axis_angle
// and canonical_rotation): angle in [0, pi]; axis (0, 0, 1) when angle == 0;
// when angle == pi, the first nonzero component among (z, y, x) is positive.
// Inputs to axis_angle_to_unitary may use any unit axis and any angle.
struct RotationSpec {
    Vec3 axis{0.0, 0.0, 1.0};
    double angle{0.0};
};

// exp(-i n.sigma chi/2). Throws std::domain_error unless |n| = 1 within 1e-12.
Unitary2 axis_angle_to_unitary(const RotationSpec& r);

// Inverse of the above up to global phase; result is canonical (see above).
RotationSpec unitary_to_axis_angle(const Unitary2& u);

// Canonical axis-angle from real quaternion components, where the gate is
// w I - i (x sigma_x + y sigma_y + z sigma_z). The input is renormalized, so
// small drift is tolerated.
RotationSpec canonical_rotation(double w, double x, double y, double z);

// Average gate fidelity between target and approximation, (2 + |tr(U^dag T)|^2)/6.
// Equals 1 iff T = e^{i gamma} U; invariant under global phases of either
// argument; clamped to [0, 1] against roundoff.
double gate_fidelity(const Unitary2& approx, const Unitary2& target);

}  // namespace twistgate
