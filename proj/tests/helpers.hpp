#pragma once

// Shared test utilities: a seeded generator for random rotations/designs and
// an independent brute-force fidelity oracle (three-Pauli trace sum over raw
// complex arithmetic, no Unitary2 operator reuse).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "twistgate/waveguide.hpp"

namespace twistgate::testing {

constexpr double kPi = 3.14159265358979323846;

struct TestRng {
    std::mt19937_64 gen;
    explicit TestRng(std::uint64_t seed) : gen(seed) {}
    double uniform01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

// Axis uniform on the sphere, angle uniform in [0, 2pi).
inline RotationSpec random_rotation(TestRng& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double az = rng.uniform(0.0, 2.0 * kPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {{s * std::cos(az), s * std::sin(az), z}, rng.uniform(0.0, 2.0 * kPi)};
}

inline Unitary2 random_unitary(TestRng& rng) {
    return axis_angle_to_unitary(random_rotation(rng));
}

inline complexd random_phase(TestRng& rng) {
    const double g = rng.uniform(0.0, 2.0 * kPi);
    return {std::cos(g), std::sin(g)};
}

inline TwistDesign random_design(TestRng& rng, double theta_span = 20.0 * kPi,
                                 double length_max = 5.0) {
    return {rng.uniform(-theta_span, theta_span), rng.uniform(0.0, length_max)};
}

using Mat = std::array<std::array<complexd, 2>, 2>;

inline Mat to_mat(const Unitary2& u) { return {{{u.a, u.b}, {u.c, u.d}}}; }

inline Mat mul(const Mat& x, const Mat& y) {
    Mat r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    return r;
}

inline Mat dagger(const Mat& x) {
    return {{{std::conj(x[0][0]), std::conj(x[1][0])}, {std::conj(x[0][1]), std::conj(x[1][1])}}};
}

// F = 1/2 + (1/12) sum_j Tr(T s_j T^dag U s_j U^dag), evaluated literally.
inline double pauli_sum_fidelity(const Unitary2& t_in, const Unitary2& u_in) {
    const Mat sx{{{complexd{0, 0}, complexd{1, 0}}, {complexd{1, 0}, complexd{0, 0}}}};
    const Mat sy{{{complexd{0, 0}, complexd{0, -1}}, {complexd{0, 1}, complexd{0, 0}}}};
    const Mat sz{{{complexd{1, 0}, complexd{0, 0}}, {complexd{0, 0}, complexd{-1, 0}}}};
    const Mat t = to_mat(t_in), u = to_mat(u_in);
    double total = 0.0;
    for (const Mat& s : {sx, sy, sz}) {
        const Mat left = mul(mul(t, s), dagger(t));
        const Mat right = mul(mul(u, s), dagger(u));
        const Mat prod = mul(left, right);
        total += (prod[0][0] + prod[1][1]).real();
    }
    return 0.5 + total / 12.0;
}

// Largest entry difference after aligning global phase on B's largest entry.
inline double diff_up_to_phase(const Unitary2& a_in, const Unitary2& b_in) {
    const Mat a = to_mat(a_in), b = to_mat(b_in);
    int bi = 0, bj = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(b[i][j]) > std::abs(b[bi][bj])) bi = i, bj = j;
    const complexd ratio = a[bi][bj] / b[bi][bj];
    const complexd phase = std::abs(ratio) > 0.0 ? ratio / std::abs(ratio) : complexd{1.0, 0.0};
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(a[i][j] - phase * b[i][j]));
    return worst;
}

// Plain entrywise distance (no phase freedom).
inline double diff(const Unitary2& a_in, const Unitary2& b_in) {
    const Mat a = to_mat(a_in), b = to_mat(b_in);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    return worst;
}

}  // namespace twistgate::testing
