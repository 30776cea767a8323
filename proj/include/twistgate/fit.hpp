#pragma once

// Inverse design: find the (theta, length) pair inside a box of fabrication
// limits whose gate best approximates a target rotation. Global search is
// differential evolution over the box, started from closed-form candidates
// (pure-retarder and pure-rotator solutions), followed by a Nelder-Mead
// polish. Runs are deterministic for a fixed seed.

#include <cstdint>
#include <vector>

#include "twistgate/waveguide.hpp"

namespace twistgate {

// Fabrication box: |theta| <= theta_max (theta_max >= 0, zero freezes the
// twist), 0 <= length <= length_max (length_max > 0).
struct DesignConstraints {
    double theta_max{20.0 * 3.14159265358979323846};
    double length_max{3.0};
};

struct FitOptions {
    std::uint64_t seed{0};
    int population{32};
    int max_generations{300};
    double crossover{0.7};
    // Per-generation mutation weight is drawn uniformly from this range.
    double mutation_min{0.5};
    double mutation_max{1.0};
    // Stop early once 1 - fidelity <= fidelity_tol.
    double fidelity_tol{1e-12};
    int polish_max_iterations{400};
    // Simplex size tolerance, relative to the box scale.
    double polish_tol{1e-12};
    // Extra starting designs (clamped into the box), e.g. the optimum from a
    // previous run under tighter constraints.
    std::vector<TwistDesign> initial_designs{};
};

struct FitResult {
    TwistDesign design{};
    double fidelity{0.0};
    RotationSpec target{};
    std::int64_t evaluations{0};
    std::uint64_t seed{0};
};

// gate_fidelity(gate_matrix(d), target).
double fidelity_objective(const TwistDesign& d, const Unitary2& target);

// Best design in the box for the target rotation. The returned fidelity is
// the maximum over every design probed during the run (never less than any
// seed, including initial_designs), and is reproducible from the returned
// design via fidelity_objective. Throws std::domain_error for an invalid box
// or a non-unit target axis.
FitResult fit_gate(const RotationSpec& target, const DesignConstraints& box,
                   const FitOptions& options = {});

}  // namespace twistgate
