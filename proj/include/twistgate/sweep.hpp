#pragma once

// Worst-case synthesis survey: fit every rotation on a (polar, azimuth,
// angle) grid and aggregate the resulting fidelities. The headline number is
// F_min, the fidelity of the hardest gate under the given fabrication box.
// Sweeps are deterministic for a fixed seed regardless of worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "twistgate/fit.hpp"

namespace twistgate {

// Inclusive grids: polar in [0, pi], azimuth in [0, 2pi], angle in [0, 2pi],
// each endpoint included. Counts must be >= 1. Coincident points (poles,
// azimuth 0 vs 2pi, angle 0 vs 2pi) are kept so the target count is exactly
// the product.
struct SweepGrid {
    int n_polar{9};
    int n_azimuth{17};
    int n_angle{5};
};

// Targets in row-major (polar, azimuth, angle) order.
std::vector<RotationSpec> generate_grid(const SweepGrid& g);

// Seed used for the fit of one grid target, derived from the sweep seed and
// the target's index. Lets a caller reproduce any single record of a sweep
// without rerunning the whole grid.
std::uint64_t sweep_target_seed(std::uint64_t sweep_seed, std::size_t target_index);

struct SweepOptions {
    std::uint64_t seed{0};
    // Worker threads; <= 1 runs sequentially. Never affects results.
    int jobs{1};
    double histogram_min{0.9};
    int histogram_bins{50};
    FitOptions fit{};
    // Optional per-target warm starts, indexed like generate_grid (empty or
    // one per target), e.g. best designs from a sweep under a smaller box.
    std::vector<TwistDesign> warm_starts{};
};

// One grid target and its best fit.
struct TargetRecord {
    double polar{0.0};
    double azimuth{0.0};
    double chi{0.0};
    TwistDesign design{};
    double fidelity{0.0};
};

// Worst fidelity over all angles for one axis (the resolution map).
struct AxisRecord {
    double polar{0.0};
    double azimuth{0.0};
    double worst_fidelity{0.0};
};

// Uniform bins spanning [min, max]; edges has bins+1 entries and counts sums
// to the number of targets (fidelities below min are counted in bin 0).
struct FidelityHistogram {
    double min{0.9};
    double max{1.0};
    std::vector<double> edges{};
    std::vector<std::int64_t> counts{};
};

struct SweepSummary {
    SweepGrid grid{};
    DesignConstraints constraints{};
    std::uint64_t seed{0};
    std::vector<TargetRecord> targets{};
    double f_min{0.0};
    std::vector<AxisRecord> axis_worst{};
    FidelityHistogram histogram{};
};

SweepSummary run_sweep(const SweepGrid& g, const DesignConstraints& box,
                       const SweepOptions& options = {});

// F_min as a function of the fabrication box, one sweep per box. With
// nested = true each sweep warm-starts from the previous one's best designs,
// so loosening the box never loses fidelity on any target.
struct ScanRow {
    DesignConstraints constraints{};
    double f_min{0.0};
    SweepSummary summary{};
};

std::vector<ScanRow> constraint_scan(const std::vector<DesignConstraints>& boxes,
                                     const SweepGrid& g,
                                     const SweepOptions& options = {},
                                     bool nested = true);

// Machine-readable report: config, per-target records, and aggregates.
// Byte-identical for identical inputs (worker count is not an input).
std::string report_json(const SweepSummary& s);
// Flat per-target table, header polar,azimuth,chi,theta_opt,L_opt,fidelity.
std::string table_csv(const SweepSummary& s);
// Scan counterparts: rows of (theta_max, length_max, f_min).
std::string scan_report_json(const std::vector<ScanRow>& rows);
std::string scan_table_csv(const std::vector<ScanRow>& rows);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace twistgate
