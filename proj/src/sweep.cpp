#include "twistgate/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace twistgate {

namespace {

constexpr double kPi = 3.14159265358979323846;

// splitmix64; mixes the target index into the base seed so that per-target
// streams are independent of scheduling.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Inclusive n-point grid over [0, hi]; a single point sits at 0.
double grid_value(double hi, int i, int n) {
    return n == 1 ? 0.0 : hi * i / (n - 1);
}

void check_grid(const SweepGrid& g) {
    if (g.n_polar < 1 || g.n_azimuth < 1 || g.n_angle < 1)
        throw std::domain_error("SweepGrid: all counts must be >= 1");
}

// Shortest round-trip decimal form, for the CSV table.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::uint64_t sweep_target_seed(std::uint64_t sweep_seed, std::size_t target_index) {
    return sweep_seed ^ mix(target_index);
}

std::vector<RotationSpec> generate_grid(const SweepGrid& g) {
    check_grid(g);
    std::vector<RotationSpec> out;
    out.reserve(static_cast<std::size_t>(g.n_polar) * g.n_azimuth * g.n_angle);
    for (int ip = 0; ip < g.n_polar; ++ip)
        for (int ia = 0; ia < g.n_azimuth; ++ia)
            for (int ic = 0; ic < g.n_angle; ++ic)
                out.push_back({spherical_to_axis({grid_value(kPi, ip, g.n_polar),
                                                  grid_value(2.0 * kPi, ia, g.n_azimuth)}),
                               grid_value(2.0 * kPi, ic, g.n_angle)});
    return out;
}

SweepSummary run_sweep(const SweepGrid& g, const DesignConstraints& box,
                       const SweepOptions& options) {
    check_grid(g);
    if (!std::isfinite(box.theta_max) || !std::isfinite(box.length_max) ||
        box.theta_max < 0.0 || box.length_max <= 0.0)
        throw std::domain_error("run_sweep: need theta_max >= 0 and length_max > 0");
    if (options.histogram_bins < 1 || !(options.histogram_min >= 0.0) ||
        !(options.histogram_min < 1.0))
        throw std::domain_error("run_sweep: need >= 1 histogram bins and min in [0, 1)");
    const std::size_t total = static_cast<std::size_t>(g.n_polar) * g.n_azimuth * g.n_angle;
    if (!options.warm_starts.empty() && options.warm_starts.size() != total)
        throw std::domain_error("run_sweep: warm starts must match the grid size");

    std::vector<TargetRecord> records(total);
    const auto fit_one = [&](std::size_t i) {
        const int ic = static_cast<int>(i % g.n_angle);
        const int ia = static_cast<int>((i / g.n_angle) % g.n_azimuth);
        const int ip = static_cast<int>(i / (static_cast<std::size_t>(g.n_angle) * g.n_azimuth));
        TargetRecord rec;
        rec.polar = grid_value(kPi, ip, g.n_polar);
        rec.azimuth = grid_value(2.0 * kPi, ia, g.n_azimuth);
        rec.chi = grid_value(2.0 * kPi, ic, g.n_angle);
        FitOptions fo = options.fit;
        fo.seed = sweep_target_seed(options.seed, i);
        if (!options.warm_starts.empty()) fo.initial_designs.push_back(options.warm_starts[i]);
        const FitResult fr =
            fit_gate({spherical_to_axis({rec.polar, rec.azimuth}), rec.chi}, box, fo);
        rec.design = fr.design;
        rec.fidelity = fr.fidelity;
        records[i] = rec;
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < total; ++i) fit_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        const auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= total || failed.load()) return;
                try {
                    fit_one(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
        worker();
        for (std::thread& t : pool) t.join();
        if (failed.load()) std::rethrow_exception(error);
    }

    SweepSummary s;
    s.grid = g;
    s.constraints = box;
    s.seed = options.seed;
    s.targets = std::move(records);
    s.f_min = 1.0;
    for (const TargetRecord& r : s.targets) s.f_min = std::min(s.f_min, r.fidelity);

    s.axis_worst.reserve(static_cast<std::size_t>(g.n_polar) * g.n_azimuth);
    for (int ip = 0; ip < g.n_polar; ++ip)
        for (int ia = 0; ia < g.n_azimuth; ++ia) {
            AxisRecord ar;
            ar.polar = grid_value(kPi, ip, g.n_polar);
            ar.azimuth = grid_value(2.0 * kPi, ia, g.n_azimuth);
            ar.worst_fidelity = 1.0;
            const std::size_t base =
                (static_cast<std::size_t>(ip) * g.n_azimuth + ia) * g.n_angle;
            for (int ic = 0; ic < g.n_angle; ++ic)
                ar.worst_fidelity =
                    std::min(ar.worst_fidelity, s.targets[base + ic].fidelity);
            s.axis_worst.push_back(ar);
        }

    FidelityHistogram h;
    h.min = options.histogram_min;
    h.max = 1.0;
    h.counts.assign(options.histogram_bins, 0);
    for (int i = 0; i <= options.histogram_bins; ++i)
        h.edges.push_back(h.min + (h.max - h.min) * i / options.histogram_bins);
    const double width = (h.max - h.min) / options.histogram_bins;
    for (const TargetRecord& r : s.targets) {
        // Out-of-window fidelities land in the lowest bin, keeping the total.
        const int bin = std::clamp(static_cast<int>(std::floor((r.fidelity - h.min) / width)),
                                   0, options.histogram_bins - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    s.histogram = std::move(h);
    return s;
}

std::vector<ScanRow> constraint_scan(const std::vector<DesignConstraints>& boxes,
                                     const SweepGrid& g, const SweepOptions& options,
                                     bool nested) {
    if (boxes.empty()) throw std::domain_error("constraint_scan: empty constraint list");
    std::vector<ScanRow> rows;
    rows.reserve(boxes.size());
    for (const DesignConstraints& box : boxes) {
        SweepOptions opts = options;
        if (nested && !rows.empty()) {
            opts.warm_starts.clear();
            opts.warm_starts.reserve(rows.back().summary.targets.size());
            for (const TargetRecord& r : rows.back().summary.targets)
                opts.warm_starts.push_back(r.design);
        }
        ScanRow row;
        row.constraints = box;
        row.summary = run_sweep(g, box, opts);
        row.f_min = row.summary.f_min;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string report_json(const SweepSummary& s) {
    using json = nlohmann::ordered_json;
    json j;
    j["schema_version"] = 1;
    j["config"] = {{"grid", json{{"n_polar", s.grid.n_polar},
                                 {"n_azimuth", s.grid.n_azimuth},
                                 {"n_angle", s.grid.n_angle}}},
                   {"constraints", json{{"theta_max", s.constraints.theta_max},
                                        {"length_max", s.constraints.length_max}}},
                   {"seed", s.seed}};
    json targets = json::array();
    for (const TargetRecord& r : s.targets)
        targets.push_back(json{{"polar", r.polar},
                               {"azimuth", r.azimuth},
                               {"chi", r.chi},
                               {"theta_opt", r.design.theta},
                               {"L_opt", r.design.length},
                               {"fidelity", r.fidelity}});
    j["targets"] = std::move(targets);
    json axis = json::array();
    for (const AxisRecord& a : s.axis_worst)
        axis.push_back(json{{"polar", a.polar},
                            {"azimuth", a.azimuth},
                            {"worst_fidelity", a.worst_fidelity}});
    j["aggregates"] = {{"f_min", s.f_min},
                       {"axis_worst", std::move(axis)},
                       {"histogram", json{{"min", s.histogram.min},
                                          {"max", s.histogram.max},
                                          {"edges", s.histogram.edges},
                                          {"counts", s.histogram.counts}}}};
    return j.dump();
}

std::string table_csv(const SweepSummary& s) {
    std::string out = "polar,azimuth,chi,theta_opt,L_opt,fidelity\n";
    for (const TargetRecord& r : s.targets) {
        out += fmt(r.polar);
        out += ',';
        out += fmt(r.azimuth);
        out += ',';
        out += fmt(r.chi);
        out += ',';
        out += fmt(r.design.theta);
        out += ',';
        out += fmt(r.design.length);
        out += ',';
        out += fmt(r.fidelity);
        out += '\n';
    }
    return out;
}

std::string scan_report_json(const std::vector<ScanRow>& rows) {
    using json = nlohmann::ordered_json;
    json j;
    j["schema_version"] = 1;
    json scan = json::array();
    for (const ScanRow& r : rows)
        scan.push_back(json{{"theta_max", r.constraints.theta_max},
                            {"length_max", r.constraints.length_max},
                            {"f_min", r.f_min}});
    j["scan"] = std::move(scan);
    return j.dump();
}

std::string scan_table_csv(const std::vector<ScanRow>& rows) {
    std::string out = "theta_max,length_max,f_min\n";
    for (const ScanRow& r : rows) {
        out += fmt(r.constraints.theta_max);
        out += ',';
        out += fmt(r.constraints.length_max);
        out += ',';
        out += fmt(r.f_min);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace twistgate
