// twistgate: evaluate, fit, and survey twisted-waveguide polarization gates.
//
// Exit codes: 0 success, 2 usage/parse error, 1 computation or I/O error.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twistgate/sweep.hpp"

namespace {

using namespace twistgate;

constexpr double kPi = 3.14159265358979323846;

// Usage-level failure (bad flag values); maps to exit code 2.
struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Strict double parse with an optional "pi" suffix: "3", "800e-9", "pi",
// "-pi", "0.25pi", "20pi".
double parse_number(const std::string& raw) {
    std::string s;
    for (const char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    double scale = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        scale = kPi;
        s.erase(s.size() - 2);
        if (s.empty() || s == "+") return scale;
        if (s == "-") return -scale;
    }
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw CliError("cannot parse number '" + raw + "' (use e.g. 1.5, 800e-9, 20pi)");
    return v * scale;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string num(double v, int digits) {
    std::ostringstream o;
    o << std::setprecision(digits) << v;
    return o.str();
}

std::string cnum(complexd z, int digits) {
    std::ostringstream o;
    o << std::setprecision(digits) << z.real() << (std::signbit(z.imag()) ? "-" : "+")
      << std::setprecision(digits) << std::abs(z.imag()) << "i";
    return o.str();
}

std::string vec(const Vec3& v, int digits) {
    return "(" + num(v[0], digits) + ", " + num(v[1], digits) + ", " + num(v[2], digits) + ")";
}

// Output files must be openable before any computation starts.
std::optional<std::ofstream> open_output(const std::string& path) {
    if (path.empty()) return std::nullopt;
    std::optional<std::ofstream> f;
    f.emplace(path, std::ios::binary | std::ios::trunc);
    if (!*f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

void emit(std::optional<std::ofstream>& f, const std::string& contents, const std::string& path) {
    if (!f) return;
    f->write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f->flush();
    if (!*f) throw std::runtime_error("write failed: " + path);
}

struct GateArgs {
    std::string theta, length;
    int digits = 9;
};

void run_gate(const GateArgs& a) {
    const TwistDesign d{parse_number(a.theta), parse_number(a.length)};
    const DerivedAngles angles = derive_angles(d);
    const Unitary2 t = gate_matrix(d);
    const RotationSpec rot = gate_axis_angle(d);
    const ModeAnalysis modes = mode_analysis(d);
    const int dg = a.digits;
    std::cout << "theta           = " << num(d.theta, dg) << "\n"
              << "length          = " << num(d.length, dg) << "\n"
              << "psi             = " << num(angles.psi, dg) << "\n"
              << "phi             = " << num(angles.phi, dg) << "\n"
              << "matrix          = [ " << cnum(t.a, dg) << "  " << cnum(t.b, dg) << " ]\n"
              << "                  [ " << cnum(t.c, dg) << "  " << cnum(t.d, dg) << " ]\n"
              << "axis            = " << vec(rot.axis, dg) << "\n"
              << "chi             = " << num(rot.angle, dg) << "\n"
              << "stokes0         = " << vec(modes.stokes0, dg) << "\n"
              << "delta_beta_norm = " << num(modes.delta_beta_norm, dg) << "\n";
}

struct FitArgs {
    std::string axis, polar, azimuth, chi;
    std::string theta_max = "20pi", length_max = "3";
    std::uint64_t seed = 0;
    std::string out;
    int digits = 9;
};

RotationSpec parse_target(const FitArgs& a) {
    const bool have_axis = !a.axis.empty();
    const bool have_sph = !a.polar.empty() || !a.azimuth.empty();
    if (have_axis == have_sph)
        throw CliError("give the target as either --axis X,Y,Z or --polar P --azimuth A");
    RotationSpec target;
    if (have_axis) {
        const std::vector<std::string> parts = split(a.axis, ',');
        if (parts.size() != 3) throw CliError("--axis needs three comma-separated components");
        Vec3 n{parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2])};
        const double len = norm(n);
        if (!(len > 0.0) || !std::isfinite(len)) throw CliError("--axis must be a nonzero vector");
        target.axis = {n[0] / len, n[1] / len, n[2] / len};
    } else {
        if (a.polar.empty() || a.azimuth.empty())
            throw CliError("--polar and --azimuth must be given together");
        try {
            target.axis = spherical_to_axis({parse_number(a.polar), parse_number(a.azimuth)});
        } catch (const std::domain_error& e) {
            throw CliError(e.what());
        }
    }
    target.angle = parse_number(a.chi);
    return target;
}

void run_fit(const FitArgs& a) {
    const RotationSpec target = parse_target(a);
    const DesignConstraints box{parse_number(a.theta_max), parse_number(a.length_max)};
    std::optional<std::ofstream> out = open_output(a.out);

    FitOptions options;
    options.seed = a.seed;
    const FitResult fr = fit_gate(target, box, options);

    const int dg = a.digits;
    std::cout << "target axis = " << vec(target.axis, dg) << ", chi = " << num(target.angle, dg)
              << "\n"
              << "box         : theta_max = " << num(box.theta_max, dg)
              << ", length_max = " << num(box.length_max, dg) << "\n"
              << "theta       = " << num(fr.design.theta, dg) << "\n"
              << "length      = " << num(fr.design.length, dg) << "\n"
              << "fidelity    = " << num(fr.fidelity, dg) << "\n"
              << "evaluations = " << fr.evaluations << "\n"
              << "seed        = " << fr.seed << "\n";

    if (out) {
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        j["target"] = {{"axis", std::vector<double>{target.axis.begin(), target.axis.end()}},
                       {"chi", target.angle}};
        j["constraints"] = {{"theta_max", box.theta_max}, {"length_max", box.length_max}};
        j["design"] = {{"theta", fr.design.theta}, {"length", fr.design.length}};
        j["fidelity"] = fr.fidelity;
        j["evaluations"] = fr.evaluations;
        j["seed"] = fr.seed;
        emit(out, j.dump(2) + "\n", a.out);
    }
}

struct SweepArgs {
    std::string grid = "9,17,5";
    std::string theta_max = "20pi", length_max = "3";
    std::string scan;
    std::uint64_t seed = 0;
    int jobs = 1;
    double hist_min = 0.9;
    int hist_bins = 50;
    std::string out, csv;
    int digits = 9;
};

SweepGrid parse_grid(const std::string& s) {
    const std::vector<std::string> parts = split(s, ',');
    if (parts.size() != 3) throw CliError("--grid needs n_polar,n_azimuth,n_angle");
    int dims[3];
    for (int i = 0; i < 3; ++i) {
        const std::string& p = parts[i];
        const char* end = p.data() + p.size();
        const auto res = std::from_chars(p.data(), end, dims[i]);
        if (res.ec != std::errc() || res.ptr != end || dims[i] < 1)
            throw CliError("--grid counts must be integers >= 1, got '" + p + "'");
    }
    return {dims[0], dims[1], dims[2]};
}

std::vector<DesignConstraints> parse_scan(const std::string& s, double theta_max_default) {
    if (s == "default")
        return {{theta_max_default, 1.0}, {theta_max_default, 2.0}, {theta_max_default, 3.0}};
    std::vector<DesignConstraints> boxes;
    for (const std::string& pair : split(s, ',')) {
        const std::vector<std::string> parts = split(pair, ':');
        if (parts.size() != 2)
            throw CliError("--scan expects THETA_MAX:LENGTH_MAX pairs, got '" + pair + "'");
        boxes.push_back({parse_number(parts[0]), parse_number(parts[1])});
    }
    return boxes;
}

void run_sweep_cmd(const SweepArgs& a) {
    const SweepGrid grid = parse_grid(a.grid);
    const double theta_max = parse_number(a.theta_max);
    std::optional<std::ofstream> out = open_output(a.out);
    std::optional<std::ofstream> csv = open_output(a.csv);

    SweepOptions options;
    options.seed = a.seed;
    options.jobs = a.jobs;
    options.histogram_min = a.hist_min;
    options.histogram_bins = a.hist_bins;

    const int dg = a.digits;
    if (!a.scan.empty()) {
        const std::vector<ScanRow> rows = constraint_scan(parse_scan(a.scan, theta_max), grid, options);
        for (const ScanRow& r : rows)
            std::cout << "F_min = " << num(r.f_min, dg)
                      << " (theta_max = " << num(r.constraints.theta_max, dg)
                      << ", length_max = " << num(r.constraints.length_max, dg) << ")\n";
        emit(out, scan_report_json(rows) + "\n", a.out);
        emit(csv, scan_table_csv(rows), a.csv);
        return;
    }
    const DesignConstraints box{theta_max, parse_number(a.length_max)};
    const SweepSummary s = run_sweep(grid, box, options);
    std::cout << "F_min = " << num(s.f_min, dg) << " (theta_max = " << num(box.theta_max, dg)
              << ", length_max = " << num(box.length_max, dg) << ", targets = "
              << s.targets.size() << ")\n";
    emit(out, report_json(s) + "\n", a.out);
    emit(csv, table_csv(s), a.csv);
}

struct UnitsArgs {
    double dn = 0.0, wl = 0.0;
    std::string theta, length;
    int digits = 9;
};

void run_units(const UnitsArgs& a) {
    if (a.theta.empty() != a.length.empty())
        throw CliError("--theta and --length must be given together");
    const PhysicalParams p{a.dn, a.wl};
    const int dg = a.digits;
    std::cout << "beat_length = " << num(beat_length(p) * 1e2, dg) << " cm\n";
    if (!a.theta.empty()) {
        const PhysicalDesign phys =
            physical_design({parse_number(a.theta), parse_number(a.length)}, p);
        std::cout << "length      = " << num(phys.length * 1e3, dg) << " mm\n";
        if (phys.pitch)
            std::cout << "pitch       = " << num(*phys.pitch * 1e3, dg) << " mm\n";
        else
            std::cout << "pitch       = none (untwisted)\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted-waveguide polarization gate toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file ([gate]/[fit]/[sweep]/[units] sections)");

    GateArgs ga;
    CLI::App* gate = app.add_subcommand("gate", "Evaluate one design: angles, matrix, axis-angle, modes");
    gate->add_option("--theta", ga.theta, "twist angle in radians (accepts a pi suffix, e.g. 0.25pi)")
        ->required();
    gate->add_option("--length", ga.length, "length in beat lengths")->required();
    gate->add_option("--digits", ga.digits, "printed precision (default 9)");

    FitArgs fa;
    CLI::App* fit = app.add_subcommand("fit", "Find the best design for a target rotation");
    fit->add_option("--axis", fa.axis, "target axis X,Y,Z (normalized)");
    fit->add_option("--polar", fa.polar, "target axis polar angle [0, pi]");
    fit->add_option("--azimuth", fa.azimuth, "target axis azimuth [0, 2pi]");
    fit->add_option("--chi", fa.chi, "target rotation angle")->required();
    fit->add_option("--theta-max", fa.theta_max, "twist limit (default 20pi)");
    fit->add_option("--length-max", fa.length_max, "length limit in beat lengths (default 3)");
    fit->add_option("--seed", fa.seed, "optimizer seed")->envname("TWISTGATE_SEED");
    fit->add_option("--out", fa.out, "write the result as JSON to this path");
    fit->add_option("--digits", fa.digits, "printed precision (default 9)");

    SweepArgs sa;
    CLI::App* sweep = app.add_subcommand("sweep", "Fit every rotation on a grid and aggregate");
    sweep->add_option("--grid", sa.grid, "n_polar,n_azimuth,n_angle (default 9,17,5; full run 33,65,17)");
    sweep->add_option("--theta-max", sa.theta_max, "twist limit (default 20pi)");
    sweep->add_option("--length-max", sa.length_max, "length limit (default 3)");
    sweep->add_option("--scan", sa.scan,
                      "THETA_MAX:LENGTH_MAX pairs, comma separated; 'default' = length 1,2,3");
    sweep->add_option("--seed", sa.seed, "base seed")->envname("TWISTGATE_SEED");
    sweep->add_option("--jobs", sa.jobs, "worker threads (never changes results)");
    sweep->add_option("--hist-min", sa.hist_min, "histogram lower edge (default 0.9)");
    sweep->add_option("--hist-bins", sa.hist_bins, "histogram bin count (default 50)");
    sweep->add_option("--out", sa.out, "write the JSON report to this path");
    sweep->add_option("--csv", sa.csv, "write the per-target CSV table to this path");
    sweep->add_option("--digits", sa.digits, "printed precision (default 9)");

    UnitsArgs ua;
    CLI::App* units = app.add_subcommand("units", "Convert a design to physical units");
    units->add_option("--dn", ua.dn, "modal birefringence delta_n")->required();
    units->add_option("--wl", ua.wl, "vacuum wavelength in meters")->required();
    units->add_option("--theta", ua.theta, "design twist angle");
    units->add_option("--length", ua.length, "design length in beat lengths");
    units->add_option("--digits", ua.digits, "printed precision (default 9)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gate->parsed()) run_gate(ga);
        if (fit->parsed()) run_fit(fa);
        if (sweep->parsed()) run_sweep_cmd(sa);
        if (units->parsed()) run_units(ua);
        return 0;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
