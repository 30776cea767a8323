#include "twistgate/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace twistgate {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Point = std::array<double, 2>;  // (theta, length)

// mt19937_64 with a fixed 53-bit double mapping; the standard distributions
// are not bit-stable across library implementations, and sweep results must
// be byte-reproducible.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int index(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
};

struct Box {
    double theta_max;
    double length_max;
    Point clamp(Point v) const {
        return {std::clamp(v[0], -theta_max, theta_max),
                std::clamp(v[1], 0.0, length_max)};
    }
};

// Counts every probe and keeps the best; ties keep the earlier point so the
// structured seeds win when they are already optimal.
struct Tracker {
    const Unitary2& target;
    std::int64_t evaluations = 0;
    Point best{0.0, 0.0};
    double best_f = -1.0;

    double eval(const Point& v) {
        const double f = fidelity_objective({v[0], v[1]}, target);
        ++evaluations;
        if (f > best_f) {
            best_f = f;
            best = v;
        }
        return f;
    }
};

// Closed-form candidate designs. The pure-retarder family T(0, L) realizes
// any z-rotation (phi = 2 pi L), and the full-turn retarder family
// (phi = 2 pi, i.e. L = sqrt(1 - (theta/pi)^2)) realizes any y-rotation by
// 2 theta; starting from the best member of each family guarantees the
// exactly reachable targets are never missed.
std::vector<Point> structured_seeds(const Unitary2& target, const Box& box) {
    const RotationSpec canon = unitary_to_axis_angle(target);
    const double w = std::cos(0.5 * canon.angle);
    const double s = std::sin(0.5 * canon.angle);
    const double qy = s * canon.axis[1];
    const double qz = s * canon.axis[2];

    std::vector<Point> seeds;
    const double z_base = std::atan2(qz, w) / kPi;  // best L modulo 1
    for (int k = 0; k <= static_cast<int>(std::ceil(box.length_max)) + 1; ++k) {
        const double len = z_base + k;
        if (len < -1e-12) continue;
        if (len > box.length_max + 1e-12) break;
        seeds.push_back(box.clamp({0.0, len}));
        if (seeds.size() >= 3) break;
    }
    const double y_best = std::atan2(qy, w);  // best theta modulo pi
    for (const double theta : {y_best, y_best + kPi, y_best - kPi}) {
        if (std::abs(theta) > box.theta_max + 1e-12) continue;
        const double r = theta / kPi;
        if (1.0 - r * r < 0.0) continue;
        const double len = std::sqrt(1.0 - r * r);
        if (len > box.length_max + 1e-12) continue;
        seeds.push_back(box.clamp({theta, len}));
    }
    seeds.push_back({0.0, 0.0});
    return seeds;
}

// Deterministic coarse scan of the box, appending the most promising points
// to the seed list. Basin selection then never depends on random-stream
// luck: the same box and target always surface the same starting designs.
void lattice_scan(Tracker& t, const Box& box, std::vector<Point>& seeds) {
    constexpr int kThetaPoints = 33, kLengthPoints = 13, kKeep = 4;
    struct Scored {
        double f;
        Point p;
    };
    std::vector<Scored> scored;
    const int n_theta = box.theta_max > 0.0 ? kThetaPoints : 1;
    scored.reserve(static_cast<std::size_t>(n_theta) * kLengthPoints);
    for (int i = 0; i < n_theta; ++i) {
        const double theta =
            n_theta == 1 ? 0.0 : -box.theta_max + 2.0 * box.theta_max * i / (n_theta - 1);
        for (int j = 0; j < kLengthPoints; ++j) {
            const Point p{theta, box.length_max * j / (kLengthPoints - 1)};
            scored.push_back({t.eval(p), p});
        }
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& a, const Scored& b) { return a.f > b.f; });
    for (int k = 0; k < kKeep && k < static_cast<int>(scored.size()); ++k)
        seeds.push_back(scored[static_cast<std::size_t>(k)].p);
}

// Nelder-Mead on -fidelity, clamped to the box. Probes flow through the
// tracker, so polishing can only improve the reported optimum.
void polish(Tracker& t, const Box& box, const FitOptions& opt) {
    struct Vertex {
        Point x;
        double g;
    };
    auto g = [&](const Point& v) { return -t.eval(box.clamp(v)); };

    const Point start = t.best;
    const double dth = box.theta_max > 0.0 ? 0.05 * box.theta_max : 0.0;
    const double dle = 0.05 * box.length_max;
    std::array<Vertex, 3> sx;
    sx[0].x = start;
    sx[1].x = {start[0] + (start[0] + dth <= box.theta_max ? dth : -dth), start[1]};
    sx[2].x = {start[0], start[1] + (start[1] + dle <= box.length_max ? dle : -dle)};
    for (Vertex& v : sx) {
        v.x = box.clamp(v.x);
        v.g = g(v.x);
    }

    const double tol = opt.polish_tol * std::max({1.0, box.theta_max, box.length_max});
    for (int it = 0; it < opt.polish_max_iterations; ++it) {
        std::stable_sort(sx.begin(), sx.end(),
                         [](const Vertex& a, const Vertex& b) { return a.g < b.g; });
        const double size =
            std::max(std::max(std::abs(sx[1].x[0] - sx[0].x[0]), std::abs(sx[2].x[0] - sx[0].x[0])),
                     std::max(std::abs(sx[1].x[1] - sx[0].x[1]), std::abs(sx[2].x[1] - sx[0].x[1])));
        if (size <= tol) break;

        const Point c = {0.5 * (sx[0].x[0] + sx[1].x[0]), 0.5 * (sx[0].x[1] + sx[1].x[1])};
        Point& worst = sx[2].x;
        const Point xr = {c[0] + (c[0] - worst[0]), c[1] + (c[1] - worst[1])};
        const double gr = g(xr);
        if (gr < sx[0].g) {
            const Point xe = {c[0] + 2.0 * (c[0] - worst[0]), c[1] + 2.0 * (c[1] - worst[1])};
            const double ge = g(xe);
            sx[2] = ge < gr ? Vertex{xe, ge} : Vertex{xr, gr};
        } else if (gr < sx[1].g) {
            sx[2] = {xr, gr};
        } else if (gr < sx[2].g) {
            const Point xc = {c[0] + 0.5 * (xr[0] - c[0]), c[1] + 0.5 * (xr[1] - c[1])};
            const double gc = g(xc);
            if (gc <= gr) {
                sx[2] = {xc, gc};
            } else {
                for (int k : {1, 2}) {  // shrink toward the best vertex
                    sx[k].x = {0.5 * (sx[0].x[0] + sx[k].x[0]), 0.5 * (sx[0].x[1] + sx[k].x[1])};
                    sx[k].g = g(sx[k].x);
                }
            }
        } else {
            const Point xc = {c[0] - 0.5 * (c[0] - worst[0]), c[1] - 0.5 * (c[1] - worst[1])};
            const double gc = g(xc);
            if (gc < sx[2].g) {
                sx[2] = {xc, gc};
            } else {
                for (int k : {1, 2}) {
                    sx[k].x = {0.5 * (sx[0].x[0] + sx[k].x[0]), 0.5 * (sx[0].x[1] + sx[k].x[1])};
                    sx[k].g = g(sx[k].x);
                }
            }
        }
    }
}

}  // namespace

double fidelity_objective(const TwistDesign& d, const Unitary2& target) {
    return gate_fidelity(gate_matrix(d), target);
}

FitResult fit_gate(const RotationSpec& target, const DesignConstraints& box,
                   const FitOptions& options) {
    if (!std::isfinite(box.theta_max) || !std::isfinite(box.length_max) ||
        box.theta_max < 0.0 || box.length_max <= 0.0)
        throw std::domain_error("fit_gate: need theta_max >= 0 and length_max > 0");
    if (options.population < 5 || options.max_generations < 0 ||
        options.crossover < 0.0 || options.crossover > 1.0 ||
        !(options.mutation_min <= options.mutation_max))
        throw std::domain_error("fit_gate: invalid optimizer options");

    const Unitary2 ideal = axis_angle_to_unitary(target);
    const Box b{box.theta_max, box.length_max};
    Tracker track{ideal};
    Rng rng(options.seed);

    std::vector<Point> warm;
    warm.reserve(options.initial_designs.size());
    for (const TwistDesign& d : options.initial_designs) {
        if (!std::isfinite(d.theta) || !std::isfinite(d.length))
            throw std::domain_error("fit_gate: initial designs must be finite");
        warm.push_back(b.clamp({d.theta, d.length}));
    }

    // Closed-form candidates first: exactly reachable targets finish here.
    std::vector<Point> pop = structured_seeds(ideal, b);
    for (const Point& p : pop) track.eval(p);

    if (1.0 - track.best_f > options.fidelity_tol) {
        // Population: seeds, lattice picks, warm starts, then random fill.
        lattice_scan(track, b, pop);
        pop.insert(pop.end(), warm.begin(), warm.end());
        const int P = std::max<int>(options.population, static_cast<int>(pop.size()) + 4);
        while (static_cast<int>(pop.size()) < P)
            pop.push_back(
                {rng.uniform(-b.theta_max, b.theta_max), rng.uniform(0.0, b.length_max)});
        std::vector<double> fit(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = track.eval(pop[i]);

        // Differential evolution, rand/1/bin with per-generation dithered
        // weight.
        for (int gen = 0;
             gen < options.max_generations && 1.0 - track.best_f > options.fidelity_tol; ++gen) {
            const double weight = rng.uniform(options.mutation_min, options.mutation_max);
            for (int i = 0; i < P; ++i) {
                int r1, r2, r3;
                do r1 = rng.index(P); while (r1 == i);
                do r2 = rng.index(P); while (r2 == i || r2 == r1);
                do r3 = rng.index(P); while (r3 == i || r3 == r1 || r3 == r2);
                const int jrand = rng.index(2);
                Point trial = pop[i];
                for (int j = 0; j < 2; ++j) {
                    const double u = rng.uniform01();
                    if (u < options.crossover || j == jrand)
                        trial[j] = pop[r1][j] + weight * (pop[r2][j] - pop[r3][j]);
                }
                trial = b.clamp(trial);
                const double ft = track.eval(trial);
                if (ft >= fit[i]) {
                    pop[i] = trial;
                    fit[i] = ft;
                }
            }
        }

        if (1.0 - track.best_f > options.fidelity_tol) polish(track, b, options);
    }

    FitResult out;
    out.design = {track.best[0], track.best[1]};
    out.fidelity = track.best_f;
    out.target = target;
    out.evaluations = track.evaluations;
    out.seed = options.seed;
    return out;
}

}  // namespace twistgate
