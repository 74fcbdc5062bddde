#include "ecodrive/route.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ecodrive/config.hpp"
#include "ecodrive/errors.hpp"
#include "ecodrive/vehicle.hpp"

namespace ecodrive {

namespace {

std::size_t segment_index(const std::vector<RoutePoint>& pts, double s) {
    // Piecewise-constant: points[i] applies on [s_i, s_{i+1}).
    auto it = std::upper_bound(
        pts.begin(), pts.end(), s,
        [](double a, const RoutePoint& p) { return a < p.s_m; });
    if (it == pts.begin()) return 0;
    return static_cast<std::size_t>(it - pts.begin()) - 1;
}

constexpr int kBisectIters = 60;

} // namespace

double RouteProfile::grade(double s) const {
    return points[segment_index(points, s)].grade_rad;
}

double RouteProfile::v_min(double s) const {
    return points[segment_index(points, s)].v_min_mps;
}

double RouteProfile::v_max(double s) const {
    return points[segment_index(points, s)].v_max_mps;
}

void RouteProfile::validate() const {
    auto bad = [&](std::size_t row, const std::string& what) {
        throw ValidationError("route '" + name + "' row " +
                              std::to_string(row + 1) + ": " + what);
    };
    if (points.size() < 2)
        throw ValidationError("route '" + name +
                              "' needs at least two breakpoints");
    if (points.front().s_m != 0)
        throw ValidationError("route '" + name + "' must start at s = 0");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const RoutePoint& p = points[i];
        if (i > 0 && !(p.s_m > points[i - 1].s_m))
            bad(i, "positions must be strictly increasing");
        if (std::abs(p.grade_rad) > 0.09)
            bad(i, "grade beyond +-0.09 rad is not supported");
        if (!(p.v_max_mps >= kSpeedFloorMps))
            bad(i, "v_max below the 10 km/h crawl floor");
        if (p.v_min_mps < 0) bad(i, "negative v_min");
        if (p.v_min_mps > p.v_max_mps) bad(i, "v_min above v_max");
    }
}

RouteProfile load_route_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    RouteProfile route;
    route.name = path;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "s_m,grade_rad,vmin_mps,vmax_mps")
                throw ValidationError(
                    path + ":" + std::to_string(lineno) +
                    ": expected header 's_m,grade_rad,vmin_mps,vmax_mps'");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) {
            try {
                vals.push_back(parse_double(cell));
            } catch (const ValidationError& e) {
                throw ValidationError(path + ":" + std::to_string(lineno) +
                                      ": " + e.what());
            }
        }
        if (vals.size() != 4)
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": expected 4 columns");
        route.points.push_back({vals[0], vals[1], vals[2], vals[3]});
    }
    if (!header_seen)
        throw ValidationError(path + ": missing header row");
    route.validate();
    return route;
}

void save_route_csv(const RouteProfile& route, const std::string& path) {
    route.validate();
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "s_m,grade_rad,vmin_mps,vmax_mps\n";
    for (const RoutePoint& p : route.points)
        out << format_double(p.s_m) << ',' << format_double(p.grade_rad) << ','
            << format_double(p.v_min_mps) << ',' << format_double(p.v_max_mps)
            << '\n';
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

Horizon resample(const RouteProfile& route, double s0, int stages, double ds) {
    route.validate();
    if (stages < 1) throw ValidationError("horizon needs at least one stage");
    if (!(ds > 0)) throw ValidationError("stage length must be positive");
    if (s0 < 0 || s0 + stages * ds > route.length_m() + 1e-6)
        throw ValidationError("window [" + format_double(s0) + ", " +
                              format_double(s0 + stages * ds) +
                              "] leaves route '" + route.name + "' (length " +
                              format_double(route.length_m()) + ")");
    Horizon h;
    h.s0_m = s0;
    h.ds_m = ds;
    h.stages = stages;
    h.grade.resize(static_cast<std::size_t>(stages));
    for (int i = 0; i < stages; ++i)
        h.grade[static_cast<std::size_t>(i)] = route.grade(s0 + (i + 0.5) * ds);
    h.v_min.resize(static_cast<std::size_t>(stages) + 1);
    h.v_max.resize(static_cast<std::size_t>(stages) + 1);
    for (int i = 0; i <= stages; ++i) {
        // Query a hair inside the route at the very end so the final node
        // picks up the last segment's values.
        const double s = std::min(h.node_position(i), route.length_m() - 1e-9);
        h.v_min[static_cast<std::size_t>(i)] =
            std::max(route.v_min(s), kSpeedFloorMps);
        h.v_max[static_cast<std::size_t>(i)] = route.v_max(s);
        if (h.v_min[static_cast<std::size_t>(i)] >
            h.v_max[static_cast<std::size_t>(i)])
            throw InfeasibleError("speed corridor empty at s = " +
                                  format_double(h.node_position(i)));
    }
    h.v_min_t = h.v_min;
    h.v_max_t = h.v_max;
    return h;
}

namespace {

// Most-braking successor of v over one stage (forward Euler on the
// envelope). Monotone increasing in v: the braking-power term shrinks and
// the drag correction is far below 1 for realistic stage lengths.
double brake_step(const Vehicle& veh, double v, double alpha, double ds) {
    return v + ds * veh.min_accel_slope(v, alpha);
}

// Full-power successor. Not monotone at low speed, but convex in v for
// the supported grade range, so interval extremes sit at the endpoints.
double power_step(const Vehicle& veh, double v, double alpha, double ds) {
    return v + ds * veh.max_accel_slope(v, alpha);
}

} // namespace

void tighten_bounds(Horizon& h, const Vehicle& veh) {
    const int n = h.stages;
    const double ds = h.ds_m;
    auto& lo = h.v_min_t;
    auto& hi = h.v_max_t;

    auto infeasible = [&](int node) {
        throw InfeasibleError(
            "speed corridor collapses at s = " +
            format_double(h.node_position(node)) +
            " (bounds unreachable under the vehicle's envelope)");
    };

    for (int sweep = 0; sweep < 2 * (n + 2); ++sweep) {
        bool changed = false;
        auto shrink = [&](double& slot, double value) {
            if (value < slot) {
                slot = value;
                changed = true;
            }
        };
        auto grow = [&](double& slot, double value) {
            if (value > slot) {
                slot = value;
                changed = true;
            }
        };

        // Forward: what the envelope can reach at node i+1 from node i.
        for (int i = 0; i < n; ++i) {
            const double a = h.grade[static_cast<std::size_t>(i)];
            const std::size_t j = static_cast<std::size_t>(i);
            // Fastest reachable: maximize the convex power step over the
            // current interval -> endpoint maximum.
            shrink(hi[j + 1], std::max(power_step(veh, lo[j], a, ds),
                                       power_step(veh, hi[j], a, ds)));
            // Slowest reachable: the monotone brake step at the lower end.
            grow(lo[j + 1], brake_step(veh, lo[j], a, ds));
            if (lo[j + 1] > hi[j + 1]) infeasible(i + 1);
        }

        // Backward: which node-i speeds still allow hitting [lo, hi] at i+1.
        for (int i = n - 1; i >= 0; --i) {
            const double a = h.grade[static_cast<std::size_t>(i)];
            const std::size_t j = static_cast<std::size_t>(i);

            // Largest v with brake_step(v) <= hi[j+1]; brake_step is
            // monotone, so bisect. Keep the bracket end that satisfies the
            // constraint so the trigger is false on the next sweep and the
            // fixpoint is exact; the foregone sliver is a few ulps wide.
            if (brake_step(veh, hi[j], a, ds) > hi[j + 1]) {
                if (brake_step(veh, lo[j], a, ds) > hi[j + 1]) infeasible(i);
                double a_lo = lo[j], a_hi = hi[j];
                for (int it = 0; it < kBisectIters; ++it) {
                    const double mid = 0.5 * (a_lo + a_hi);
                    (brake_step(veh, mid, a, ds) <= hi[j + 1] ? a_lo : a_hi) =
                        mid;
                }
                shrink(hi[j], a_lo);
            }

            // Smallest v with power_step(v) >= lo[j+1]; the step is convex
            // with its interval maximum at an endpoint, and it crosses the
            // target once going up on this bracket.
            if (power_step(veh, lo[j], a, ds) < lo[j + 1]) {
                if (power_step(veh, hi[j], a, ds) < lo[j + 1]) infeasible(i);
                double a_lo = lo[j], a_hi = hi[j];
                for (int it = 0; it < kBisectIters; ++it) {
                    const double mid = 0.5 * (a_lo + a_hi);
                    (power_step(veh, mid, a, ds) >= lo[j + 1] ? a_hi : a_lo) =
                        mid;
                }
                grow(lo[j], a_hi);
            }
            if (lo[j] > hi[j]) infeasible(i);
        }

        if (!changed) return;
    }
    // The passes only ever shrink the corridor and every shrink is bounded
    // below, so non-convergence within the sweep cap means oscillation in
    // the last few ulps; accept the current corridor.
}

} // namespace ecodrive
