#include "ecodrive/warmstart.hpp"

#include <algorithm>
#include <cmath>

namespace ecodrive {

namespace {

constexpr double kCeilingMargin = 0.02; // m/s, applied where the ceiling binds
constexpr int kBisectIters = 50;

// Lowest velocity reachable over one stage with any feasible mode/gear.
// Downhill and Cruise hold speed, so scanning everything is fine.
double strongest_step(const Vehicle& veh, double v, double alpha, double ds) {
    double best = v; // holding speed is the fallback
    bool any = false;
    for (Mode m : kAllModes) {
        if (m == Mode::Downhill) continue; // never decelerates
        const int g_lo = m == Mode::EcoRoll ? 0 : 1;
        const int g_hi = m == Mode::EcoRoll ? 0 : veh.params().num_gears();
        for (int g = g_lo; g <= g_hi; ++g) {
            const ModeEval e = veh.evaluate({m, g}, v, alpha, false);
            if (!e.feasible) continue;
            const double next = v + ds * e.dvds;
            best = any ? std::min(best, next) : next;
            any = true;
        }
    }
    return best;
}

} // namespace

std::vector<std::pair<int, double>> segment_events(const Horizon& h,
                                                   double v_ref) {
    std::vector<std::pair<int, double>> events;
    for (int i = 1; i < h.stages; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (h.v_max[k] != h.v_max[k - 1]) events.emplace_back(i, h.v_max[k]);
    }
    events.emplace_back(h.stages, v_ref);
    return events;
}

std::vector<double> EnvelopeWarmStart::ceiling(const Vehicle& veh,
                                               const Horizon& h) const {
    const std::size_t n = static_cast<std::size_t>(h.stages);
    std::vector<double> c(n + 1);
    c[n] = h.v_max_t[n];
    for (int i = h.stages - 1; i >= 0; --i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double a = h.grade[k];
        const double target = c[k + 1];
        if (strongest_step(veh, h.v_max_t[k], a, h.ds_m) <= target) {
            c[k] = h.v_max_t[k];
            continue;
        }
        if (strongest_step(veh, h.v_min_t[k], a, h.ds_m) > target) {
            c[k] = h.v_min_t[k] - 1.0; // collapse: below the corridor
            continue;
        }
        double lo = h.v_min_t[k], hi = h.v_max_t[k];
        for (int it = 0; it < kBisectIters; ++it) {
            const double mid = 0.5 * (lo + hi);
            (strongest_step(veh, mid, a, h.ds_m) <= target ? lo : hi) = mid;
        }
        c[k] = std::max(h.v_min_t[k], lo - kCeilingMargin);
    }
    return c;
}

WarmStartResult EnvelopeWarmStart::generate(const Vehicle& veh,
                                            const Horizon& h,
                                            const SolverConfig& cfg,
                                            double v0) {
    WarmStartResult out;
    const std::vector<double> c = ceiling(veh, h);
    if (v0 < h.v_min_t[0] || v0 > c[0]) return out;

    const int n_gears = veh.params().num_gears();
    out.velocities.assign(1, v0);
    out.cum_cost.assign(1, 0.0);

    double v = v0;
    for (int i = 0; i < h.stages; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double a = h.grade[k];
        const bool downhill_ok = veh.downhill_allowed(v, a);

        bool found = false;
        double best_v = 0, best_cost = 0;
        ModeGear best_mg;
        for (Mode m : kAllModes) {
            const int g_lo = m == Mode::EcoRoll ? 0 : 1;
            const int g_hi = m == Mode::EcoRoll ? 0 : n_gears;
            for (int g = g_lo; g <= g_hi; ++g) {
                const ModeGear mg{m, g};
                const ModeEval e = veh.evaluate(mg, v, a, downhill_ok);
                if (!e.feasible) continue;
                const double next = v + h.ds_m * e.dvds;
                if (next < h.v_min_t[k + 1] || next > c[k + 1]) continue;
                const auto sc = stage_cost(veh, mg, v, next, a, cfg);
                if (!sc) continue;
                // Ride as high as allowed; break velocity ties toward the
                // cheaper stage (mode/gear order settles exact ties).
                if (!found || next > best_v ||
                    (next == best_v && sc->weighted < best_cost)) {
                    found = true;
                    best_v = next;
                    best_cost = sc->weighted;
                    best_mg = mg;
                }
            }
        }
        if (!found) return WarmStartResult{};

        out.modes.push_back(best_mg);
        out.velocities.push_back(best_v);
        out.cum_cost.push_back(out.cum_cost.back() + best_cost);
        v = best_v;
    }

    out.feasible = true;
    out.upper_bound =
        out.cum_cost.back() + terminal_cost(v, terminal_ref(h, cfg), cfg.beta);
    return out;
}

} // namespace ecodrive
