#ifndef ECODRIVE_TESTS_SUPPORT_HPP
#define ECODRIVE_TESTS_SUPPORT_HPP

// Builders and exhaustive reference algorithms shared by the unit tests and
// the acceptance checks.  The enumerator mirrors the solver's child rules
// (entry feasibility, corridor containment, midpoint costing) with the same
// floating-point expressions, so optimal costs are comparable bit for bit.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "ecodrive/heuristic.hpp"
#include "ecodrive/ocp.hpp"
#include "ecodrive/route.hpp"
#include "ecodrive/vehicle.hpp"

namespace ecodrive::testsupport {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Small three-gear truck used across the tests: same chassis as the
/// default vehicle but a coarse gearbox and no spinning inertia, which
/// keeps exhaustive searches tiny and the energy bookkeeping simple.
inline VehicleParams toy_params() {
    VehicleParams p;
    p.name = "toy3";
    p.mass_kg = 40000;
    p.air_density = 1.188;
    p.drag_coeff = 0.56;
    p.frontal_area_m2 = 10.0;
    p.gravity = 9.81;
    p.roll_coeff = 0.0055;
    p.wheel_radius_m = 0.5;
    p.final_drive_ratio = 3.0;
    p.final_drive_eff = 0.96;
    p.gear_ratio = {3.0, 1.8, 1.0};
    p.gear_loss_coeff = {{0.006, 0.02, 8.0},
                         {0.005, 0.015, 6.0},
                         {0.004, 0.01, 5.0}};
    p.powertrain_inertia = {0.0, 0.0, 0.0};
    p.driveline_inertia = 0.0;
    p.idle_speed_rpm = 600;
    p.idle_fuel_gps = 0.3;
    p.fuel_coeff = {0.06, 1.2e-4, 2.5e-5, 9.0e-8, 6.1e-6, 2.0e-7};
    p.engine_friction_nm = LinearTable({600, 1400, 2100}, {100, 160, 220});
    p.engine_torque_max_nm =
        LinearTable({600, 1000, 1500, 2100}, {1600, 2300, 2300, 1600});
    p.brake_torque_max_nm =
        LinearTable({600, 1400, 2100}, {250, 800, 1250});
    p.omega_min_rpm = 600;
    p.omega_max_rpm = 2100;
    p.fuel_energy_j_per_g = 42600;
    p.eta_opt = 0.45;
    return p;
}

inline const Vehicle& toy_vehicle() {
    static const Vehicle veh(toy_params());
    return veh;
}

/// Horizon with synthetic bounds (tightened copies start equal to raw).
inline Horizon make_horizon(const std::vector<double>& grades, double ds,
                            const std::vector<double>& lo,
                            const std::vector<double>& hi) {
    Horizon h;
    h.s0_m = 0;
    h.ds_m = ds;
    h.stages = static_cast<int>(grades.size());
    h.grade = grades;
    h.v_min = lo;
    h.v_max = hi;
    h.v_min_t = lo;
    h.v_max_t = hi;
    return h;
}

inline Horizon flat_horizon(int stages, double ds, double grade, double lo,
                            double hi) {
    return make_horizon(std::vector<double>(static_cast<std::size_t>(stages),
                                            grade),
                        ds,
                        std::vector<double>(static_cast<std::size_t>(stages) + 1,
                                            lo),
                        std::vector<double>(static_cast<std::size_t>(stages) + 1,
                                            hi));
}

struct EnumResult {
    double best = kInf;
    std::vector<ModeGear> modes;
    std::vector<double> velocities; // stages+1 entries when feasible
    std::int64_t paths = 0;         // complete feasible sequences seen
};

namespace detail {

inline void enum_rec(const Vehicle& veh, const Horizon& h,
                     const SolverConfig& cfg, double v_ref, int stage,
                     double v, double g, std::vector<ModeGear>& path,
                     std::vector<double>& vel, EnumResult& out) {
    if (stage == h.stages) {
        const double total = g + terminal_cost(v, v_ref, cfg.beta);
        ++out.paths;
        if (total < out.best) {
            out.best = total;
            out.modes = path;
            out.velocities = vel;
        }
        return;
    }
    const std::size_t k = static_cast<std::size_t>(stage);
    const double alpha = h.grade[k];
    const double wf = cfg.weight_fuel();
    const double wt = cfg.weight_time();
    const bool downhill_ok = veh.downhill_allowed(v, alpha);
    const int n_gears = veh.params().num_gears();
    for (Mode m : kAllModes) {
        const int g_lo = m == Mode::EcoRoll ? 0 : 1;
        const int g_hi = m == Mode::EcoRoll ? 0 : n_gears;
        for (int gear = g_lo; gear <= g_hi; ++gear) {
            const ModeGear mg{m, gear};
            const ModeEval e = veh.evaluate(mg, v, alpha, downhill_ok);
            if (!e.feasible) continue;
            const double v2 = v + h.ds_m * e.dvds;
            if (v2 < h.v_min_t[k + 1] || v2 > h.v_max_t[k + 1]) continue;
            const double vm = 0.5 * (v + v2);
            const ModeEval mid = veh.evaluate(mg, vm, alpha, downhill_ok);
            if (!mid.feasible) continue;
            const double dt = h.ds_m / vm;
            const double fuel_g = mid.fuel_gps * dt;
            const double g2 = g + (wf * fuel_g + wt * dt);
            path.push_back(mg);
            vel.push_back(v2);
            enum_rec(veh, h, cfg, v_ref, stage + 1, v2, g2, path, vel, out);
            path.pop_back();
            vel.pop_back();
        }
    }
}

/// Minimum completion cost from (stage, v); +inf on dead ends.  When a
/// heuristic is supplied, every state with a finite completion is checked
/// for admissibility of the sampled bound.
inline double togo_rec(const Vehicle& veh, const Horizon& h,
                       const SolverConfig& cfg, double v_ref,
                       const Heuristic* heur, int stage, double v,
                       std::int64_t* checked, std::int64_t* violations) {
    double togo;
    if (stage == h.stages) {
        togo = terminal_cost(v, v_ref, cfg.beta);
    } else {
        togo = kInf;
        const std::size_t k = static_cast<std::size_t>(stage);
        const double alpha = h.grade[k];
        const double wf = cfg.weight_fuel();
        const double wt = cfg.weight_time();
        const bool downhill_ok = veh.downhill_allowed(v, alpha);
        const int n_gears = veh.params().num_gears();
        for (Mode m : kAllModes) {
            const int g_lo = m == Mode::EcoRoll ? 0 : 1;
            const int g_hi = m == Mode::EcoRoll ? 0 : n_gears;
            for (int gear = g_lo; gear <= g_hi; ++gear) {
                const ModeGear mg{m, gear};
                const ModeEval e = veh.evaluate(mg, v, alpha, downhill_ok);
                if (!e.feasible) continue;
                const double v2 = v + h.ds_m * e.dvds;
                if (v2 < h.v_min_t[k + 1] || v2 > h.v_max_t[k + 1]) continue;
                const double vm = 0.5 * (v + v2);
                const ModeEval mid = veh.evaluate(mg, vm, alpha, downhill_ok);
                if (!mid.feasible) continue;
                const double dt = h.ds_m / vm;
                const double fuel_g = mid.fuel_gps * dt;
                const double edge = wf * fuel_g + wt * dt;
                const double rest =
                    togo_rec(veh, h, cfg, v_ref, heur, stage + 1, v2,
                             checked, violations);
                if (edge + rest < togo) togo = edge + rest;
            }
        }
    }
    if (heur && togo < kInf) {
        ++*checked;
        if (heur->sample(stage, v) > togo) ++*violations;
    }
    return togo;
}

} // namespace detail

/// Exhaustive optimum over all mode-gear sequences from v0.
inline EnumResult enumerate_exact(const Vehicle& veh, const Horizon& h,
                                  const SolverConfig& cfg, double v0) {
    EnumResult out;
    std::vector<ModeGear> path;
    std::vector<double> vel{v0};
    detail::enum_rec(veh, h, cfg, terminal_ref(h, cfg), 0, v0, 0.0, path,
                     vel, out);
    return out;
}

struct AdmissibilityReport {
    std::int64_t checked = 0;
    std::int64_t violations = 0;
};

/// Walk the full reachable tree from v0 and compare the heuristic's sampled
/// bound against the true optimal completion at every state.
inline AdmissibilityReport check_admissibility(const Vehicle& veh,
                                               const Horizon& h,
                                               const SolverConfig& cfg,
                                               const Heuristic& heur,
                                               double v0) {
    AdmissibilityReport rep;
    detail::togo_rec(veh, h, cfg, terminal_ref(h, cfg), &heur, 0, v0,
                     &rep.checked, &rep.violations);
    return rep;
}

/// Deterministic engine-draw helper (identical on every platform).
inline std::uint64_t draw(std::uint64_t& state) {
    // splitmix64; good enough to scatter instance parameters.
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Instance {
    Horizon h;
    SolverConfig cfg;
    double v0 = 0;
};

/// Random small instance on the toy truck.  Returns an untightened horizon;
/// the caller runs tighten_bounds and may reject the seed on collapse.
inline Instance random_instance(std::uint64_t& state) {
    Instance ins;
    const int n = 4 + static_cast<int>(draw(state) % 5); // 4..8
    const double width =
        n >= 7 ? 1.5 + 0.25 * static_cast<double>(draw(state) % 3)
               : 2.0 + 0.5 * static_cast<double>(draw(state) % 5);
    const double center = 14.0 + static_cast<double>(draw(state) % 7);
    const double lo = center - 0.5 * width;
    const double hi = center + 0.5 * width;

    std::vector<double> grades(static_cast<std::size_t>(n));
    if (draw(state) % 4 == 0) {
        const double g =
            -0.02 + 0.0025 * static_cast<double>(draw(state) % 17);
        for (double& x : grades) x = g;
    } else {
        for (double& x : grades)
            x = -0.02 + 0.0025 * static_cast<double>(draw(state) % 17);
    }
    std::vector<double> vlo(static_cast<std::size_t>(n) + 1, lo);
    std::vector<double> vhi(static_cast<std::size_t>(n) + 1, hi);
    if (draw(state) % 3 == 0) {
        // A dip in the ceiling over the middle third of the nodes.
        const double cut = 0.5 + 0.5 * static_cast<double>(draw(state) % 3);
        for (std::size_t j = static_cast<std::size_t>(n) / 3;
             j <= 2 * static_cast<std::size_t>(n) / 3; ++j)
            vhi[j] = std::max(lo + 0.5, hi - cut);
    }
    ins.h = make_horizon(grades, 25.0, vlo, vhi);

    ins.cfg.phi = (draw(state) % 3 == 0) ? 4.0
                : (draw(state) % 2 == 0) ? 10.0
                                         : 40.0;
    ins.cfg.beta = 10.0;
    ins.cfg.horizon_stages = n;
    ins.cfg.ds_m = 25.0;
    ins.cfg.epsilon = 0.0;
    ins.v0 = 0.0; // chosen after tightening
    return ins;
}

} // namespace ecodrive::testsupport

#endif
