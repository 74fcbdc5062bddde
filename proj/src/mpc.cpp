#include "ecodrive/mpc.hpp"

#include <algorithm>
#include <cmath>

#include "ecodrive/config.hpp"
#include "ecodrive/errors.hpp"
#include "ecodrive/heuristic.hpp"

namespace ecodrive {

MpcResult run_mpc(const Vehicle& veh, const RouteProfile& route,
                  const SolverConfig& cfg, WarmStartGenerator& warm_gen,
                  const MpcOptions& opt) {
    cfg.validate();
    route.validate();
    const double ds = cfg.ds_m;
    const int route_stages =
        static_cast<int>(std::floor(route.length_m() / ds + 1e-9));
    if (route_stages < 1)
        throw ValidationError("route '" + route.name +
                              "' is shorter than one stage");

    MpcResult out;
    out.trajectory.ds_m = ds;

    double v = 0;
    int applied = 0;
    double fuel_cum = 0, time_cum = 0;
    int step_no = 0;

    while (applied < route_stages) {
        const int window_stages =
            std::min(cfg.horizon_stages, route_stages - applied);
        Horizon h = resample(route, applied * ds, window_stages, ds);
        tighten_bounds(h, veh);

        if (step_no == 0) {
            v = opt.v0 ? *opt.v0 : h.v_max_t[0];
        } else {
            // A genuine corridor violation means the previous window was
            // blind to something closer than its own braking horizon; only
            // float dust on the edge is forgiven.
            if (v < h.v_min_t[0] - 1e-6 || v > h.v_max_t[0] + 1e-6)
                throw InfeasibleError(
                    "carried-over speed " + format_double(v) +
                    " left the corridor at s = " + format_double(h.s0_m));
            v = std::clamp(v, h.v_min_t[0], h.v_max_t[0]);
        }

        const WarmStartResult warm = warm_gen.generate(veh, h, cfg, v);

        SolveResult sol;
        if (opt.warm_only) {
            if (!warm.feasible)
                throw InfeasibleError("warm start failed at s = " +
                                      format_double(h.s0_m));
            sol.feasible = true;
            sol.cost = warm.upper_bound;
            sol.modes = warm.modes;
            sol.velocities = warm.velocities;
            sol.termination = Termination::Completed;
        } else {
            Heuristic heur(veh, h, cfg);
            BnbSolver solver(veh, h, heur, cfg);
            sol = solver.solve(warm, v);
            if (!sol.feasible)
                throw InfeasibleError("no feasible trajectory in window at s = " +
                                      format_double(h.s0_m));
        }

        MpcStepLog log;
        log.step = step_no;
        log.s0_m = h.s0_m;
        log.stages = window_stages;
        log.warm_bound = warm.upper_bound;
        log.cost = sol.cost;
        log.termination = sol.termination;
        log.stats = sol.stats;
        out.steps.push_back(log);
        out.total_nodes += sol.stats.nodes_expanded;
        out.total_solve_ms += sol.stats.wall_ms;

        const int n_apply = std::min(cfg.replan_stride, window_stages);
        for (int j = 0; j < n_apply; ++j) {
            const std::size_t k = static_cast<std::size_t>(j);
            const auto sc = stage_cost(veh, sol.modes[k], sol.velocities[k],
                                       sol.velocities[k + 1], h.grade[k], cfg);
            if (!sc)
                throw InfeasibleError(
                    "solver returned an inconsistent stage at s = " +
                    format_double(h.s0_m + j * ds));
            fuel_cum += sc->fuel_g;
            time_cum += sc->time_s;
            out.weighted_cost += sc->weighted;
            out.trajectory.steps.push_back({h.s0_m + j * ds,
                                            sol.velocities[k], sol.modes[k],
                                            fuel_cum, time_cum});
        }
        v = sol.velocities[static_cast<std::size_t>(n_apply)];
        applied += n_apply;
        ++step_no;
    }

    out.trajectory.final_v_mps = v;
    return out;
}

} // namespace ecodrive
