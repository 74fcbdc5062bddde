#ifndef ECODRIVE_MPC_HPP
#define ECODRIVE_MPC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ecodrive/bnb.hpp"
#include "ecodrive/ocp.hpp"
#include "ecodrive/route.hpp"
#include "ecodrive/trajectory.hpp"
#include "ecodrive/vehicle.hpp"
#include "ecodrive/warmstart.hpp"

namespace ecodrive {

struct MpcOptions {
    bool warm_only = false;   // apply the warm start without solving
    std::optional<double> v0; // default: tightened upper bound at s = 0
};

/// Per-window diagnostics of one receding-horizon step.
struct MpcStepLog {
    int step = 0;
    double s0_m = 0;
    int stages = 0;
    double warm_bound = 0;
    double cost = 0;
    Termination termination = Termination::Completed;
    SolveStats stats;
};

struct MpcResult {
    Trajectory trajectory;
    std::vector<MpcStepLog> steps;
    double weighted_cost = 0; // running cost summed over applied stages
    std::int64_t total_nodes = 0;
    double total_solve_ms = 0;
};

/// Drive a route with the receding-horizon controller: window, tighten,
/// warm start, solve, apply the first replan_stride stages, shift. The
/// window shrinks once the route end is nearer than the full horizon.
/// Throws InfeasibleError when a window has no feasible trajectory.
MpcResult run_mpc(const Vehicle& veh, const RouteProfile& route,
                  const SolverConfig& cfg, WarmStartGenerator& warm_gen,
                  const MpcOptions& opt = {});

} // namespace ecodrive

#endif
