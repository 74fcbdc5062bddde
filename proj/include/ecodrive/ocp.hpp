#ifndef ECODRIVE_OCP_HPP
#define ECODRIVE_OCP_HPP

#include <limits>
#include <optional>
#include <string>

#include "ecodrive/route.hpp"
#include "ecodrive/vehicle.hpp"

namespace ecodrive {

inline constexpr double kNoTimeLimit = std::numeric_limits<double>::infinity();

/// Everything that shapes one optimal-control solve. The fuel/time
/// trade-off is a single ratio phi; the two running-cost weights derive
/// from it and always sum to one.
struct SolverConfig {
    double phi = 10;    // time weight relative to fuel weight
    double beta = 10;   // terminal speed-deviation penalty
    int horizon_stages = 200;
    double ds_m = 25;
    double epsilon = 0.01; // context-elimination bin width [m/s]; 0 disables
    double time_limit_s = kNoTimeLimit; // 0 returns the warm start unchanged
    double lut_step = 0.25; // velocity grid of the cost-to-go table [m/s]
    std::optional<double> v_f; // terminal speed reference; default: tightened
                               // upper bound at the final node
    int replan_stride = 1; // stages applied per receding-horizon step

    double weight_fuel() const { return 1.0 / (1.0 + phi); }
    double weight_time() const { return phi / (1.0 + phi); }
    void validate() const; // throws ValidationError
};

SolverConfig load_solver_config(const std::string& path);

/// Terminal speed reference for a window (configured value, else the
/// tightened upper bound at the final node).
double terminal_ref(const Horizon& h, const SolverConfig& cfg);

/// Quadratic terminal penalty beta * (v - v_ref)^2.
double terminal_cost(double v, double v_ref, double beta);

/// Forward-Euler velocity update over one stage; empty when the mode/gear
/// is infeasible at the stage-entry state.
std::optional<double> step_velocity(const Vehicle& veh, ModeGear mg, double v,
                                    double alpha, double ds);

/// Cost of one stage. Fuel flow and travel time are evaluated at the mean
/// stage velocity; the weighted value is what the solver accumulates.
struct StageCost {
    double fuel_g = 0;
    double time_s = 0;
    double weighted = 0;
};

/// Empty when the mode is infeasible at the mean stage velocity (the
/// engine-speed window may be left between stage entry and midpoint).
std::optional<StageCost> stage_cost(const Vehicle& veh, ModeGear mg, double v0,
                                    double v1, double alpha,
                                    const SolverConfig& cfg);

} // namespace ecodrive

#endif
