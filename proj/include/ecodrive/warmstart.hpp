#ifndef ECODRIVE_WARMSTART_HPP
#define ECODRIVE_WARMSTART_HPP

#include <limits>
#include <utility>
#include <vector>

#include "ecodrive/ocp.hpp"
#include "ecodrive/route.hpp"
#include "ecodrive/vehicle.hpp"

namespace ecodrive {

/// A feasible (not optimal) trajectory used to seed the solver's upper
/// bound. When no trajectory was found, feasible is false and the bound
/// is +infinity; the solver still runs, only without initial pruning.
struct WarmStartResult {
    bool feasible = false;
    double upper_bound = std::numeric_limits<double>::infinity();
    std::vector<ModeGear> modes;    // size stages
    std::vector<double> velocities; // size stages+1
    std::vector<double> cum_cost;   // weighted cost reached at each node
};

/// Stage indices where the raw (untightened) speed limit changes, paired
/// with the new limit, plus a closing event (stages, v_ref). Useful for
/// segment-wise seeding strategies and route diagnostics.
std::vector<std::pair<int, double>> segment_events(const Horizon& h,
                                                   double v_ref);

/// Strategy interface so alternative seeding schemes can be plugged into
/// the same solver and MPC loop.
class WarmStartGenerator {
public:
    virtual ~WarmStartGenerator() = default;
    virtual WarmStartResult generate(const Vehicle& veh, const Horizon& h,
                                     const SolverConfig& cfg, double v0) = 0;
};

/// Default generator: a backward pass computes a brake-feasible velocity
/// ceiling under the strongest actual deceleration mode (with a small
/// safety margin wherever the ceiling binds), then a forward greedy pass
/// rides as close to the ceiling as the corridor allows, breaking ties
/// toward cheaper stages.
class EnvelopeWarmStart final : public WarmStartGenerator {
public:
    WarmStartResult generate(const Vehicle& veh, const Horizon& h,
                             const SolverConfig& cfg, double v0) override;

    /// The brake-feasible ceiling per node (exposed for tests).
    std::vector<double> ceiling(const Vehicle& veh, const Horizon& h) const;
};

} // namespace ecodrive

#endif
