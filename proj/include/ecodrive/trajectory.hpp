#ifndef ECODRIVE_TRAJECTORY_HPP
#define ECODRIVE_TRAJECTORY_HPP

#include <vector>

#include "ecodrive/vehicle.hpp"

namespace ecodrive {

/// One applied stage of a driven trajectory. Velocity is at the stage
/// start; the cumulative counters include this stage (i.e. they are the
/// totals at the stage end).
struct TrajectoryStep {
    double s_m = 0;
    double v_mps = 0;
    ModeGear mg;
    double fuel_cum_g = 0;
    double time_cum_s = 0;
};

struct Trajectory {
    double ds_m = 0;
    double final_v_mps = 0; // velocity at the end of the last stage
    std::vector<TrajectoryStep> steps;

    double total_fuel_g() const {
        return steps.empty() ? 0 : steps.back().fuel_cum_g;
    }
    double total_time_s() const {
        return steps.empty() ? 0 : steps.back().time_cum_s;
    }
    double length_m() const {
        return ds_m * static_cast<double>(steps.size());
    }
};

} // namespace ecodrive

#endif
