#ifndef ECODRIVE_BASELINE_HPP
#define ECODRIVE_BASELINE_HPP

#include "ecodrive/route.hpp"
#include "ecodrive/trajectory.hpp"
#include "ecodrive/vehicle.hpp"

namespace ecodrive {

/// A conventional driver for reference fuel/time numbers: a PI controller
/// on velocity error drives the wheel-force demand, limit drops ahead are
/// anticipated by following a constant-deceleration braking curve, gears
/// follow simple shift thresholds, and slowing down is done with the
/// service brakes (wasting the kinetic energy the planner would recycle).
struct DriverParams {
    double kp = 40000; // wheel-force per m/s of speed error
    double ki = 1;     // integral gain
    double preview_base_s = 2.8; // reaction time before the braking curve
    double brake_decel = 1.2;    // comfort service-brake deceleration [m/s^2]
    double upshift_rpm = 2000;
    double downshift_rpm = 1000;
    double dt_s = 0.1; // time-domain integration step
    void validate() const;
};

/// Simulate the driver over the whole route and resample the result onto
/// the planner's ds grid so the two are directly comparable.
Trajectory simulate_driver(const Vehicle& veh, const RouteProfile& route,
                           const DriverParams& drv, double ds_m);

} // namespace ecodrive

#endif
