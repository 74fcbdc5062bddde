#include "ecodrive/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "ecodrive/config.hpp"
#include "ecodrive/errors.hpp"

namespace ecodrive {

namespace {

// Target speed at position s: the current limit, tightened by a braking
// curve toward every limit drop ahead.  The driver lifts reaction_m early
// and then follows sqrt(u^2 + 2*a*d), i.e. brakes at a constant comfortable
// deceleration so the zone is entered exactly at its limit.
double preview_target(const RouteProfile& route, double s, double v,
                      double reaction_m, double decel) {
    double target = route.v_max(s);
    const double scan = reaction_m + v * v / (2.0 * decel) + 50.0;
    for (const RoutePoint& p : route.points) {
        if (p.s_m <= s || p.s_m > s + scan) continue;
        if (p.v_max_mps >= target) continue;
        const double gap = std::max(0.0, p.s_m - s - reaction_m);
        const double cap = std::sqrt(p.v_max_mps * p.v_max_mps +
                                     2.0 * decel * gap);
        target = std::min(target, cap);
    }
    return std::max(target, kSpeedFloorMps);
}

} // namespace

void DriverParams::validate() const {
    if (kp <= 0 || ki < 0)
        throw ValidationError("driver gains must be positive");
    if (dt_s <= 0 || dt_s > 1)
        throw ValidationError("driver integration step must be in (0, 1] s");
    if (preview_base_s < 0)
        throw ValidationError("driver preview must be non-negative");
    if (brake_decel <= 0)
        throw ValidationError("driver brake deceleration must be positive");
    if (downshift_rpm >= upshift_rpm)
        throw ValidationError("downshift_rpm must be below upshift_rpm");
}

Trajectory simulate_driver(const Vehicle& veh, const RouteProfile& route,
                           const DriverParams& drv, double ds_m) {
    drv.validate();
    route.validate();
    const VehicleParams& p = veh.params();
    const int rows =
        static_cast<int>(std::floor(route.length_m() / ds_m + 1e-9));
    if (rows < 1)
        throw ValidationError("route is shorter than one grid cell");

    Trajectory out;
    out.ds_m = ds_m;

    // Start in the most economical gear that is ready to pull.
    double v = std::max(route.v_max(0), kSpeedFloorMps);
    int gear = 1;
    for (int g = p.num_gears(); g >= 1; --g) {
        if (veh.engine_speed(g, v) >= drv.downshift_rpm) {
            gear = g;
            break;
        }
    }

    double s = 0, t = 0, fuel = 0, integral = 0;
    double grid_v = v;
    ModeGear grid_mg{Mode::Cruise, gear};
    int next_row = 0;

    // Generous cap: the whole route at crawl speed, five times over.
    const double t_cap = 5.0 * route.length_m() / kSpeedFloorMps;

    while (next_row < rows) {
        if (t > t_cap)
            throw InfeasibleError("driver simulation stalled at s = " +
                                  format_double(s));

        const double target = preview_target(
            route, s, v, v * drv.preview_base_s, drv.brake_decel);

        const double err = target - v;
        integral = std::clamp(integral + err * drv.dt_s, -2e4, 2e4);
        double force = drv.kp * err + drv.ki * integral;

        const double alpha = route.grade(s);
        const double omega = veh.engine_speed(gear, v);
        const double ratio =
            p.gear_ratio[static_cast<std::size_t>(gear - 1)] *
            p.final_drive_ratio;
        const double to_wheel = p.final_drive_eff * ratio / p.wheel_radius_m;

        double mdot = 0;
        if (force >= 0) {
            // Demand positive torque through the driveline, capped by the
            // engine map (loss model inverted as in the planner).
            const auto& lc =
                p.gear_loss_coeff[static_cast<std::size_t>(gear - 1)];
            double t_e = (force / to_wheel + lc[0] * omega + lc[2]) /
                         (1.0 - lc[1]);
            t_e = std::clamp(t_e, 0.0, p.engine_torque_max_nm(omega));
            force = to_wheel *
                    (t_e - veh.transmission_loss(t_e, omega, gear));
            mdot = t_e > 0 ? veh.fuel_rate(t_e, omega) : 0.0;
        }
        // Negative demand is taken by the service brakes directly, capped
        // at a comfortable deceleration a driver would use in traffic.
        force = std::max(force, -drv.brake_decel * p.mass_kg);

        const double m_eff =
            p.mass_kg +
            p.powertrain_inertia[static_cast<std::size_t>(gear - 1)] /
                (p.wheel_radius_m * p.wheel_radius_m);
        const double acc =
            (force - veh.resistance_force(v, alpha)) / m_eff;

        const double v_new = std::max(0.5 * kSpeedFloorMps, v + acc * drv.dt_s);
        const double s_new = s + v * drv.dt_s;
        const double fuel_new = fuel + mdot * drv.dt_s;
        const double t_new = t + drv.dt_s;

        // Emit grid rows crossed during this step (linear interpolation).
        while (next_row < rows && s_new >= (next_row + 1) * ds_m) {
            const double s_cross = (next_row + 1) * ds_m;
            const double frac = s_new > s ? (s_cross - s) / (s_new - s) : 1.0;
            out.steps.push_back({static_cast<double>(next_row) * ds_m, grid_v,
                                 grid_mg, fuel + frac * (fuel_new - fuel),
                                 t + frac * (t_new - t)});
            grid_v = v + frac * (v_new - v);
            grid_mg = ModeGear{force >= 0 ? Mode::Cruise : Mode::EngineBrake,
                               gear};
            ++next_row;
        }

        v = v_new;
        s = s_new;
        fuel = fuel_new;
        t = t_new;

        // Shift after the dynamics step so the thresholds act on the state
        // the driver actually observes.
        const double w_now = veh.engine_speed(gear, v);
        if (w_now > drv.upshift_rpm && gear < p.num_gears())
            ++gear;
        else if (w_now < drv.downshift_rpm && gear > 1)
            --gear;
    }

    out.final_v_mps = grid_v;
    return out;
}

} // namespace ecodrive
