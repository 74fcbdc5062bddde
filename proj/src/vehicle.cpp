#include "ecodrive/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ecodrive/config.hpp"
#include "ecodrive/errors.hpp"

namespace ecodrive {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kRpmToRadPerSec = kPi / 30.0;

// Power in watts from torque [N*m] and engine speed [RPM].
double shaft_power(double torque, double omega_rpm) {
    return torque * omega_rpm * kRpmToRadPerSec;
}

constexpr int kScanPoints = 2001;

} // namespace

LinearTable::LinearTable(std::vector<double> x, std::vector<double> y)
    : xs_(std::move(x)), ys_(std::move(y)) {
    if (xs_.empty() || xs_.size() != ys_.size())
        throw ValidationError("table needs matching, non-empty x/y vectors");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw ValidationError("table breakpoints must be strictly increasing");
}

double LinearTable::operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

const char* to_string(Mode m) {
    switch (m) {
    case Mode::Cruise: return "cruise";
    case Mode::EcoRoll: return "ecoroll";
    case Mode::Coast: return "coast";
    case Mode::EngineBrake: return "enginebrake";
    case Mode::Accelerate: return "accelerate";
    case Mode::Downhill: return "downhill";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    for (Mode m : kAllModes)
        if (name == to_string(m)) return m;
    throw ValidationError("unknown driving mode '" + name + "'");
}

void VehicleParams::validate() const {
    auto need = [&](bool ok, const char* what) {
        if (!ok)
            throw ValidationError("vehicle '" + name + "': " + what);
    };
    need(mass_kg > 0, "mass_kg must be positive");
    need(air_density > 0, "air_density must be positive");
    need(drag_coeff >= 0, "drag_coeff must be non-negative");
    need(frontal_area_m2 > 0, "frontal_area_m2 must be positive");
    need(gravity > 0, "gravity must be positive");
    need(roll_coeff >= 0, "roll_coeff must be non-negative");
    need(wheel_radius_m > 0, "wheel_radius_m must be positive");
    need(final_drive_ratio > 0, "final_drive_ratio must be positive");
    need(final_drive_eff > 0 && final_drive_eff <= 1,
         "final_drive_eff must be in (0, 1]");
    need(!gear_ratio.empty(), "at least one gear is required");
    for (double r : gear_ratio) need(r > 0, "gear ratios must be positive");
    need(gear_loss_coeff.size() == gear_ratio.size(),
         "gear_loss_coeff needs one c1/c2/c3 triple per gear");
    for (const auto& c : gear_loss_coeff) {
        need(c[0] >= 0 && c[1] >= 0 && c[2] >= 0,
             "torque-loss coefficients must be non-negative");
        need(c[1] < 1, "torque-loss slope c2 must be below 1");
    }
    need(powertrain_inertia.size() == gear_ratio.size(),
         "powertrain_inertia needs one value per gear");
    for (double j : powertrain_inertia)
        need(j >= 0, "powertrain inertia must be non-negative");
    need(driveline_inertia >= 0, "driveline_inertia must be non-negative");
    need(idle_speed_rpm > 0, "idle_speed_rpm must be positive");
    need(idle_fuel_gps >= 0, "idle_fuel_gps must be non-negative");
    need(fuel_coeff[0] > 0, "fuel map constant c4 must be positive");
    for (int i = 1; i < 5; ++i)
        need(fuel_coeff[i] >= 0, "fuel map coefficients must be non-negative");
    need(fuel_coeff[5] > 0, "fuel map curvature c9 must be positive");
    need(!engine_friction_nm.empty(), "engine_friction_nm table is required");
    need(!engine_torque_max_nm.empty(), "engine_torque_max_nm table is required");
    need(!brake_torque_max_nm.empty(), "brake_torque_max_nm table is required");
    need(omega_min_rpm > 0 && omega_max_rpm > omega_min_rpm,
         "need 0 < omega_min_rpm < omega_max_rpm");
    need(fuel_energy_j_per_g > 0, "fuel_energy_j_per_g must be positive");
    need(eta_opt > 0 && eta_opt < 1, "eta_opt must be in (0, 1)");
}

Vehicle::Vehicle(VehicleParams p) : p_(std::move(p)) {
    p_.validate();

    const auto& c = p_.fuel_coeff;
    for (int i = 0; i < kScanPoints; ++i) {
        const double w = p_.omega_min_rpm +
                         (p_.omega_max_rpm - p_.omega_min_rpm) * i /
                             (kScanPoints - 1);
        max_engine_power_w_ = std::max(
            max_engine_power_w_, shaft_power(p_.engine_torque_max_nm(w), w));
        max_brake_power_w_ = std::max(
            max_brake_power_w_,
            shaft_power(p_.engine_friction_nm(w) + p_.brake_torque_max_nm(w), w));

        // Peak efficiency over the whole admissible map is reached on the
        // best-torque line, so a 1-D scan is enough.
        const double t_max = p_.engine_torque_max_nm(w);
        if (t_max <= 0) continue;
        const double a = c[0] + c[1] * w + c[3] * w * w;
        const double t = std::min(std::sqrt(a / c[5]), t_max);
        const double mdot = fuel_rate(t, w);
        if (mdot <= 0) continue;
        peak_map_eta_ = std::max(
            peak_map_eta_, shaft_power(t, w) / (p_.fuel_energy_j_per_g * mdot));
    }

    if (peak_map_eta_ > p_.eta_opt)
        throw ValidationError(
            "vehicle '" + p_.name + "': eta_opt " + format_double(p_.eta_opt) +
            " is below the injection map's peak efficiency " +
            format_double(peak_map_eta_) +
            "; the lower-bound heuristic would overestimate remaining cost");
}

double Vehicle::resistance_force(double v, double alpha) const {
    return 0.5 * p_.air_density * p_.drag_coeff * p_.frontal_area_m2 * v * v +
           p_.mass_kg * p_.gravity *
               (p_.roll_coeff * std::cos(alpha) + std::sin(alpha));
}

double Vehicle::transmission_loss(double torque, double omega_rpm, int gear) const {
    if (gear < 1 || gear > p_.num_gears())
        throw ValidationError("gear index out of range");
    const auto& lc = p_.gear_loss_coeff[static_cast<std::size_t>(gear - 1)];
    const double t = std::abs(torque);
    const double raw = lc[0] * omega_rpm + lc[1] * t + lc[2];
    return std::clamp(raw, 0.0, t);
}

double Vehicle::engine_speed(int gear, double v) const {
    if (gear == 0) return p_.idle_speed_rpm;
    if (gear < 1 || gear > p_.num_gears())
        throw ValidationError("gear index out of range");
    return p_.gear_ratio[static_cast<std::size_t>(gear - 1)] *
           p_.final_drive_ratio * v / (p_.wheel_radius_m * kRpmToRadPerSec);
}

double Vehicle::fuel_rate(double torque, double omega_rpm) const {
    const auto& c = p_.fuel_coeff;
    const double m = c[0] + c[1] * omega_rpm + c[2] * torque +
                     c[3] * omega_rpm * omega_rpm + c[4] * omega_rpm * torque +
                     c[5] * torque * torque;
    return std::max(0.0, m);
}

double Vehicle::best_torque(double omega_rpm) const {
    // With the quadratic injection map mdot = A(w) + B(w) T + c9 T^2,
    // specific consumption mdot/(T w) is minimal at T = sqrt(A/c9),
    // clamped into the engine envelope.
    const auto& c = p_.fuel_coeff;
    const double a = c[0] + c[1] * omega_rpm + c[3] * omega_rpm * omega_rpm;
    const double t_best = std::sqrt(a / c[5]);
    return std::clamp(t_best, 0.0,
                      std::max(0.0, p_.engine_torque_max_nm(omega_rpm)));
}

double Vehicle::effective_mass(int gear) const {
    const double r2 = p_.wheel_radius_m * p_.wheel_radius_m;
    const double j = gear == 0
                         ? p_.driveline_inertia
                         : p_.powertrain_inertia[static_cast<std::size_t>(gear - 1)];
    return p_.mass_kg + j / r2;
}

ModeEval Vehicle::evaluate(ModeGear mg, double v, double alpha) const {
    const bool gate =
        mg.mode == Mode::Downhill && downhill_allowed(v, alpha);
    return evaluate(mg, v, alpha, gate);
}

ModeEval Vehicle::evaluate(ModeGear mg, double v, double alpha,
                           bool downhill_ok) const {
    ModeEval out;
    out.reject = Reject::BadGear;

    const bool needs_gear = mg.mode != Mode::EcoRoll;
    if (needs_gear) {
        if (mg.gear < 1 || mg.gear > p_.num_gears()) return out;
    } else if (mg.gear != 0) {
        return out;
    }

    const double f_res = resistance_force(v, alpha);
    const double omega = engine_speed(mg.gear, v);
    out.engine_rpm = omega;

    if (needs_gear) {
        if (omega < p_.omega_min_rpm) {
            out.reject = Reject::OmegaLow;
            return out;
        }
        if (omega > p_.omega_max_rpm) {
            out.reject = Reject::OmegaHigh;
            return out;
        }
    }

    const double ratio = needs_gear
                             ? p_.gear_ratio[static_cast<std::size_t>(mg.gear - 1)] *
                                   p_.final_drive_ratio
                             : 0.0;
    const double to_wheel = p_.final_drive_eff * ratio / p_.wheel_radius_m;

    switch (mg.mode) {
    case Mode::Cruise: {
        if (f_res < 0) {
            out.reject = Reject::ForceSign;
            return out;
        }
        // Invert wheel force through the loss model: with loss in its linear
        // regime, transmitted torque is T (1-c2) - c1 w - c3.
        const auto& lc = p_.gear_loss_coeff[static_cast<std::size_t>(mg.gear - 1)];
        const double t_e =
            (f_res * p_.wheel_radius_m / (p_.final_drive_eff * ratio) +
             lc[0] * omega + lc[2]) /
            (1.0 - lc[1]);
        if (t_e > p_.engine_torque_max_nm(omega)) {
            out.reject = Reject::TorqueHigh;
            return out;
        }
        out.feasible = true;
        out.reject = Reject::None;
        out.dvds = 0;
        out.engine_torque = t_e;
        out.fuel_gps = fuel_rate(t_e, omega);
        return out;
    }
    case Mode::EcoRoll: {
        out.feasible = true;
        out.reject = Reject::None;
        out.dvds = -f_res / (effective_mass(0) * v);
        out.engine_torque = 0;
        out.fuel_gps = p_.idle_fuel_gps;
        return out;
    }
    case Mode::Coast:
    case Mode::EngineBrake: {
        const double t_fr = p_.engine_friction_nm(omega);
        const double t_in =
            mg.mode == Mode::Coast ? t_fr : t_fr + p_.brake_torque_max_nm(omega);
        const double drag =
            to_wheel * (t_in - transmission_loss(t_in, omega, mg.gear));
        out.feasible = true;
        out.reject = Reject::None;
        out.dvds = -(drag + f_res) / (effective_mass(mg.gear) * v);
        out.engine_torque = -t_in;
        out.fuel_gps = 0;
        return out;
    }
    case Mode::Accelerate: {
        const double t_e = best_torque(omega);
        const double push =
            to_wheel * (t_e - transmission_loss(t_e, omega, mg.gear));
        out.feasible = true;
        out.reject = Reject::None;
        out.dvds = (push - f_res) / (effective_mass(mg.gear) * v);
        out.engine_torque = t_e;
        out.fuel_gps = fuel_rate(t_e, omega);
        return out;
    }
    case Mode::Downhill: {
        if (!downhill_ok) { // gate guarantees f_res < 0 below
            out.reject = Reject::ForceSign;
            return out;
        }
        // Required input-side braking torque to exactly hold speed, using
        // the same loss-model inversion as Cruise (torque magnitudes).
        const auto& lc = p_.gear_loss_coeff[static_cast<std::size_t>(mg.gear - 1)];
        const double t_req =
            (-f_res * p_.wheel_radius_m / (p_.final_drive_eff * ratio) +
             lc[0] * omega + lc[2]) /
            (1.0 - lc[1]);
        const double t_eb = t_req - p_.engine_friction_nm(omega);
        if (t_eb < 0) {
            out.reject = Reject::ForceSign; // friction alone overbrakes
            return out;
        }
        if (t_eb > p_.brake_torque_max_nm(omega)) {
            out.reject = Reject::BrakeTorqueHigh;
            return out;
        }
        out.feasible = true;
        out.reject = Reject::None;
        out.dvds = 0;
        out.engine_torque = -t_req;
        out.fuel_gps = 0;
        return out;
    }
    }
    return out;
}

double Vehicle::downhill_brake_torque(int gear, double v, double alpha) const {
    const ModeEval e = evaluate({Mode::Downhill, gear}, v, alpha);
    if (!e.feasible)
        throw InfeasibleError("downhill mode infeasible at this state");
    return -e.engine_torque - p_.engine_friction_nm(e.engine_rpm);
}

bool Vehicle::downhill_allowed(double v, double alpha) const {
    if (!(resistance_force(v, alpha) < 0)) return false;
    for (int g = 1; g <= p_.num_gears(); ++g) {
        const ModeEval e = evaluate({Mode::Coast, g}, v, alpha);
        if (e.feasible && !(e.dvds > 0)) return false;
    }
    return true;
}

double Vehicle::max_accel_slope(double v, double alpha) const {
    return (max_engine_power_w_ / v - resistance_force(v, alpha)) /
           (p_.mass_kg * v);
}

double Vehicle::min_accel_slope(double v, double alpha) const {
    return -(max_brake_power_w_ / v + resistance_force(v, alpha)) /
           (p_.mass_kg * v);
}

VehicleParams load_vehicle_file(const std::string& path) {
    KvFile kv = KvFile::parse_file(path);
    VehicleParams p;
    p.name = kv.get_string("name", "unnamed");
    p.mass_kg = kv.get_double("mass_kg");
    p.air_density = kv.get_double("air_density", p.air_density);
    p.drag_coeff = kv.get_double("drag_coeff");
    p.frontal_area_m2 = kv.get_double("frontal_area_m2");
    p.gravity = kv.get_double("gravity", p.gravity);
    p.roll_coeff = kv.get_double("roll_coeff");
    p.wheel_radius_m = kv.get_double("wheel_radius_m");
    p.final_drive_ratio = kv.get_double("final_drive_ratio");
    p.final_drive_eff = kv.get_double("final_drive_eff", p.final_drive_eff);
    p.gear_ratio = kv.get_list("gear_ratio");

    const auto c1 = kv.get_list("gear_loss_c1");
    const auto c2 = kv.get_list("gear_loss_c2");
    const auto c3 = kv.get_list("gear_loss_c3");
    if (c1.size() != p.gear_ratio.size() || c2.size() != c1.size() ||
        c3.size() != c1.size())
        throw ValidationError(path +
                              ": gear_loss_c1/c2/c3 need one entry per gear");
    for (std::size_t i = 0; i < c1.size(); ++i)
        p.gear_loss_coeff.push_back({c1[i], c2[i], c3[i]});

    p.powertrain_inertia = kv.get_list("powertrain_inertia");
    p.driveline_inertia = kv.get_double("driveline_inertia");
    p.idle_speed_rpm = kv.get_double("idle_speed_rpm", p.idle_speed_rpm);
    p.idle_fuel_gps = kv.get_double("idle_fuel_gps");

    const auto fc = kv.get_list("fuel_coeff");
    if (fc.size() != 6)
        throw ValidationError(path + ": fuel_coeff needs 6 values (c4..c9)");
    std::copy(fc.begin(), fc.end(), p.fuel_coeff.begin());

    auto table = [&](const char* key) {
        std::vector<double> x, y;
        for (const auto& [a, b] : kv.get_pairs(key)) {
            x.push_back(a);
            y.push_back(b);
        }
        try {
            return LinearTable(std::move(x), std::move(y));
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": key '" + std::string(key) +
                                  "': " + e.what());
        }
    };
    p.engine_friction_nm = table("engine_friction_nm");
    p.engine_torque_max_nm = table("engine_torque_max_nm");
    p.brake_torque_max_nm = table("brake_torque_max_nm");

    p.omega_min_rpm = kv.get_double("omega_min_rpm", p.omega_min_rpm);
    p.omega_max_rpm = kv.get_double("omega_max_rpm", p.omega_max_rpm);
    p.fuel_energy_j_per_g = kv.get_double("fuel_energy_j_per_g", p.fuel_energy_j_per_g);
    p.eta_opt = kv.get_double("eta_opt", p.eta_opt);

    const auto unread = kv.unread_keys();
    if (!unread.empty())
        throw ValidationError(path + ": unknown key '" + unread.front() + "'");
    return p;
}

} // namespace ecodrive
