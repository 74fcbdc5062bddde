#ifndef ECODRIVE_VEHICLE_HPP
#define ECODRIVE_VEHICLE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ecodrive {

/// Piecewise-linear table y(x) with clamped extrapolation.
/// Breakpoints must be strictly increasing.
class LinearTable {
public:
    LinearTable() = default;
    LinearTable(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return xs_.empty(); }
    std::size_t size() const { return xs_.size(); }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// The six longitudinal driving modes.
enum class Mode : std::uint8_t {
    Cruise = 0,      // hold speed with positive engine torque
    EcoRoll = 1,     // neutral gear, engine idling
    Coast = 2,       // gear engaged, fuel cut, engine friction drags
    EngineBrake = 3, // gear engaged, maximum retarder + friction
    Accelerate = 4,  // gear engaged, torque from the best-efficiency line
    Downhill = 5,    // hold speed with partial engine braking
};

inline constexpr std::array<Mode, 6> kAllModes = {
    Mode::Cruise,  Mode::EcoRoll,    Mode::Coast,
    Mode::EngineBrake, Mode::Accelerate, Mode::Downhill,
};

const char* to_string(Mode m);
Mode parse_mode(const std::string& name); // throws ValidationError

/// One control decision: a mode plus the gear it runs in.
/// Gear is 1-based; 0 means neutral (EcoRoll only).
struct ModeGear {
    Mode mode = Mode::Cruise;
    int gear = 0;

    friend bool operator==(const ModeGear&, const ModeGear&) = default;
};

/// Physical and powertrain parameters for one truck.
/// Engine speeds are RPM, torques N*m, everything else SI.
struct VehicleParams {
    std::string name = "unnamed";

    double mass_kg = 0;
    double air_density = 1.188;     // kg/m^3
    double drag_coeff = 0;          // c_d
    double frontal_area_m2 = 0;     // A_f
    double gravity = 9.81;          // m/s^2
    double roll_coeff = 0;          // c_rr
    double wheel_radius_m = 0;      // r_w

    double final_drive_ratio = 0;   // i_r
    double final_drive_eff = 1.0;   // eta_r
    std::vector<double> gear_ratio; // i_t, highest (largest) ratio first

    // Torque loss inside the gearbox: T_loss = c1*omega + c2*T + c3,
    // clamped to [0, |T|]. One coefficient triple per gear.
    std::vector<std::array<double, 3>> gear_loss_coeff;

    // Rotating inertia reflected to the wheel axle, per gear (engine +
    // driveline, N*m*s^2), and driveline-only inertia for neutral.
    std::vector<double> powertrain_inertia; // J_pt, per gear
    double driveline_inertia = 0;           // J_dt, neutral

    double idle_speed_rpm = 600;
    double idle_fuel_gps = 0;       // fuel burn while idling, g/s

    // Injection map: mdot [g/s] = c4 + c5*w + c6*T + c7*w^2 + c8*w*T + c9*T^2
    // with w in RPM, T in N*m; negative predictions clamp to zero.
    std::array<double, 6> fuel_coeff = {0, 0, 0, 0, 0, 0};

    LinearTable engine_friction_nm;  // T_in,fr(omega), positive drag
    LinearTable engine_torque_max_nm; // T_e,max(omega)
    LinearTable brake_torque_max_nm;  // T_eb,max(omega), retarder limit

    double omega_min_rpm = 600;
    double omega_max_rpm = 2100;

    double fuel_energy_j_per_g = 42600; // lower heating value Q
    double eta_opt = 0.45;              // efficiency bound used by the heuristic

    int num_gears() const { return static_cast<int>(gear_ratio.size()); }
    void validate() const; // throws ValidationError naming the bad field
};

/// Why a mode/gear combination was rejected at a given state.
enum class Reject : std::uint8_t {
    None = 0,
    OmegaLow,
    OmegaHigh,
    TorqueHigh,     // demanded torque above the engine limit
    BrakeTorqueHigh,
    ForceSign,      // mode cannot produce the required force direction
    BadGear,
};

/// Result of evaluating one mode/gear at one (v, grade) point.
struct ModeEval {
    bool feasible = false;
    Reject reject = Reject::BadGear;
    double dvds = 0;       // velocity slope dv/ds [1/s]
    double fuel_gps = 0;   // injection rate at this operating point
    double engine_torque = 0;
    double engine_rpm = 0;
};

/// A truck with its derived operating tables. Construction validates the
/// parameters and precomputes the power envelopes used for corridor
/// tightening.
class Vehicle {
public:
    explicit Vehicle(VehicleParams p);

    const VehicleParams& params() const { return p_; }

    /// Aerodynamic + rolling + grade force at speed v [m/s], grade alpha [rad].
    double resistance_force(double v, double alpha) const;

    /// Gearbox torque loss for input torque T at engine speed omega [RPM].
    /// Returns the clamped loss in [0, |T|]. Gear is 1-based.
    double transmission_loss(double torque, double omega_rpm, int gear) const;

    /// Engine speed [RPM] for gear (1-based) at road speed v; idle for gear 0.
    double engine_speed(int gear, double v) const;

    /// Injection rate [g/s] from the quadratic map, clamped at zero.
    double fuel_rate(double torque, double omega_rpm) const;

    /// Torque on the best-efficiency line at engine speed omega [RPM].
    double best_torque(double omega_rpm) const;

    /// Peak engine power over the admissible speed range [W].
    double max_engine_power() const { return max_engine_power_w_; }
    /// Peak retardation power (friction + retarder) [W].
    double max_brake_power() const { return max_brake_power_w_; }
    /// Largest brake-specific efficiency reachable anywhere on the map.
    double peak_map_efficiency() const { return peak_map_eta_; }

    /// Full evaluation of one mode/gear at (v, alpha). Never throws for a
    /// gear index that exists; infeasible combinations come back with
    /// feasible=false and a reject reason.
    ModeEval evaluate(ModeGear mg, double v, double alpha) const;

    /// Same, with the Downhill admissibility gate precomputed by the caller.
    /// The gate costs O(gears) and is identical for every gear at one state,
    /// so search loops evaluate it once per node.
    ModeEval evaluate(ModeGear mg, double v, double alpha, bool downhill_ok) const;

    /// Engine-brake torque needed to hold speed in Downhill mode.
    /// Only meaningful when evaluate() said the combination is feasible.
    double downhill_brake_torque(int gear, double v, double alpha) const;

    /// Downhill is only offered when the grade pushes the truck and no
    /// engaged-gear coast can hold or shed speed.
    bool downhill_allowed(double v, double alpha) const;

    /// Velocity slope achievable at full engine power, gearbox losses
    /// ignored; used for reachability tightening. [1/s]
    double max_accel_slope(double v, double alpha) const;
    /// Velocity slope at full retardation, same simplifications. [1/s]
    double min_accel_slope(double v, double alpha) const;

private:
    double effective_mass(int gear) const; // m + J/r_w^2

    VehicleParams p_;
    double max_engine_power_w_ = 0;
    double max_brake_power_w_ = 0;
    double peak_map_eta_ = 0;
};

/// Parse a `key = value` vehicle description file.
VehicleParams load_vehicle_file(const std::string& path);

} // namespace ecodrive

#endif
