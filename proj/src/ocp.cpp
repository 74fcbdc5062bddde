#include "ecodrive/ocp.hpp"

#include "ecodrive/config.hpp"
#include "ecodrive/errors.hpp"

namespace ecodrive {

void SolverConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(std::string("solver config: ") + what);
    };
    need(phi >= 0, "phi must be non-negative");
    need(beta >= 0, "beta must be non-negative");
    need(horizon_stages >= 1, "horizon_stages must be at least 1");
    need(ds_m > 0, "ds_m must be positive");
    need(epsilon >= 0, "epsilon must be non-negative");
    need(time_limit_s >= 0, "time_limit_s must be non-negative");
    need(lut_step > 0, "lut_step must be positive");
    need(replan_stride >= 1, "replan_stride must be at least 1");
}

SolverConfig load_solver_config(const std::string& path) {
    KvFile kv = KvFile::parse_file(path);
    SolverConfig c;
    c.phi = kv.get_double("phi", c.phi);
    c.beta = kv.get_double("beta", c.beta);
    c.horizon_stages = kv.get_int("horizon_stages", c.horizon_stages);
    c.ds_m = kv.get_double("ds_m", c.ds_m);
    c.epsilon = kv.get_double("epsilon", c.epsilon);
    c.time_limit_s = kv.get_double("time_limit_s", c.time_limit_s);
    c.lut_step = kv.get_double("lut_step", c.lut_step);
    if (kv.has("v_f")) c.v_f = kv.get_double("v_f");
    c.replan_stride = kv.get_int("replan_stride", c.replan_stride);
    const auto unread = kv.unread_keys();
    if (!unread.empty())
        throw ValidationError(path + ": unknown key '" + unread.front() + "'");
    c.validate();
    return c;
}

double terminal_ref(const Horizon& h, const SolverConfig& cfg) {
    return cfg.v_f ? *cfg.v_f : h.v_max_t.back();
}

double terminal_cost(double v, double v_ref, double beta) {
    const double d = v - v_ref;
    return beta * d * d;
}

std::optional<double> step_velocity(const Vehicle& veh, ModeGear mg, double v,
                                    double alpha, double ds) {
    const ModeEval e = veh.evaluate(mg, v, alpha);
    if (!e.feasible) return std::nullopt;
    return v + ds * e.dvds;
}

std::optional<StageCost> stage_cost(const Vehicle& veh, ModeGear mg, double v0,
                                    double v1, double alpha,
                                    const SolverConfig& cfg) {
    const double v_mean = 0.5 * (v0 + v1);
    if (!(v_mean > 0)) return std::nullopt;
    const ModeEval e = veh.evaluate(mg, v_mean, alpha);
    if (!e.feasible) return std::nullopt;
    StageCost sc;
    sc.time_s = cfg.ds_m / v_mean;
    sc.fuel_g = e.fuel_gps * sc.time_s;
    sc.weighted = cfg.weight_fuel() * sc.fuel_g + cfg.weight_time() * sc.time_s;
    return sc;
}

} // namespace ecodrive
