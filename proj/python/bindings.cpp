#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecodrive/baseline.hpp"
#include "ecodrive/bnb.hpp"
#include "ecodrive/errors.hpp"
#include "ecodrive/heuristic.hpp"
#include "ecodrive/mpc.hpp"
#include "ecodrive/routegen.hpp"
#include "ecodrive/warmstart.hpp"

namespace py = pybind11;
using namespace ecodrive;

namespace {

SolverConfig config_from_kwargs(double phi, double beta, int horizon_stages,
                                double ds_m, double epsilon,
                                double time_limit_s, double lut_step,
                                std::optional<double> v_f, int replan_stride) {
    SolverConfig cfg;
    cfg.phi = phi;
    cfg.beta = beta;
    cfg.horizon_stages = horizon_stages;
    cfg.ds_m = ds_m;
    cfg.epsilon = epsilon;
    cfg.time_limit_s = time_limit_s;
    cfg.lut_step = lut_step;
    cfg.v_f = v_f;
    cfg.replan_stride = replan_stride;
    cfg.validate();
    return cfg;
}

py::dict trajectory_to_dict(const Trajectory& tr) {
    py::list steps;
    for (const TrajectoryStep& st : tr.steps) {
        py::dict d;
        d["s_m"] = st.s_m;
        d["v_mps"] = st.v_mps;
        d["mode"] = to_string(st.mg.mode);
        d["gear"] = st.mg.gear;
        d["fuel_cum_g"] = st.fuel_cum_g;
        d["time_cum_s"] = st.time_cum_s;
        steps.append(d);
    }
    py::dict out;
    out["ds_m"] = tr.ds_m;
    out["final_v_mps"] = tr.final_v_mps;
    out["fuel_g"] = tr.total_fuel_g();
    out["time_s"] = tr.total_time_s();
    out["steps"] = steps;
    return out;
}

py::dict mode_eval_to_dict(const ModeEval& ev) {
    py::dict d;
    d["feasible"] = ev.feasible;
    d["dvds"] = ev.dvds;
    d["fuel_gps"] = ev.fuel_gps;
    d["engine_torque"] = ev.engine_torque;
    d["engine_rpm"] = ev.engine_rpm;
    return d;
}

} // namespace

PYBIND11_MODULE(_ecodrive, m) {
    m.doc() = "space-domain driving-mode planner core";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError",
                                            PyExc_RuntimeError);

    py::class_<Vehicle>(m, "Vehicle")
        .def(py::init([](const std::string& path) {
                 return Vehicle(load_vehicle_file(path));
             }),
             py::arg("path"))
        .def_property_readonly(
            "name", [](const Vehicle& v) { return v.params().name; })
        .def_property_readonly(
            "num_gears",
            [](const Vehicle& v) { return v.params().num_gears(); })
        .def("resistance_force", &Vehicle::resistance_force, py::arg("v_mps"),
             py::arg("grade_rad"))
        .def("engine_speed", &Vehicle::engine_speed, py::arg("gear"),
             py::arg("v_mps"))
        .def("fuel_rate", &Vehicle::fuel_rate, py::arg("torque_nm"),
             py::arg("rpm"))
        .def("best_torque", &Vehicle::best_torque, py::arg("rpm"))
        .def("max_engine_power", &Vehicle::max_engine_power)
        .def("peak_map_efficiency", &Vehicle::peak_map_efficiency)
        .def(
            "evaluate",
            [](const Vehicle& veh, const std::string& mode, int gear,
               double v, double grade) {
                return mode_eval_to_dict(
                    veh.evaluate(ModeGear{parse_mode(mode), gear}, v, grade));
            },
            py::arg("mode"), py::arg("gear"), py::arg("v_mps"),
            py::arg("grade_rad"));

    py::class_<RouteProfile>(m, "Route")
        .def_property_readonly("name",
                               [](const RouteProfile& r) { return r.name; })
        .def("length_m", &RouteProfile::length_m)
        .def("grade", &RouteProfile::grade, py::arg("s_m"))
        .def("v_min", &RouteProfile::v_min, py::arg("s_m"))
        .def("v_max", &RouteProfile::v_max, py::arg("s_m"))
        .def_property_readonly("num_points", [](const RouteProfile& r) {
            return r.points.size();
        });

    m.def("load_route", &load_route_csv, py::arg("path"));
    m.def("save_route", &save_route_csv, py::arg("route"), py::arg("path"));
    m.def("make_route", &make_route, py::arg("kind"), py::arg("length_m"),
          py::arg("seed"), py::arg("vmax_mps") = 25.0);

    m.def(
        "plan_route",
        [](const Vehicle& veh, const RouteProfile& route, double phi,
           double beta, int horizon_stages, double ds_m, double epsilon,
           double time_limit_s, double lut_step, std::optional<double> v_f,
           int replan_stride, bool warm_only, std::optional<double> v0) {
            const SolverConfig cfg = config_from_kwargs(
                phi, beta, horizon_stages, ds_m, epsilon, time_limit_s,
                lut_step, v_f, replan_stride);
            EnvelopeWarmStart warm;
            MpcOptions opt;
            opt.warm_only = warm_only;
            opt.v0 = v0;
            const MpcResult res = run_mpc(veh, route, cfg, warm, opt);
            py::dict out = trajectory_to_dict(res.trajectory);
            out["weighted_cost"] = res.weighted_cost;
            out["windows"] = res.steps.size();
            out["nodes_expanded"] = res.total_nodes;
            return out;
        },
        py::arg("vehicle"), py::arg("route"), py::arg("phi") = 10.0,
        py::arg("beta") = 10.0, py::arg("horizon_stages") = 200,
        py::arg("ds_m") = 25.0, py::arg("epsilon") = 0.01,
        py::arg("time_limit_s") = kNoTimeLimit, py::arg("lut_step") = 0.25,
        py::arg("v_f") = std::nullopt, py::arg("replan_stride") = 1,
        py::arg("warm_only") = false, py::arg("v0") = std::nullopt);

    m.def(
        "solve_window",
        [](const Vehicle& veh, const RouteProfile& route, double s0,
           double phi, double beta, int horizon_stages, double ds_m,
           double epsilon, double time_limit_s, double lut_step,
           std::optional<double> v_f, std::optional<double> v0) {
            const SolverConfig cfg =
                config_from_kwargs(phi, beta, horizon_stages, ds_m, epsilon,
                                   time_limit_s, lut_step, v_f, 1);
            Horizon h = resample(route, s0, cfg.horizon_stages, cfg.ds_m);
            tighten_bounds(h, veh);
            const double start = v0 ? *v0 : h.v_max_t.front();
            EnvelopeWarmStart warm_gen;
            const WarmStartResult warm =
                warm_gen.generate(veh, h, cfg, start);
            Heuristic heur(veh, h, cfg);
            BnbSolver solver(veh, h, heur, cfg);
            const SolveResult res = solver.solve(warm, start);
            py::list modes, gears;
            for (const ModeGear& mg : res.modes) {
                modes.append(to_string(mg.mode));
                gears.append(mg.gear);
            }
            py::dict out;
            out["feasible"] = res.feasible;
            out["cost"] = res.cost;
            out["warm_bound"] = warm.upper_bound;
            out["modes"] = modes;
            out["gears"] = gears;
            out["velocities"] = res.velocities;
            out["termination"] = to_string(res.termination);
            out["nodes_expanded"] = res.stats.nodes_expanded;
            out["pruned_bound"] = res.stats.pruned_bound;
            out["pruned_binning"] = res.stats.pruned_binning;
            return out;
        },
        py::arg("vehicle"), py::arg("route"), py::arg("s0_m") = 0.0,
        py::arg("phi") = 10.0, py::arg("beta") = 10.0,
        py::arg("horizon_stages") = 200, py::arg("ds_m") = 25.0,
        py::arg("epsilon") = 0.01, py::arg("time_limit_s") = kNoTimeLimit,
        py::arg("lut_step") = 0.25, py::arg("v_f") = std::nullopt,
        py::arg("v0") = std::nullopt);

    m.def(
        "simulate_driver",
        [](const Vehicle& veh, const RouteProfile& route, double ds_m) {
            return trajectory_to_dict(
                simulate_driver(veh, route, DriverParams{}, ds_m));
        },
        py::arg("vehicle"), py::arg("route"), py::arg("ds_m") = 25.0);
}
