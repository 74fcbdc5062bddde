#include "ecodrive/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ecodrive/config.hpp"
#include "ecodrive/errors.hpp"

namespace ecodrive {

namespace {

using ordered_json = nlohmann::ordered_json;

nlohmann::ordered_json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "# ds_m " << format_double(traj.ds_m) << '\n';
    out << "# final_v_mps " << format_double(traj.final_v_mps) << '\n';
    out << "s_m,v_mps,mode,gear,fuel_cum_g,time_cum_s\n";
    for (const TrajectoryStep& st : traj.steps)
        out << format_double(st.s_m) << ',' << format_double(st.v_mps) << ','
            << to_string(st.mg.mode) << ',' << st.mg.gear << ','
            << format_double(st.fuel_cum_g) << ','
            << format_double(st.time_cum_s) << '\n';
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

Trajectory load_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    Trajectory traj;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    auto fail = [&](const std::string& what) {
        throw ValidationError(path + ":" + std::to_string(lineno) + ": " +
                              what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string key, value;
            if (meta >> key >> value) {
                if (key == "ds_m") traj.ds_m = parse_double(value);
                if (key == "final_v_mps") traj.final_v_mps = parse_double(value);
            }
            continue;
        }
        if (!header_seen) {
            if (line != "s_m,v_mps,mode,gear,fuel_cum_g,time_cum_s")
                fail("unexpected trajectory header");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) fail("expected 6 columns");
        try {
            TrajectoryStep st;
            st.s_m = parse_double(cells[0]);
            st.v_mps = parse_double(cells[1]);
            st.mg.mode = parse_mode(cells[2]);
            st.mg.gear = static_cast<int>(parse_double(cells[3]));
            st.fuel_cum_g = parse_double(cells[4]);
            st.time_cum_s = parse_double(cells[5]);
            traj.steps.push_back(st);
        } catch (const ValidationError& e) {
            fail(e.what());
        }
    }
    if (!header_seen) throw ValidationError(path + ": missing header row");
    if (!(traj.ds_m > 0))
        throw ValidationError(path + ": missing or bad '# ds_m' metadata");
    return traj;
}

void save_run_summary_json(const std::string& path,
                           const std::string& route_name,
                           const std::string& vehicle_name,
                           const SolverConfig& cfg, const MpcResult& result,
                           bool timing) {
    ordered_json j;
    j["route"] = route_name;
    j["vehicle"] = vehicle_name;

    ordered_json c;
    c["phi"] = cfg.phi;
    c["beta"] = cfg.beta;
    c["horizon_stages"] = cfg.horizon_stages;
    c["ds_m"] = cfg.ds_m;
    c["epsilon"] = cfg.epsilon;
    c["time_limit_s"] = finite_or_null(cfg.time_limit_s);
    c["v_f"] = cfg.v_f ? ordered_json(*cfg.v_f) : ordered_json(nullptr);
    c["replan_stride"] = cfg.replan_stride;
    j["config"] = c;

    const Trajectory& tr = result.trajectory;
    ordered_json t;
    t["distance_m"] = tr.length_m();
    t["fuel_g"] = tr.total_fuel_g();
    t["time_s"] = tr.total_time_s();
    t["weighted_cost"] = result.weighted_cost;
    t["final_v_mps"] = tr.final_v_mps;
    j["totals"] = t;

    std::int64_t children = 0, pruned_bound = 0, pruned_binning = 0;
    std::int64_t completed = 0, time_limited = 0;
    for (const MpcStepLog& st : result.steps) {
        children += st.stats.children_generated;
        pruned_bound += st.stats.pruned_bound;
        pruned_binning += st.stats.pruned_binning;
        if (st.termination == Termination::TimeLimit)
            ++time_limited;
        else
            ++completed;
    }
    ordered_json s;
    s["windows"] = result.steps.size();
    s["nodes_expanded"] = result.total_nodes;
    s["children_generated"] = children;
    s["pruned_bound"] = pruned_bound;
    s["pruned_binning"] = pruned_binning;
    s["windows_completed"] = completed;
    s["windows_time_limited"] = time_limited;
    s["solve_ms"] = timing ? result.total_solve_ms : 0.0;
    j["solver"] = s;

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

void save_sweep_csv(const std::string& path, const std::string& route_name,
                    const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "# route " << route_name << '\n';
    out << "phi,beta,horizon,status,fuel_g,time_s,weighted_cost,nodes,"
           "mean_solve_ms\n";
    for (const SweepRow& r : rows)
        out << format_double(r.phi) << ',' << format_double(r.beta) << ','
            << r.horizon << ',' << r.status << ',' << format_double(r.fuel_g)
            << ',' << format_double(r.time_s) << ','
            << format_double(r.weighted_cost) << ',' << r.nodes << ','
            << format_double(r.mean_solve_ms) << '\n';
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

CompareRow compare_trajectories(const std::string& name,
                                const Trajectory& reference,
                                const Trajectory& candidate) {
    if (reference.ds_m != candidate.ds_m)
        throw ValidationError("trajectories use different grid spacings");
    if (reference.steps.size() != candidate.steps.size())
        throw ValidationError(
            "trajectories cover different distances; refusing to compare");
    CompareRow row;
    row.name = name;
    row.fuel_g = candidate.total_fuel_g();
    row.time_s = candidate.total_time_s();
    const double ref_fuel = reference.total_fuel_g();
    const double ref_time = reference.total_time_s();
    row.fuel_saved_pct =
        ref_fuel > 0 ? 100.0 * (ref_fuel - row.fuel_g) / ref_fuel : 0.0;
    row.time_delta_pct =
        ref_time > 0 ? 100.0 * (row.time_s - ref_time) / ref_time : 0.0;
    return row;
}

void save_comparison_csv(const std::string& path,
                         const std::string& reference_name,
                         const Trajectory& reference,
                         const std::vector<CompareRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "# reference " << reference_name << '\n';
    out << "name,fuel_g,time_s,fuel_saved_pct,time_delta_pct\n";
    out << reference_name << ',' << format_double(reference.total_fuel_g())
        << ',' << format_double(reference.total_time_s()) << ",0,0\n";
    for (const CompareRow& r : rows)
        out << r.name << ',' << format_double(r.fuel_g) << ','
            << format_double(r.time_s) << ','
            << format_double(r.fuel_saved_pct) << ','
            << format_double(r.time_delta_pct) << '\n';
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

void save_comparison_json(const std::string& path,
                          const std::string& reference_name,
                          const Trajectory& reference,
                          const std::vector<CompareRow>& rows) {
    ordered_json j;
    j["reference"]["name"] = reference_name;
    j["reference"]["fuel_g"] = reference.total_fuel_g();
    j["reference"]["time_s"] = reference.total_time_s();
    j["candidates"] = ordered_json::array();
    for (const CompareRow& r : rows) {
        ordered_json c;
        c["name"] = r.name;
        c["fuel_g"] = r.fuel_g;
        c["time_s"] = r.time_s;
        c["fuel_saved_pct"] = r.fuel_saved_pct;
        c["time_delta_pct"] = r.time_delta_pct;
        j["candidates"].push_back(c);
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

} // namespace ecodrive
