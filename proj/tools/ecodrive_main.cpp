#include <atomic>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ecodrive/baseline.hpp"
#include "ecodrive/config.hpp"
#include "ecodrive/errors.hpp"
#include "ecodrive/io.hpp"
#include "ecodrive/mpc.hpp"
#include "ecodrive/routegen.hpp"

namespace fs = std::filesystem;
using namespace ecodrive;

namespace {

struct CommonArgs {
    std::string route_path;
    std::string vehicle_path = "data/vehicle_default.cfg";
    std::string config_path;
    std::optional<double> phi, beta, ds, epsilon, time_limit, v_f;
    std::optional<int> horizon, stride;
    bool timing = false;
};

SolverConfig resolve_config(const CommonArgs& a) {
    SolverConfig cfg;
    if (!a.config_path.empty()) cfg = load_solver_config(a.config_path);
    if (a.phi) cfg.phi = *a.phi;
    if (a.beta) cfg.beta = *a.beta;
    if (a.horizon) cfg.horizon_stages = *a.horizon;
    if (a.ds) cfg.ds_m = *a.ds;
    if (a.epsilon) cfg.epsilon = *a.epsilon;
    if (a.time_limit) cfg.time_limit_s = *a.time_limit;
    if (a.v_f) cfg.v_f = *a.v_f;
    if (a.stride) cfg.replan_stride = *a.stride;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--route", a.route_path, "route CSV")->required();
    cmd->add_option("--vehicle", a.vehicle_path, "vehicle description file");
    cmd->add_option("--config", a.config_path, "solver config file");
    cmd->add_option("--ds", a.ds, "stage length [m]");
    cmd->add_option("--epsilon", a.epsilon, "context-elimination bin [m/s]");
    cmd->add_option("--time-limit", a.time_limit, "per-window limit [s]");
    cmd->add_option("--vf", a.v_f, "terminal speed reference [m/s]");
    cmd->add_option("--stride", a.stride, "stages applied per window");
    cmd->add_flag("--timing", a.timing,
                  "include wall-clock timings in outputs");
}

int cmd_run(const CommonArgs& a, const std::string& mode,
            const std::string& out_dir, std::optional<double> v0) {
    const SolverConfig cfg = resolve_config(a);
    const Vehicle veh(load_vehicle_file(a.vehicle_path));
    const RouteProfile route = load_route_csv(a.route_path);

    if (mode == "baseline") {
        const Trajectory tr =
            simulate_driver(veh, route, DriverParams{}, cfg.ds_m);
        std::cout << "route " << a.route_path << " stages " << tr.steps.size()
                  << " ds " << format_double(tr.ds_m) << '\n';
        std::cout << "fuel_g " << format_double(tr.total_fuel_g())
                  << " time_s " << format_double(tr.total_time_s())
                  << " final_v " << format_double(tr.final_v_mps) << '\n';
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            save_trajectory_csv(
                tr, (fs::path(out_dir) / "trajectory.csv").string());
        }
        return 0;
    }
    if (mode != "mpc" && mode != "warmstart")
        throw ValidationError("--mode must be mpc, baseline, or warmstart");

    EnvelopeWarmStart warm_gen;
    MpcOptions opt;
    opt.warm_only = (mode == "warmstart");
    opt.v0 = v0;
    const MpcResult res = run_mpc(veh, route, cfg, warm_gen, opt);

    const Trajectory& tr = res.trajectory;
    std::cout << "route " << a.route_path << " stages " << tr.steps.size()
              << " ds " << format_double(tr.ds_m) << '\n';
    std::cout << "fuel_g " << format_double(tr.total_fuel_g()) << " time_s "
              << format_double(tr.total_time_s()) << " weighted_cost "
              << format_double(res.weighted_cost) << " final_v "
              << format_double(tr.final_v_mps) << '\n';
    std::cout << "windows " << res.steps.size() << " nodes "
              << res.total_nodes << '\n';
    if (a.timing)
        std::cout << "solve_ms " << format_double(res.total_solve_ms) << '\n';

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        save_trajectory_csv(tr, (fs::path(out_dir) / "trajectory.csv").string());
        save_run_summary_json((fs::path(out_dir) / "summary.json").string(),
                              a.route_path, veh.params().name, cfg, res,
                              a.timing);
    }
    return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& out_dir,
              std::vector<double> phis, std::vector<double> betas,
              std::vector<int> horizons, int workers) {
    const SolverConfig base_cfg = resolve_config(a);
    const Vehicle veh(load_vehicle_file(a.vehicle_path));
    const RouteProfile route = load_route_csv(a.route_path);
    if (phis.empty()) phis.push_back(base_cfg.phi);
    if (betas.empty()) betas.push_back(base_cfg.beta);
    if (horizons.empty()) horizons.push_back(base_cfg.horizon_stages);
    if (workers < 1)
        throw ValidationError("--workers must be at least 1");

    struct Cell {
        double phi, beta;
        int horizon;
    };
    std::vector<Cell> cells;
    for (double ph : phis)
        for (double be : betas)
            for (int ho : horizons) cells.push_back({ph, be, ho});

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            SweepRow& row = rows[i];
            row.phi = cells[i].phi;
            row.beta = cells[i].beta;
            row.horizon = cells[i].horizon;
            SolverConfig cfg = base_cfg;
            cfg.phi = cells[i].phi;
            cfg.beta = cells[i].beta;
            cfg.horizon_stages = cells[i].horizon;
            try {
                EnvelopeWarmStart warm_gen;
                const MpcResult res = run_mpc(veh, route, cfg, warm_gen);
                row.status = "ok";
                row.fuel_g = res.trajectory.total_fuel_g();
                row.time_s = res.trajectory.total_time_s();
                row.weighted_cost = res.weighted_cost;
                row.nodes = res.total_nodes;
                row.mean_solve_ms =
                    a.timing && !res.steps.empty()
                        ? res.total_solve_ms /
                              static_cast<double>(res.steps.size())
                        : 0.0;
            } catch (const InfeasibleError&) {
                row.status = "infeasible";
            } catch (const std::exception&) {
                row.status = "error";
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    std::cout << "phi,beta,horizon,status,fuel_g,time_s,weighted_cost,nodes,"
                 "mean_solve_ms\n";
    for (const SweepRow& r : rows)
        std::cout << format_double(r.phi) << ',' << format_double(r.beta)
                  << ',' << r.horizon << ',' << r.status << ','
                  << format_double(r.fuel_g) << ',' << format_double(r.time_s)
                  << ',' << format_double(r.weighted_cost) << ',' << r.nodes
                  << ',' << format_double(r.mean_solve_ms) << '\n';

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        save_sweep_csv((fs::path(out_dir) / "sweep.csv").string(),
                       a.route_path, rows);
    }
    return 0;
}

int cmd_genroute(const std::string& kind, double length, std::uint64_t seed,
                 double vmax, const std::string& out_path) {
    RouteProfile route = make_route(kind, length, seed, vmax);
    save_route_csv(route, out_path);
    std::cout << "wrote " << out_path << " kind " << kind << " length "
              << format_double(length) << " points " << route.points.size()
              << '\n';
    return 0;
}

int cmd_compare(const std::string& reference,
                const std::vector<std::string>& candidates,
                const std::string& out_dir) {
    const Trajectory ref = load_trajectory_csv(reference);
    std::vector<CompareRow> rows;
    for (const std::string& c : candidates)
        rows.push_back(compare_trajectories(c, ref, load_trajectory_csv(c)));

    std::cout << "name,fuel_g,time_s,fuel_saved_pct,time_delta_pct\n";
    std::cout << reference << ',' << format_double(ref.total_fuel_g()) << ','
              << format_double(ref.total_time_s()) << ",0,0\n";
    for (const CompareRow& r : rows)
        std::cout << r.name << ',' << format_double(r.fuel_g) << ','
                  << format_double(r.time_s) << ','
                  << format_double(r.fuel_saved_pct) << ','
                  << format_double(r.time_delta_pct) << '\n';

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        save_comparison_csv((fs::path(out_dir) / "comparison.csv").string(),
                            reference, ref, rows);
        save_comparison_json((fs::path(out_dir) / "comparison.json").string(),
                             reference, ref, rows);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"space-domain driving-mode planner for heavy trucks"};
    app.require_subcommand(1);

    CommonArgs run_args;
    std::string run_out;
    std::string run_mode = "mpc";
    std::optional<double> run_v0;
    std::optional<double> run_phi, run_beta;
    std::optional<int> run_horizon;
    CLI::App* run = app.add_subcommand("run", "plan or simulate one route");
    add_common(run, run_args);
    run->add_option("--phi", run_phi, "time/fuel trade-off ratio");
    run->add_option("--beta", run_beta, "terminal speed penalty");
    run->add_option("--horizon", run_horizon, "stages per window");
    run->add_option("--mode", run_mode, "mpc|baseline|warmstart");
    run->add_option("--out", run_out, "output directory");
    run->add_option("--v0", run_v0, "initial speed [m/s]");

    CommonArgs sweep_args;
    std::string sweep_out;
    std::vector<double> sweep_phi, sweep_beta;
    std::vector<int> sweep_horizon;
    int sweep_workers = 1;
    CLI::App* sweep =
        app.add_subcommand("sweep", "grid over phi/beta/horizon");
    add_common(sweep, sweep_args);
    sweep->add_option("--phi", sweep_phi, "phi values")->delimiter(',');
    sweep->add_option("--beta", sweep_beta, "beta values")->delimiter(',');
    sweep->add_option("--horizon", sweep_horizon, "horizon values")
        ->delimiter(',');
    sweep->add_option("--workers", sweep_workers, "parallel cells");
    sweep->add_option("--out", sweep_out, "output directory");

    std::string gen_kind = "hill", gen_out;
    double gen_length = 8000, gen_vmax = 25;
    std::uint64_t gen_seed = 1;
    CLI::App* gen = app.add_subcommand("genroute", "synthesize a route CSV");
    gen->add_option("--kind", gen_kind, "flat|hill|stops|mixed");
    gen->add_option("--length", gen_length, "route length [m]");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--vmax", gen_vmax, "cruising speed limit [m/s]");
    gen->add_option("--out", gen_out, "output CSV path")->required();

    std::string cmp_ref, cmp_out;
    std::vector<std::string> cmp_cands;
    CLI::App* cmp =
        app.add_subcommand("compare", "compare trajectories on one grid");
    cmp->add_option("--reference", cmp_ref, "reference trajectory CSV")
        ->required();
    cmp->add_option("--candidate", cmp_cands, "candidate trajectory CSV(s)")
        ->required();
    cmp->add_option("--out", cmp_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) {
            run_args.phi = run_phi;
            run_args.beta = run_beta;
            run_args.horizon = run_horizon;
            return cmd_run(run_args, run_mode, run_out, run_v0);
        }
        if (sweep->parsed())
            return cmd_sweep(sweep_args, sweep_out, sweep_phi, sweep_beta,
                             sweep_horizon, sweep_workers);
        if (gen->parsed())
            return cmd_genroute(gen_kind, gen_length, gen_seed, gen_vmax,
                                gen_out);
        if (cmp->parsed()) return cmd_compare(cmp_ref, cmp_cands, cmp_out);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
