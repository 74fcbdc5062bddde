#ifndef ECODRIVE_IO_HPP
#define ECODRIVE_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ecodrive/mpc.hpp"
#include "ecodrive/ocp.hpp"
#include "ecodrive/trajectory.hpp"

namespace ecodrive {

/// Trajectory files are CSV with two metadata comment lines (grid spacing
/// and final velocity) so they round-trip exactly.
void save_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory_csv(const std::string& path);

/// Machine-readable run summary. Solve timings are only written when
/// `timing` is set, so default outputs are byte-stable across runs.
void save_run_summary_json(const std::string& path,
                           const std::string& route_name,
                           const std::string& vehicle_name,
                           const SolverConfig& cfg, const MpcResult& result,
                           bool timing);

struct SweepRow {
    double phi = 0;
    double beta = 0;
    int horizon = 0;
    std::string status; // "ok" or the failure class
    double fuel_g = 0;
    double time_s = 0;
    double weighted_cost = 0;
    std::int64_t nodes = 0;
    double mean_solve_ms = 0; // zero unless timing was requested
};

void save_sweep_csv(const std::string& path, const std::string& route_name,
                    const std::vector<SweepRow>& rows);

struct CompareRow {
    std::string name;
    double fuel_g = 0;
    double time_s = 0;
    double fuel_saved_pct = 0; // positive: candidate burns less than reference
    double time_delta_pct = 0; // positive: candidate is slower
};

/// Throws ValidationError when the grids don't match (different ds or
/// length means the files describe different trips).
CompareRow compare_trajectories(const std::string& name,
                                const Trajectory& reference,
                                const Trajectory& candidate);

void save_comparison_csv(const std::string& path,
                         const std::string& reference_name,
                         const Trajectory& reference,
                         const std::vector<CompareRow>& rows);
void save_comparison_json(const std::string& path,
                          const std::string& reference_name,
                          const Trajectory& reference,
                          const std::vector<CompareRow>& rows);

} // namespace ecodrive

#endif
