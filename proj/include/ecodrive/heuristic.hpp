#ifndef ECODRIVE_HEURISTIC_HPP
#define ECODRIVE_HEURISTIC_HPP

#include <vector>

#include "ecodrive/ocp.hpp"
#include "ecodrive/route.hpp"
#include "ecodrive/vehicle.hpp"

namespace ecodrive {

/// Optimistic remaining-cost model for one planning window.
///
/// From node j at speed v, the cheapest possible continuation is bounded
/// below by relaxing the mode/gear structure away entirely: fuel can never
/// be cheaper than the mechanical energy still to be delivered divided by
/// the best conversion efficiency the map allows, and travel time can
/// never beat driving the remaining distance at one representative speed.
/// The bound keeps two free variables, the terminal speed v_end and the
/// representative speed v_mean, and minimizes over both inside the
/// tightened corridor. The minimum is found exactly (convex pieces plus a
/// unimodal boundary search), then lowered by a slack of 1e-6 so that no
/// rounding in the search can ever push the bound above a true cost.
///
/// Values are precomputed on a velocity grid per node; sampling takes the
/// smaller of the two bracketing entries, which stays below the true
/// value because the bound is non-increasing in current speed.
class Heuristic {
public:
    /// Requires a tightened horizon. Builds the full table immediately.
    Heuristic(const Vehicle& veh, const Horizon& h, const SolverConfig& cfg);

    int stages() const { return n_; }
    double v_ref() const { return v_ref_; }

    /// The bound evaluated at explicit (v_end, v_mean); used by tests and
    /// by the exact minimizer. Only defined for j < stages().
    double cost_to_go(int j, double v, double v_end, double v_mean) const;

    /// Exact minimum of cost_to_go over the admissible (v_end, v_mean)
    /// box, minus the admissibility slack. j == stages() returns the
    /// terminal penalty exactly.
    double minimize(int j, double v) const;

    /// Table lookup (lower bound on minimize); exact at j == stages().
    double sample(int j, double v) const;

    double table_step() const { return step_; }
    double table_v_lo() const { return grid_lo_; }
    int table_cols() const { return cols_; }

private:
    double region_b_min(int j, double r, double e, double dw) const;

    int n_;
    double ds_;
    double w_fuel_, w_time_, beta_, v_ref_;
    double mass_, drag_area_; // 0.5 * rho * cd * Af
    double fuel_scale_;       // w_fuel / (Q * eta_opt)

    std::vector<double> v_min_t_, v_max_t_; // node bounds, size n+1
    std::vector<double> wd_suffix_;  // grade+rolling work from node j to N
    std::vector<double> vbar_lo_, vbar_hi_; // representative-speed box per j

    double grid_lo_ = 0, step_ = 0;
    int cols_ = 0;
    std::vector<double> table_; // rows 0..n-1, +inf outside the node band
};

} // namespace ecodrive

#endif
