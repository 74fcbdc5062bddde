#ifndef ECODRIVE_ROUTE_HPP
#define ECODRIVE_ROUTE_HPP

#include <string>
#include <vector>

namespace ecodrive {

class Vehicle;

/// Optimization never plans below a 10 km/h crawl; zones where traffic
/// rules would demand a standstill are modelled as crawl-speed zones.
inline constexpr double kSpeedFloorMps = 10.0 / 3.6;

/// One breakpoint of a piecewise-constant route description. Values apply
/// from this position up to the next breakpoint.
struct RoutePoint {
    double s_m = 0;
    double grade_rad = 0;
    double v_min_mps = 0;
    double v_max_mps = 0;
};

struct RouteProfile {
    std::string name = "route";
    std::vector<RoutePoint> points;

    double length_m() const { return points.empty() ? 0 : points.back().s_m; }
    double grade(double s) const;
    double v_min(double s) const;
    double v_max(double s) const;
    void validate() const; // throws ValidationError
};

RouteProfile load_route_csv(const std::string& path);
void save_route_csv(const RouteProfile& route, const std::string& path);

/// A planning window resampled onto an equidistant grid: N stages of
/// length ds starting at s0. Grades are per stage (sampled at the stage
/// midpoint), speed bounds per node. The *_t arrays start as copies of
/// the raw bounds and are sharpened in place by tighten_bounds().
struct Horizon {
    double s0_m = 0;
    double ds_m = 0;
    int stages = 0;

    std::vector<double> grade;   // size stages
    std::vector<double> v_min;   // size stages+1, crawl floor applied
    std::vector<double> v_max;   // size stages+1
    std::vector<double> v_min_t; // tightened bounds
    std::vector<double> v_max_t;

    double node_position(int i) const { return s0_m + ds_m * i; }
};

/// Cut a window out of a route. Throws ValidationError if the window
/// does not fit inside the route, InfeasibleError if bounds cross.
Horizon resample(const RouteProfile& route, double s0, int stages, double ds);

/// Shrink the speed corridor to values actually reachable under the
/// vehicle's power/braking envelope, iterated to a fixpoint. A second
/// call on the result is a no-op. Throws InfeasibleError when the
/// corridor collapses, e.g. a crawl zone placed where the truck cannot
/// brake down to it from the required minimum speed upstream.
void tighten_bounds(Horizon& h, const Vehicle& veh);

} // namespace ecodrive

#endif
