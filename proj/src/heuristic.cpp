#include "ecodrive/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecodrive/errors.hpp"

namespace ecodrive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Safety margin subtracted from every interior bound so that golden-section
// tolerance can never lift the bound above a true cost. Orders of magnitude
// below any stage cost, so pruning power is unaffected.
constexpr double kSlack = 1e-6;

constexpr int kGoldenIters = 80;

// Minimize a unimodal function on [a, b]; returns the best value seen,
// including both endpoints.
template <class F>
double golden_min(F f, double a, double b) {
    double best = std::min(f(a), f(b));
    if (!(b > a)) return best;
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < kGoldenIters; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return std::min({best, f1, f2});
}

} // namespace

Heuristic::Heuristic(const Vehicle& veh, const Horizon& h,
                     const SolverConfig& cfg)
    : n_(h.stages),
      ds_(h.ds_m),
      w_fuel_(cfg.weight_fuel()),
      w_time_(cfg.weight_time()),
      beta_(cfg.beta),
      v_ref_(terminal_ref(h, cfg)),
      v_min_t_(h.v_min_t),
      v_max_t_(h.v_max_t) {
    const VehicleParams& p = veh.params();
    mass_ = p.mass_kg;
    drag_area_ = 0.5 * p.air_density * p.drag_coeff * p.frontal_area_m2;
    fuel_scale_ = w_fuel_ / (p.fuel_energy_j_per_g * p.eta_opt);

    const std::size_t nn = static_cast<std::size_t>(n_);
    wd_suffix_.assign(nn + 1, 0.0);
    for (int j = n_ - 1; j >= 0; --j) {
        const double a = h.grade[static_cast<std::size_t>(j)];
        wd_suffix_[static_cast<std::size_t>(j)] =
            wd_suffix_[static_cast<std::size_t>(j) + 1] +
            mass_ * p.gravity * (p.roll_coeff * std::cos(a) + std::sin(a)) *
                ds_;
    }
    vbar_lo_.assign(nn + 1, 0.0);
    vbar_hi_.assign(nn + 1, 0.0);
    vbar_lo_[nn] = v_min_t_[nn];
    vbar_hi_[nn] = v_max_t_[nn];
    for (int j = n_ - 1; j >= 0; --j) {
        const std::size_t k = static_cast<std::size_t>(j);
        vbar_lo_[k] = std::min(v_min_t_[k], vbar_lo_[k + 1]);
        vbar_hi_[k] = std::max(v_max_t_[k], vbar_hi_[k + 1]);
    }

    // Velocity grid shared by all rows, wide enough for every node band.
    step_ = cfg.lut_step;
    grid_lo_ = *std::min_element(v_min_t_.begin(), v_min_t_.end());
    const double grid_hi = *std::max_element(v_max_t_.begin(), v_max_t_.end());
    cols_ = std::max(2, static_cast<int>(std::ceil((grid_hi - grid_lo_) /
                                                   step_)) + 2);
    table_.assign(nn * static_cast<std::size_t>(cols_), kInf);
    for (int j = 0; j < n_; ++j) {
        const std::size_t k = static_cast<std::size_t>(j);
        const double band_lo = v_min_t_[k] - step_;
        const double band_hi = v_max_t_[k] + step_;
        for (int i = 0; i < cols_; ++i) {
            const double v = grid_lo_ + step_ * i;
            if (v < band_lo || v > band_hi) continue;
            table_[k * static_cast<std::size_t>(cols_) +
                   static_cast<std::size_t>(i)] = minimize(j, v);
        }
    }
}

double Heuristic::cost_to_go(int j, double v, double v_end,
                             double v_mean) const {
    const std::size_t k = static_cast<std::size_t>(j);
    const double stages_left = static_cast<double>(n_ - j);
    const double drag_work = drag_area_ * v_mean * v_mean * ds_ * stages_left;
    const double energy = 0.5 * mass_ * (v_end * v_end - v * v) +
                          wd_suffix_[k] + drag_work;
    const double time_s = ds_ * stages_left / v_mean;
    const double dref = v_end - v_ref_;
    return fuel_scale_ * std::max(0.0, energy) + w_time_ * time_s +
           beta_ * dref * dref;
}

double Heuristic::minimize(int j, double v) const {
    if (j == n_) {
        const double d = v - v_ref_;
        return beta_ * d * d;
    }
    const std::size_t k = static_cast<std::size_t>(j);
    const double stages_left = static_cast<double>(n_ - j);
    const double r = 0.5 * mass_ * v * v - wd_suffix_[k]; // spendable energy
    const double e = w_time_ * ds_ * stages_left;         // time-cost mass
    const double dw = drag_area_ * ds_ * stages_left;     // drag work / v^2

    const double end_lo = v_min_t_[static_cast<std::size_t>(n_)];
    const double end_hi = v_max_t_[static_cast<std::size_t>(n_)];
    const double bar_lo = vbar_lo_[k];
    const double bar_hi = vbar_hi_[k];

    // Where the energy balance stays positive the bound is convex and
    // separable; clamping each coordinate minimizer into its box is exact.
    const double denom = fuel_scale_ * mass_ + 2.0 * beta_;
    double v_end =
        denom > 0 ? std::clamp(2.0 * beta_ * v_ref_ / denom, end_lo, end_hi)
                  : end_lo;
    double v_mean;
    if (fuel_scale_ * dw > 0)
        v_mean = std::clamp(std::cbrt(e / (2.0 * fuel_scale_ * dw)), bar_lo,
                            bar_hi);
    else
        v_mean = bar_hi;
    const double q =
        0.5 * mass_ * v_end * v_end + dw * v_mean * v_mean - r;
    if (q >= 0) return cost_to_go(j, v, v_end, v_mean) - kSlack;

    // Otherwise the relaxed minimizer sits where no fuel is needed at all
    // and the optimum lies in that region (or on its edge).
    return region_b_min(j, r, e, dw) - kSlack;
}

double Heuristic::region_b_min(int j, double r, double e, double dw) const {
    const std::size_t k = static_cast<std::size_t>(j);
    const double end_lo = v_min_t_[static_cast<std::size_t>(n_)];
    const double end_hi = v_max_t_[static_cast<std::size_t>(n_)];
    const double bar_lo = vbar_lo_[k];
    const double bar_hi = vbar_hi_[k];

    // Largest representative speed that keeps the energy balance at or
    // below zero for a given terminal speed.
    auto best_mean = [&](double v_end) {
        const double spare = r - 0.5 * mass_ * v_end * v_end;
        if (dw <= 0) return spare >= 0 ? bar_hi : -1.0;
        if (spare < 0) return -1.0;
        return std::min(bar_hi, std::sqrt(spare / dw));
    };
    auto value = [&](double v_end) {
        const double vm = best_mean(v_end);
        if (vm < bar_lo) return kInf;
        const double d = v_end - v_ref_;
        return e / vm + beta_ * d * d;
    };

    // The zero-fuel region is non-empty here (the caller's relaxed
    // minimizer lies inside it), and its terminal-speed slice is an
    // interval starting at the lower box edge.
    const double cap = r - dw * bar_lo * bar_lo;
    const double v_cap = cap <= 0 ? 0.0 : std::sqrt(2.0 * cap / mass_);
    const double hi_end = std::max(std::min(end_hi, v_cap), end_lo);
    return golden_min(value, end_lo, hi_end);
}

double Heuristic::sample(int j, double v) const {
    if (j == n_) {
        const double d = v - v_ref_;
        return beta_ * d * d;
    }
    const std::size_t k = static_cast<std::size_t>(j);
    int i = static_cast<int>(std::floor((v - grid_lo_) / step_));
    i = std::clamp(i, 0, cols_ - 2);
    const double* row = table_.data() + k * static_cast<std::size_t>(cols_);
    return std::min(row[i], row[i + 1]);
}

} // namespace ecodrive
