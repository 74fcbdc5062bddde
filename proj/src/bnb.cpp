#include "ecodrive/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <tuple>

namespace ecodrive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool candidate_order(const SearchNode& a, const SearchNode& b) {
    return std::tie(a.lb, a.v, a.mode, a.gear) <
           std::tie(b.lb, b.v, b.mode, b.gear);
}

// Bin contest: lowest accumulated cost wins, deterministic tie chain.
bool bin_order(const SearchNode& a, const SearchNode& b) {
    return std::tie(a.g, a.lb, a.v, a.mode, a.gear) <
           std::tie(b.g, b.lb, b.v, b.mode, b.gear);
}

} // namespace

const char* to_string(Termination t) {
    switch (t) {
    case Termination::Completed: return "completed";
    case Termination::TimeLimit: return "time_limit";
    case Termination::Infeasible: return "infeasible";
    }
    return "?";
}

int bin_index(double v, double v_min, double eps) {
    const int i = static_cast<int>(std::ceil((v - v_min) / eps)) - 1;
    return std::max(0, i);
}

std::vector<SearchNode> context_eliminate(std::vector<SearchNode> cand,
                                          double v_min, double v_max,
                                          double eps,
                                          std::int64_t* eliminated) {
    if (eps <= 0 || cand.empty()) return cand;
    const int n_bins = std::max(
        1, static_cast<int>(std::ceil((v_max - v_min) / eps)));
    std::vector<std::int32_t> best(static_cast<std::size_t>(n_bins), -1);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const int b = std::min(bin_index(cand[i].v, v_min, eps), n_bins - 1);
        auto& slot = best[static_cast<std::size_t>(b)];
        if (slot < 0 || bin_order(cand[i], cand[static_cast<std::size_t>(slot)]))
            slot = static_cast<std::int32_t>(i);
    }
    std::vector<SearchNode> out;
    out.reserve(cand.size());
    for (std::int32_t idx : best)
        if (idx >= 0) out.push_back(cand[static_cast<std::size_t>(idx)]);
    if (eliminated)
        *eliminated += static_cast<std::int64_t>(cand.size() - out.size());
    return out;
}

BnbSolver::BnbSolver(const Vehicle& veh, const Horizon& h,
                     const Heuristic& heur, const SolverConfig& cfg)
    : veh_(veh), h_(h), heur_(heur), cfg_(cfg) {}

void BnbSolver::emit_children(std::int32_t parent, int stage, double v,
                              double g, double ub,
                              std::vector<SearchNode>& out) {
    ++stats_.nodes_expanded;
    const std::size_t k = static_cast<std::size_t>(stage);
    const double alpha = h_.grade[k];
    const double ds = h_.ds_m;
    const double lo = h_.v_min_t[k + 1];
    const double hi = h_.v_max_t[k + 1];
    const double wf = cfg_.weight_fuel();
    const double wt = cfg_.weight_time();
    const bool downhill_ok = veh_.downhill_allowed(v, alpha);
    const int n_gears = veh_.params().num_gears();

    for (Mode m : kAllModes) {
        const int g_lo = m == Mode::EcoRoll ? 0 : 1;
        const int g_hi = m == Mode::EcoRoll ? 0 : n_gears;
        for (int gear = g_lo; gear <= g_hi; ++gear) {
            const ModeGear mg{m, gear};
            const ModeEval e = veh_.evaluate(mg, v, alpha, downhill_ok);
            if (!e.feasible) {
                ++stats_.pruned_infeasible;
                continue;
            }
            const double v_next = v + ds * e.dvds;
            if (v_next < lo || v_next > hi) {
                ++stats_.pruned_infeasible;
                continue;
            }
            // Stage cost at the mean velocity; constant-speed modes hit the
            // same operating point again, others may drift out of the
            // engine-speed window between entry and midpoint.
            const double v_mean = 0.5 * (v + v_next);
            const ModeEval mid = veh_.evaluate(mg, v_mean, alpha, downhill_ok);
            if (!mid.feasible) {
                ++stats_.pruned_infeasible;
                continue;
            }
            // Accumulate with the exact expression shape of stage_cost()
            // so a replayed trajectory reproduces the same cost bit for
            // bit (incumbents from the warm start stay comparable).
            const double dt = ds / v_mean;
            const double fuel_g = mid.fuel_gps * dt;
            const double g_next = g + (wf * fuel_g + wt * dt);
            const double lb = g_next + heur_.sample(stage + 1, v_next);
            if (lb >= ub) {
                ++stats_.pruned_bound;
                continue;
            }
            ++stats_.children_generated;
            SearchNode node;
            node.v = v_next;
            node.g = g_next;
            node.lb = lb;
            node.parent = parent;
            node.mode = static_cast<std::uint8_t>(m);
            node.gear = static_cast<std::int8_t>(gear);
            out.push_back(node);
        }
    }
}

void BnbSolver::probe(std::int32_t start, int start_stage, double& ub,
                      std::int32_t& best_leaf) {
    ++stats_.probe_runs;
    std::int32_t cur = start;
    std::vector<SearchNode> kids;
    for (int stage = start_stage; stage < h_.stages; ++stage) {
        kids.clear();
        const SearchNode& node = arena_[static_cast<std::size_t>(cur)];
        emit_children(cur, stage, node.v, node.g, ub, kids);
        if (kids.empty()) return;
        const auto it = std::min_element(kids.begin(), kids.end(),
                                         candidate_order);
        arena_.push_back(*it);
        cur = static_cast<std::int32_t>(arena_.size()) - 1;
        stats_.deepest_stage = std::max(stats_.deepest_stage, stage + 1);
    }
    // Reached the final node: the bound there is the exact terminal
    // penalty, so lb is this path's true total cost.
    const double total = arena_[static_cast<std::size_t>(cur)].lb;
    if (total < ub) {
        ub = total;
        best_leaf = cur;
        ++stats_.probe_improvements;
    }
}

SolveResult BnbSolver::extract(std::int32_t best_leaf,
                               const WarmStartResult& warm, double ub,
                               Termination term) const {
    SolveResult res;
    res.termination = term;
    res.stats = stats_;
    if (best_leaf >= 0) {
        res.feasible = true;
        res.cost = ub;
        const std::size_t n = static_cast<std::size_t>(h_.stages);
        res.modes.resize(n);
        res.velocities.resize(n + 1);
        std::int32_t idx = best_leaf;
        for (int stage = h_.stages; stage >= 0; --stage) {
            const SearchNode& node = arena_[static_cast<std::size_t>(idx)];
            res.velocities[static_cast<std::size_t>(stage)] = node.v;
            if (stage > 0)
                res.modes[static_cast<std::size_t>(stage - 1)] = node.via();
            idx = node.parent;
        }
        return res;
    }
    if (warm.feasible) {
        res.feasible = true;
        res.cost = warm.upper_bound;
        res.modes = warm.modes;
        res.velocities = warm.velocities;
        return res;
    }
    res.termination = Termination::Infeasible;
    return res;
}

SolveResult BnbSolver::solve(const WarmStartResult& warm, double v0) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_s = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };

    arena_.clear();
    frontier_.clear();
    stats_ = SolveStats{};
    double ub = warm.feasible ? warm.upper_bound : kInf;
    std::int32_t best_leaf = -1;

    auto finish = [&](Termination term) {
        SolveResult res = extract(best_leaf, warm, ub, term);
        res.stats.wall_ms = elapsed_s() * 1e3;
        return res;
    };

    if (cfg_.time_limit_s == 0) return finish(Termination::TimeLimit);
    if (v0 < h_.v_min_t[0] || v0 > h_.v_max_t[0])
        return finish(Termination::Infeasible);

    SearchNode root;
    root.v = v0;
    root.g = 0;
    root.lb = heur_.sample(0, v0);
    arena_.push_back(root);
    frontier_.push_back(0);

    std::vector<SearchNode> kids;
    for (int stage = 0; stage < h_.stages; ++stage) {
        if (elapsed_s() > cfg_.time_limit_s)
            return finish(Termination::TimeLimit);

        const bool leaf_level = stage + 1 == h_.stages;
        scratch_.clear();
        for (std::int32_t idx : frontier_) {
            const SearchNode node = arena_[static_cast<std::size_t>(idx)];
            if (node.lb >= ub) { // incumbent improved after commit
                ++stats_.pruned_bound;
                continue;
            }
            emit_children(idx, stage, node.v, node.g, ub, scratch_);
        }

        if (leaf_level) {
            // Children carry the exact total cost in lb; just take the best.
            for (const SearchNode& leaf : scratch_)
                if (leaf.lb < ub) {
                    arena_.push_back(leaf);
                    ub = leaf.lb;
                    best_leaf = static_cast<std::int32_t>(arena_.size()) - 1;
                    stats_.deepest_stage = h_.stages;
                }
            ++stats_.levels_completed;
            frontier_.clear();
            break;
        }

        const std::size_t k1 = static_cast<std::size_t>(stage) + 1;
        std::vector<SearchNode> survivors =
            context_eliminate(std::move(scratch_), h_.v_min_t[k1],
                              h_.v_max_t[k1], cfg_.epsilon,
                              &stats_.pruned_binning);
        std::sort(survivors.begin(), survivors.end(), candidate_order);

        frontier_.clear();
        for (const SearchNode& s : survivors) {
            arena_.push_back(s);
            frontier_.push_back(static_cast<std::int32_t>(arena_.size()) - 1);
        }
        if (!frontier_.empty())
            stats_.deepest_stage = std::max(stats_.deepest_stage, stage + 1);
        ++stats_.levels_completed;

        if (frontier_.empty()) break;

        // One greedy dive from the most promising survivor keeps the
        // incumbent close to the frontier's best lower bound.
        probe(frontier_.front(), stage + 1, ub, best_leaf);
    }

    return finish(Termination::Completed);
}

} // namespace ecodrive
