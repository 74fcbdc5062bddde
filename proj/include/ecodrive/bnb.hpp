#ifndef ECODRIVE_BNB_HPP
#define ECODRIVE_BNB_HPP

#include <cstdint>
#include <vector>

#include "ecodrive/heuristic.hpp"
#include "ecodrive/ocp.hpp"
#include "ecodrive/route.hpp"
#include "ecodrive/vehicle.hpp"
#include "ecodrive/warmstart.hpp"

namespace ecodrive {

/// One node of the search tree. Nodes live in an append-only arena;
/// parent links allow path extraction from any leaf.
struct SearchNode {
    double v = 0;  // velocity at this node's stage
    double g = 0;  // accumulated weighted cost from the root
    double lb = 0; // g plus the remaining-cost bound
    std::int32_t parent = -1;
    std::uint8_t mode = 0; // decision that led here (root: unused)
    std::int8_t gear = 0;

    ModeGear via() const { return {static_cast<Mode>(mode), gear}; }
};

/// Bin of the context-elimination grid; bins are left-open/right-closed
/// so a velocity exactly on a bin edge belongs to the bin below.
int bin_index(double v, double v_min, double eps);

/// Keep one representative per epsilon-bin: the node with the lowest
/// accumulated cost (ties: lower bound, velocity, mode order, gear).
/// eps == 0 disables elimination. Survivors come back in bin order;
/// `eliminated`, when given, is incremented per dropped node.
std::vector<SearchNode> context_eliminate(std::vector<SearchNode> cand,
                                          double v_min, double v_max,
                                          double eps,
                                          std::int64_t* eliminated = nullptr);

enum class Termination : std::uint8_t { Completed, TimeLimit, Infeasible };

const char* to_string(Termination t);

struct SolveStats {
    std::int64_t nodes_expanded = 0;
    std::int64_t children_generated = 0; // feasible, in-corridor, unpruned
    std::int64_t pruned_infeasible = 0;  // mode/corridor rejections
    std::int64_t pruned_bound = 0;       // lower bound at or above incumbent
    std::int64_t pruned_binning = 0;     // lost the epsilon-bin contest
    std::int64_t probe_runs = 0;
    std::int64_t probe_improvements = 0;
    int levels_completed = 0;
    int deepest_stage = 0;
    double wall_ms = 0;
};

struct SolveResult {
    bool feasible = false;
    double cost = 0; // total weighted cost of the returned trajectory
    std::vector<ModeGear> modes;    // size stages
    std::vector<double> velocities; // size stages+1
    Termination termination = Termination::Infeasible;
    SolveStats stats;
};

/// Dedicated branch-and-bound search over mode/gear sequences.
///
/// The tree is explored level by level (one level per stage). Each level
/// generates all children of the surviving frontier, discards those whose
/// lower bound cannot beat the incumbent, collapses near-identical
/// velocities via context elimination, then runs one greedy dive from the
/// most promising survivor to tighten the incumbent early. The first
/// feasible incumbent comes from the warm start, so the solver is anytime:
/// stopping at the time limit still returns the best trajectory seen.
class BnbSolver {
public:
    BnbSolver(const Vehicle& veh, const Horizon& h, const Heuristic& heur,
              const SolverConfig& cfg);

    SolveResult solve(const WarmStartResult& warm, double v0);

private:
    void emit_children(std::int32_t parent, int stage, double v, double g,
                       double ub, std::vector<SearchNode>& out);
    void probe(std::int32_t start, int start_stage, double& ub,
               std::int32_t& best_leaf);
    SolveResult extract(std::int32_t best_leaf, const WarmStartResult& warm,
                        double ub, Termination term) const;

    const Vehicle& veh_;
    const Horizon& h_;
    const Heuristic& heur_;
    const SolverConfig& cfg_;

    std::vector<SearchNode> arena_;
    std::vector<std::int32_t> frontier_;
    std::vector<SearchNode> scratch_;
    SolveStats stats_;
};

} // namespace ecodrive

#endif
