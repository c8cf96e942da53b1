#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cliffcut/graph.hpp"
#include "cliffcut/rng.hpp"
#include "cliffcut/solution.hpp"

namespace cliffcut {

// Greedy MaxCut solver that grows a two-sided partition one node per step,
// always attaching the node with the largest side-difference gradient.
// Each run corresponds to a Clifford circuit; the gate_trace it records can
// be replayed on a stabilizer tableau for independent verification.

// Resolves ties between nodes whose gradients attain the same maximum
// magnitude, and picks the side for exact zero gradients.
struct TieBreakPolicy {
    enum class Kind {
        lowest_index,   // lowest node index; zero gradients go to side k
        scripted,       // explicit (side, node) list, validated against the run
        seeded_random,  // uniform choice among maximizers
    };

    Kind kind = Kind::lowest_index;
    std::vector<GateRecord> script;
    uint64_t seed = 0;

    static TieBreakPolicy lowest_index() { return {}; }
    static TieBreakPolicy scripted(std::vector<GateRecord> s) {
        return {Kind::scripted, std::move(s), 0};
    }
    static TieBreakPolicy seeded_random(uint64_t seed) {
        return {Kind::seeded_random, {}, seed};
    }
};

// Bookkeeping for one run: every node is inactive until attached to side k
// (the start node's side) or side j. step counts attached nodes minus one,
// so after init step = 1 and side_k_count + side_j_count = step + 1.
struct PartitionState {
    int k = -1;
    int j = -1;
    int step = 0;
    std::vector<Side> side;        // meaningful only where active[v] != 0
    std::vector<uint8_t> active;   // 1 once attached
    std::vector<int> inactive;     // compact unordered list of unattached nodes
    int side_k_count = 0;
    int side_j_count = 0;

    std::vector<int> side_k_nodes() const;
    std::vector<int> side_j_nodes() const;
};

// Per-node gradient of attaching b to side k:
//   g[b] = -sum over side-k neighbors l of w_lb + sum over side-j neighbors l of w_lb
// The gradient for side j is the negation, so one number per node suffices.
// Maintained incrementally as nodes attach.
struct GradientCache {
    std::vector<double> g;
};

// Mutable tie-break state threaded through one run's steps.
struct TieBreakContext {
    explicit TieBreakContext(const TieBreakPolicy& policy)
        : policy(policy), rng(policy.seed), cursor(0) {}

    const TieBreakPolicy& policy;
    Rng rng;
    size_t cursor;
};

// Picks j = argmax_b w_kb (absent edges count as 0, ties per policy),
// producing the two-node seed partition and the initial gradient cache.
// Returns the selected weight so the caller can record it as the first
// gradient-trace entry.
double init_run(const Graph& g, int k, PartitionState& state, GradientCache& cache,
                TieBreakContext& ties);

double gradient(const PartitionState& state, const GradientCache& cache, int b);

// Attaches the inactive node with maximal |g[b]| (side k if positive, side j
// if negative, ties per policy) and updates the cache incrementally.
// Returns the chosen (node, side) and writes the selected |g| magnitude to
// selected_gradient.
std::pair<int, Side> step(PartitionState& state, GradientCache& cache, const Graph& g,
                          TieBreakContext& ties, double* selected_gradient = nullptr);

Solution run_from(const Graph& g, int k,
                  const TieBreakPolicy& ties = TieBreakPolicy::lowest_index());

// One run from a uniformly random start node.
Solution randomized(const Graph& g, uint64_t seed,
                    const TieBreakPolicy& ties = TieBreakPolicy::lowest_index());

struct PerStartRecord {
    int k;
    double cut_value;
    double ising_energy;
};

struct DeterministicResult {
    Solution best;  // minimal ising_energy, ties to lowest start node
    std::vector<PerStartRecord> per_start;
};

// Runs every start node (optionally in parallel; the reduction is ordered by
// (energy, k), so the result is schedule independent).
DeterministicResult deterministic(const Graph& g,
                                  const TieBreakPolicy& ties = TieBreakPolicy::lowest_index(),
                                  int threads = 0);

}  // namespace cliffcut
