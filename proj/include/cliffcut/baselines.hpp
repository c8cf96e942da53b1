#pragma once

#include <cstdint>

#include "cliffcut/cut.hpp"
#include "cliffcut/graph.hpp"
#include "cliffcut/solution.hpp"

namespace cliffcut {

struct ExactResult {
    double optimum_cut = 0.0;
    double optimum_energy = 0.0;
    CutAssignment witness;
    uint64_t evaluated = 0;
};

// Exhaustive maximum cut over 2^{n-1} assignments (node 0 pinned by the
// two-sided symmetry), walked in Gray-code order so each assignment costs
// O(deg) to evaluate. The enumeration may be split across threads by fixing
// high bits; the reduction is deterministic. The witness's cut and energy
// are re-evaluated from scratch, so incremental drift cannot leak into the
// returned values.
ExactResult exact_maxcut(const Graph& g, int limit = 26, int threads = 0);

struct GWParams {
    int rank = -1;          // <= 0: ceil(sqrt(2n)) + 1
    int max_iters = 2000;
    double grad_tol = 1e-6;
    int rounds = 1;         // hyperplane rounding repetitions
    uint64_t seed = 0;
};

// Goemans-Williamson relaxation solved by low-rank factorization: unit rows
// y_i, projected gradient ascent on sum w_ij (1 - y_i . y_j) with
// backtracking line search, then `rounds` Gaussian hyperplane roundings
// keeping the best cut. Non-convergence inside max_iters is reported via
// *converged, not an error.
Solution gw_solve(const Graph& g, const GWParams& params, bool* converged = nullptr);

// Best-improvement single-flip local search: repeatedly flips the node with
// the largest cut gain until no flip improves. Deterministic given start;
// seed is recorded in the Solution for provenance.
Solution local_search(const Graph& g, const CutAssignment& start, uint64_t seed = 0);

// Places nodes in a seeded random order, each on the side that maximizes
// the weight of newly cut edges to already-placed nodes (ties to side A).
Solution sahni_gonzalez(const Graph& g, uint64_t order_seed);

// Uniformly random assignment, the usual local_search start.
CutAssignment random_assignment(int n, uint64_t seed);

}  // namespace cliffcut
