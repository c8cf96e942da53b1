#include "cliffcut/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "cliffcut/parallel.hpp"

namespace cliffcut {

std::vector<int> PartitionState::side_k_nodes() const {
    std::vector<int> out;
    for (size_t v = 0; v < side.size(); ++v) {
        if (active[v] && side[v] == Side::k) {
            out.push_back(static_cast<int>(v));
        }
    }
    return out;
}

std::vector<int> PartitionState::side_j_nodes() const {
    std::vector<int> out;
    for (size_t v = 0; v < side.size(); ++v) {
        if (active[v] && side[v] == Side::j) {
            out.push_back(static_cast<int>(v));
        }
    }
    return out;
}

namespace {

// Scripted entries must name a legal choice: a maximizer of the current
// selection rule whose side matches the gradient's sign (either side when
// the gradient is exactly zero).
[[noreturn]] void script_fail(const char* what) {
    throw std::invalid_argument(std::string("scripted tie-break: ") + what);
}

GateRecord next_scripted(TieBreakContext& ties) {
    if (ties.cursor >= ties.policy.script.size()) {
        script_fail("script exhausted before the run finished");
    }
    return ties.policy.script[ties.cursor++];
}

}  // namespace

double init_run(const Graph& g, int k, PartitionState& state, GradientCache& cache,
                TieBreakContext& ties) {
    int n = g.num_nodes();
    if (n < 2) {
        throw std::invalid_argument("init_run: need at least 2 nodes");
    }
    if (k < 0 || k >= n) {
        throw std::invalid_argument("init_run: start node out of range");
    }

    // Weights from k to every other node, absent edges as 0.
    std::vector<double> w_k(static_cast<size_t>(n), 0.0);
    for (const auto& [nbr, w] : g.neighbors(k)) {
        w_k[static_cast<size_t>(nbr)] = w;
    }

    double best = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < n; ++b) {
        if (b != k) {
            best = std::max(best, w_k[static_cast<size_t>(b)]);
        }
    }

    int j = -1;
    switch (ties.policy.kind) {
        case TieBreakPolicy::Kind::lowest_index: {
            for (int b = 0; b < n; ++b) {
                if (b != k && w_k[static_cast<size_t>(b)] == best) {
                    j = b;
                    break;
                }
            }
            break;
        }
        case TieBreakPolicy::Kind::scripted: {
            GateRecord r = next_scripted(ties);
            if (r.side != Side::j) {
                script_fail("first entry must attach to side j");
            }
            if (r.node == k || r.node < 0 || r.node >= n) {
                script_fail("first entry names an invalid node");
            }
            if (w_k[static_cast<size_t>(r.node)] != best) {
                script_fail("first entry is not an argmax of the seed weights");
            }
            j = r.node;
            break;
        }
        case TieBreakPolicy::Kind::seeded_random: {
            std::vector<int> candidates;
            for (int b = 0; b < n; ++b) {
                if (b != k && w_k[static_cast<size_t>(b)] == best) {
                    candidates.push_back(b);
                }
            }
            j = candidates[ties.rng.uniform_int(candidates.size())];
            break;
        }
    }

    state.k = k;
    state.j = j;
    state.step = 1;
    state.side.assign(static_cast<size_t>(n), Side::k);
    state.side[static_cast<size_t>(j)] = Side::j;
    state.active.assign(static_cast<size_t>(n), 0);
    state.active[static_cast<size_t>(k)] = 1;
    state.active[static_cast<size_t>(j)] = 1;
    state.side_k_count = 1;
    state.side_j_count = 1;
    state.inactive.clear();
    for (int v = 0; v < n; ++v) {
        if (v != k && v != j) {
            state.inactive.push_back(v);
        }
    }

    cache.g.assign(static_cast<size_t>(n), 0.0);
    for (int b : state.inactive) {
        cache.g[static_cast<size_t>(b)] = -w_k[static_cast<size_t>(b)] + g.weight(j, b);
    }
    return best;
}

double gradient(const PartitionState& state, const GradientCache& cache, int b) {
    if (b < 0 || b >= static_cast<int>(state.active.size()) || state.active[static_cast<size_t>(b)]) {
        throw std::invalid_argument("gradient: node is not inactive");
    }
    return cache.g[static_cast<size_t>(b)];
}

std::pair<int, Side> step(PartitionState& state, GradientCache& cache, const Graph& g,
                          TieBreakContext& ties, double* selected_gradient) {
    if (state.inactive.empty()) {
        throw std::logic_error("step: no inactive nodes remain");
    }

    double best_mag = -1.0;
    for (int b : state.inactive) {
        best_mag = std::max(best_mag, std::abs(cache.g[static_cast<size_t>(b)]));
    }

    int chosen = -1;
    Side side = Side::k;
    switch (ties.policy.kind) {
        case TieBreakPolicy::Kind::lowest_index: {
            for (int b : state.inactive) {
                double gb = cache.g[static_cast<size_t>(b)];
                if (std::abs(gb) == best_mag && (chosen == -1 || b < chosen)) {
                    chosen = b;
                }
            }
            double gc = cache.g[static_cast<size_t>(chosen)];
            side = gc > 0 ? Side::k : (gc < 0 ? Side::j : Side::k);
            break;
        }
        case TieBreakPolicy::Kind::scripted: {
            GateRecord r = next_scripted(ties);
            if (r.node < 0 || r.node >= static_cast<int>(state.active.size()) ||
                state.active[static_cast<size_t>(r.node)]) {
                script_fail("entry names a node that is not inactive");
            }
            double gb = cache.g[static_cast<size_t>(r.node)];
            if (std::abs(gb) != best_mag) {
                script_fail("entry is not a gradient maximizer");
            }
            if ((gb > 0 && r.side != Side::k) || (gb < 0 && r.side != Side::j)) {
                script_fail("entry's side contradicts the gradient sign");
            }
            chosen = r.node;
            side = r.side;
            break;
        }
        case TieBreakPolicy::Kind::seeded_random: {
            // Candidates sorted by (node, side) so the draw is independent of
            // the inactive list's internal order.
            std::vector<GateRecord> candidates;
            for (int b : state.inactive) {
                double gb = cache.g[static_cast<size_t>(b)];
                if (std::abs(gb) != best_mag) {
                    continue;
                }
                if (gb > 0) {
                    candidates.push_back({Side::k, b});
                } else if (gb < 0) {
                    candidates.push_back({Side::j, b});
                } else {
                    candidates.push_back({Side::k, b});
                    candidates.push_back({Side::j, b});
                }
            }
            std::sort(candidates.begin(), candidates.end(), [](const GateRecord& a, const GateRecord& b) {
                return a.node != b.node ? a.node < b.node : a.side < b.side;
            });
            GateRecord r = candidates[ties.rng.uniform_int(candidates.size())];
            chosen = r.node;
            side = r.side;
            break;
        }
    }

    if (selected_gradient) {
        *selected_gradient = best_mag;
    }

    // Detach from the inactive list (swap-remove).
    auto it = std::find(state.inactive.begin(), state.inactive.end(), chosen);
    std::swap(*it, state.inactive.back());
    state.inactive.pop_back();
    state.active[static_cast<size_t>(chosen)] = 1;
    state.side[static_cast<size_t>(chosen)] = side;
    if (side == Side::k) {
        ++state.side_k_count;
    } else {
        ++state.side_j_count;
    }
    ++state.step;

    // A node on side k repels its still-inactive neighbors from side k and
    // vice versa: fold the attached node's weights into the cache.
    double sgn = side == Side::k ? -1.0 : 1.0;
    for (const auto& [nbr, w] : g.neighbors(chosen)) {
        if (!state.active[static_cast<size_t>(nbr)]) {
            cache.g[static_cast<size_t>(nbr)] += sgn * w;
        }
    }
    return {chosen, side};
}

Solution run_from(const Graph& g, int k, const TieBreakPolicy& ties) {
    auto t0 = std::chrono::steady_clock::now();
    int n = g.num_nodes();

    PartitionState state;
    GradientCache cache;
    TieBreakContext ctx(ties);
    double w_seed = init_run(g, k, state, cache, ctx);

    Solution s;
    s.start_node = k;
    s.solver = "adapt";
    s.gate_trace.push_back({Side::j, state.j});
    s.gradient_trace.push_back(w_seed);
    for (int r = 0; r < n - 2; ++r) {
        double sel = 0.0;
        auto [node, side] = step(state, cache, g, ctx, &sel);
        s.gate_trace.push_back({side, node});
        s.gradient_trace.push_back(sel);
    }
    if (ties.kind == TieBreakPolicy::Kind::scripted && ctx.cursor != ties.script.size()) {
        throw std::invalid_argument("scripted tie-break: script longer than the run");
    }

    s.assignment = CutAssignment(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        s.assignment.bits[static_cast<size_t>(v)] = state.side[static_cast<size_t>(v)] == Side::k;
    }
    s.cut_value = cut_value(g, s.assignment);
    s.ising_energy = ising_energy(g, s.assignment);
    s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

Solution randomized(const Graph& g, uint64_t seed, const TieBreakPolicy& ties) {
    Rng rng(seed);
    int k = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(g.num_nodes())));
    Solution s = run_from(g, k, ties);
    s.solver = "adapt-rand";
    s.seed = seed;
    return s;
}

DeterministicResult deterministic(const Graph& g, const TieBreakPolicy& ties, int threads) {
    auto t0 = std::chrono::steady_clock::now();
    int n = g.num_nodes();
    std::vector<Solution> runs(static_cast<size_t>(n));
    parallel_for(n, threads, [&](int k) { runs[static_cast<size_t>(k)] = run_from(g, k, ties); });

    DeterministicResult out;
    out.per_start.reserve(static_cast<size_t>(n));
    int best_k = 0;
    for (int k = 0; k < n; ++k) {
        const Solution& s = runs[static_cast<size_t>(k)];
        out.per_start.push_back({k, s.cut_value, s.ising_energy});
        if (s.ising_energy < runs[static_cast<size_t>(best_k)].ising_energy) {
            best_k = k;
        }
    }
    out.best = std::move(runs[static_cast<size_t>(best_k)]);
    out.best.solver = "adapt-det";
    out.best.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace cliffcut
