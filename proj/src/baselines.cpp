#include "cliffcut/baselines.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cliffcut/parallel.hpp"
#include "cliffcut/rng.hpp"

namespace cliffcut {

namespace {

struct SubcubeBest {
    double cut = -std::numeric_limits<double>::infinity();
    std::vector<uint8_t> bits;
};

// Gray-code walk over the low `free_bits` node positions (nodes 1..free_bits)
// starting from `z` with cut value `c`; the high positions stay fixed.
void gray_walk(const Graph& g, std::vector<uint8_t>& z, double c, int free_bits,
               SubcubeBest& best) {
    if (c > best.cut) {
        best.cut = c;
        best.bits = z;
    }
    uint64_t steps = free_bits >= 1 ? (1ull << free_bits) - 1 : 0;
    for (uint64_t t = 1; t <= steps; ++t) {
        int v = __builtin_ctzll(t) + 1;  // node to flip; node 0 is pinned
        double delta = 0.0;
        for (const auto& [u, w] : g.neighbors(v)) {
            // An edge that is currently uncut becomes cut by the flip.
            delta += z[static_cast<size_t>(u)] == z[static_cast<size_t>(v)] ? w : -w;
        }
        z[static_cast<size_t>(v)] ^= 1;
        c += delta;
        if (c > best.cut) {
            best.cut = c;
            best.bits = z;
        }
    }
}

}  // namespace

ExactResult exact_maxcut(const Graph& g, int limit, int threads) {
    int n = g.num_nodes();
    if (n > limit) {
        throw std::invalid_argument("exact_maxcut: n = " + std::to_string(n) +
                                    " exceeds the enumeration limit " + std::to_string(limit));
    }
    if (threads <= 0) {
        threads = default_thread_count();
    }
    int free_bits = n - 1;

    // Split the enumeration by fixing the highest `prefix` free positions.
    int prefix = 0;
    while (prefix < free_bits && (1 << prefix) < 4 * threads && prefix < 10) {
        ++prefix;
    }
    if (free_bits - prefix < 10) {
        prefix = 0;  // small instance: not worth splitting
    }
    int low_bits = free_bits - prefix;
    uint64_t tasks = 1ull << prefix;

    std::vector<SubcubeBest> bests(tasks);
    parallel_for(static_cast<int>(tasks), prefix == 0 ? 1 : threads, [&](int task) {
        std::vector<uint8_t> z(static_cast<size_t>(n), 0);
        for (int b = 0; b < prefix; ++b) {
            z[static_cast<size_t>(1 + low_bits + b)] = (static_cast<uint64_t>(task) >> b) & 1;
        }
        double c = cut_value(g, CutAssignment(z));
        gray_walk(g, z, c, low_bits, bests[static_cast<size_t>(task)]);
    });

    size_t winner = 0;
    for (size_t t = 1; t < bests.size(); ++t) {
        if (bests[t].cut > bests[winner].cut) {
            winner = t;
        }
    }

    ExactResult out;
    out.witness = CutAssignment(bests[winner].bits);
    out.optimum_cut = cut_value(g, out.witness);
    out.optimum_energy = ising_energy(g, out.witness);
    out.evaluated = free_bits >= 1 ? (1ull << free_bits) : 1;
    return out;
}

Solution gw_solve(const Graph& g, const GWParams& params, bool* converged) {
    auto t0 = std::chrono::steady_clock::now();
    int n = g.num_nodes();
    if (n < 2) {
        throw std::invalid_argument("gw_solve: need at least 2 nodes");
    }
    if (params.rounds < 1) {
        throw std::invalid_argument("gw_solve: rounds must be at least 1");
    }
    if (params.rank > 0 && params.rank < 2) {
        throw std::invalid_argument("gw_solve: rank must be at least 2");
    }
    int rank = params.rank > 0 ? params.rank
                               : static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1;
    rank = std::max(rank, 2);

    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        W(e.u, e.v) = e.w;
        W(e.v, e.u) = e.w;
    }
    double w_total = g.total_weight();

    Rng rng(params.seed);
    Eigen::MatrixXd Y(n, rank);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < rank; ++r) {
            Y(i, r) = rng.normal();
        }
    }
    auto renormalize = [&](Eigen::MatrixXd& M) {
        for (int i = 0; i < n; ++i) {
            double norm = M.row(i).norm();
            if (norm > 0) {
                M.row(i) /= norm;
            } else {
                M.row(i).setZero();
                M(i, 0) = 1.0;
            }
        }
    };
    renormalize(Y);

    // objective F(Y) = sum_{(i,j) in E} w_ij (1 - y_i . y_j)
    //               = w_total - tr(Y^T W Y) / 2
    auto objective = [&](const Eigen::MatrixXd& G, const Eigen::MatrixXd& M) {
        return w_total - 0.5 * (M.cwiseProduct(G)).sum();
    };

    Eigen::MatrixXd G = W * Y;
    double f = objective(G, Y);
    bool hit_tol = false;
    Eigen::MatrixXd y_prev, r_prev;
    bool have_prev = false;
    for (int iter = 0; iter < params.max_iters; ++iter) {
        // Riemannian gradient: Euclidean grad of F is -G; project each row
        // onto the sphere's tangent space.
        Eigen::MatrixXd R = -G;
        for (int i = 0; i < n; ++i) {
            R.row(i) -= R.row(i).dot(Y.row(i)) * Y.row(i);
        }
        double gnorm = R.norm();
        if (gnorm < params.grad_tol) {
            hit_tol = true;
            break;
        }
        // Barzilai-Borwein initial step (plain warm steps crawl on this
        // objective's flat maximizer manifolds), safeguarded by backtracking.
        double step = 1.0;
        if (have_prev) {
            Eigen::MatrixXd dy = Y - y_prev;
            Eigen::MatrixXd dr = r_prev - R;
            double num = dy.squaredNorm();
            double den = std::abs(dy.cwiseProduct(dr).sum());
            if (den > 1e-30) {
                step = std::clamp(num / den, 1e-10, 1e10);
            }
        }
        y_prev = Y;
        r_prev = R;
        have_prev = true;
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::MatrixXd Yt = Y + step * R;
            renormalize(Yt);
            Eigen::MatrixXd Gt = W * Yt;
            double ft = objective(Gt, Yt);
            if (ft >= f + 1e-4 * step * gnorm * gnorm) {
                Y = std::move(Yt);
                G = std::move(Gt);
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            break;  // no improving step at any scale: stationary for our purposes
        }
    }
    if (converged) {
        *converged = hit_tol;
    }

    // Hyperplane rounding: h_i = sgn(r . y_i) for a Gaussian r.
    CutAssignment best;
    double best_cut = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd r(rank);
    for (int round = 0; round < params.rounds; ++round) {
        for (int d = 0; d < rank; ++d) {
            r(d) = rng.normal();
        }
        Eigen::VectorXd proj = Y * r;
        CutAssignment z(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            z.bits[static_cast<size_t>(i)] = proj(i) >= 0 ? 1 : 0;
        }
        double c = cut_value(g, z);
        if (c > best_cut) {
            best_cut = c;
            best = std::move(z);
        }
    }

    Solution s;
    s.assignment = std::move(best);
    s.cut_value = cut_value(g, s.assignment);
    s.ising_energy = ising_energy(g, s.assignment);
    s.solver = "gw";
    s.seed = params.seed;
    s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

Solution local_search(const Graph& g, const CutAssignment& start, uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    int n = g.num_nodes();
    if (start.size() != static_cast<size_t>(n)) {
        throw std::invalid_argument("local_search: start length does not match graph");
    }
    std::vector<uint8_t> z = start.bits;
    // gain[v]: cut-value change if v flips (uncut incident weight minus cut
    // incident weight).
    std::vector<double> gain(static_cast<size_t>(n), 0.0);
    for (const Edge& e : g.edges()) {
        double s = z[static_cast<size_t>(e.u)] == z[static_cast<size_t>(e.v)] ? e.w : -e.w;
        gain[static_cast<size_t>(e.u)] += s;
        gain[static_cast<size_t>(e.v)] += s;
    }
    for (;;) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (gain[static_cast<size_t>(v)] > 0 &&
                (best == -1 || gain[static_cast<size_t>(v)] > gain[static_cast<size_t>(best)])) {
                best = v;
            }
        }
        if (best == -1) {
            break;
        }
        for (const auto& [u, w] : g.neighbors(best)) {
            // Edges to best swap cut status, reversing their pull on u.
            double s = z[static_cast<size_t>(u)] == z[static_cast<size_t>(best)] ? w : -w;
            gain[static_cast<size_t>(u)] -= 2.0 * s;
        }
        gain[static_cast<size_t>(best)] = -gain[static_cast<size_t>(best)];
        z[static_cast<size_t>(best)] ^= 1;
    }

    Solution s;
    s.assignment = CutAssignment(std::move(z));
    s.cut_value = cut_value(g, s.assignment);
    s.ising_energy = ising_energy(g, s.assignment);
    s.solver = "local";
    s.seed = seed;
    s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

Solution sahni_gonzalez(const Graph& g, uint64_t order_seed) {
    auto t0 = std::chrono::steady_clock::now();
    int n = g.num_nodes();
    if (n < 2) {
        throw std::invalid_argument("sahni_gonzalez: need at least 2 nodes");
    }
    Rng rng(order_seed);
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        order[static_cast<size_t>(i)] = i;
    }
    for (size_t i = order.size() - 1; i > 0; --i) {
        size_t j = rng.uniform_int(i + 1);
        std::swap(order[i], order[j]);
    }

    std::vector<int8_t> placed(static_cast<size_t>(n), -1);  // -1 unplaced, 0 = B, 1 = A
    for (int v : order) {
        double to_a = 0.0, to_b = 0.0;
        for (const auto& [u, w] : g.neighbors(v)) {
            if (placed[static_cast<size_t>(u)] == 1) {
                to_a += w;
            } else if (placed[static_cast<size_t>(u)] == 0) {
                to_b += w;
            }
        }
        // Side A cuts the edges into B and vice versa; ties go to A.
        placed[static_cast<size_t>(v)] = to_b >= to_a ? 1 : 0;
    }

    Solution s;
    s.assignment = CutAssignment(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        s.assignment.bits[static_cast<size_t>(v)] = placed[static_cast<size_t>(v)] == 1;
    }
    s.cut_value = cut_value(g, s.assignment);
    s.ising_energy = ising_energy(g, s.assignment);
    s.solver = "sg";
    s.seed = order_seed;
    s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

CutAssignment random_assignment(int n, uint64_t seed) {
    Rng rng(seed);
    CutAssignment z(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        z.bits[static_cast<size_t>(i)] = rng.uniform_int(2) ? 1 : 0;
    }
    return z;
}

}  // namespace cliffcut
