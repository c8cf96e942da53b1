#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cliffcut/rng.hpp"

namespace cliffcut {

struct Edge {
    int u;
    int v;
    double w;
};

// Weighted undirected graph. Each edge is stored once with u < v; the
// adjacency lists carry both directions. Immutable after construction
// in practice: generators and parsers build it, everything else reads.
class Graph {
  public:
    explicit Graph(int n);

    // Requires 0 <= u,v < n, u != v, finite weight, pair not already present.
    void add_edge(int u, int v, double w);

    int num_nodes() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::pair<int, double>>& neighbors(int v) const;

    // O(deg) lookup; absent edges have weight 0.
    double weight(int u, int v) const;

    double total_weight() const;

  private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::unordered_set<uint64_t> edge_keys_;  // (u << 32) | v for O(1) duplicate checks
};

// Edge weight distribution for the instance generators.
struct WeightSpec {
    enum class Kind { unit, uniform, exponential, normal };

    Kind kind = Kind::unit;
    double a = 0.0;     // uniform lower bound
    double b = 1.0;     // uniform upper bound
    double mean = 1.0;  // exponential mean
    double mu = 0.0;    // normal mean
    double var = 1.0;   // normal variance

    static WeightSpec unit() { return {}; }
    static WeightSpec uniform(double a, double b);
    static WeightSpec u01() { return uniform(0.0, 1.0); }
    static WeightSpec exponential(double mean);
    static WeightSpec normal(double mu, double var);

    double sample(Rng& rng) const;
};

Graph gen_complete(int n, const WeightSpec& spec, uint64_t seed);

// Sherrington-Kirkpatrick instance: complete graph with Gaussian couplings.
// Weights are scaled so that ising_energy(g, z) evaluates the SK Hamiltonian
// (1/sqrt(n)) * sum_{i<j} g_ij s_i s_j directly: w_ij = 2 g_ij / sqrt(n).
Graph gen_sk(int n, uint64_t seed);

// Random simple K-regular graph via the pairing model with edge-switching
// repair of self-loops and duplicate edges.
Graph gen_regular(int n, int k, const WeightSpec& spec, uint64_t seed);

// G(n,p): each pair independently with probability p, unit weight.
Graph gen_erdos_renyi(int n, double p, uint64_t seed);

// Edge-list text format: first line "n m", then m lines "i j w" with
// 0 <= i < j < n; '#' starts a comment line; weights round-trip exactly.
Graph read_edge_list(const std::string& path);
Graph parse_edge_list(const std::string& text, const std::string& origin = "<string>");
void write_edge_list(const Graph& g, const std::string& path);
std::string format_edge_list(const Graph& g);

inline double total_weight(const Graph& g) { return g.total_weight(); }

}  // namespace cliffcut
