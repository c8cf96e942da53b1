#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cliffcut/graph.hpp"

namespace cliffcut {

// Bipartition of the nodes: bits[i] = 1 means node i is in side A.
// Spins are sigma_i = 2*bits[i] - 1.
struct CutAssignment {
    std::vector<uint8_t> bits;

    CutAssignment() = default;
    explicit CutAssignment(size_t n) : bits(n, 0) {}
    explicit CutAssignment(std::vector<uint8_t> b) : bits(std::move(b)) {}

    size_t size() const { return bits.size(); }
    int spin(size_t i) const { return bits[i] ? 1 : -1; }

    CutAssignment complement() const;
    std::string to_string() const;                         // e.g. "01011"
    static CutAssignment from_string(const std::string&);  // inverse

    bool operator==(const CutAssignment&) const = default;
};

// Weight of edges crossing the bipartition, each undirected edge counted once.
double cut_value(const Graph& g, const CutAssignment& z);

// (1/2) * sum over edges of w_ij * sigma_i * sigma_j. Related to the cut by
// cut_value = total_weight/2 - ising_energy, so minimizing the energy
// maximizes the cut.
double ising_energy(const Graph& g, const CutAssignment& z);

// achieved/optimum, for a pair of cut values or a pair of energies.
// optimum = 0 has no meaningful ratio and raises.
double approx_ratio(double achieved, double optimum);

}  // namespace cliffcut
