#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffcut/cut.hpp"

namespace cliffcut {

// Which of the two growing sides a node was attached to. Side::k is the
// start node's side, Side::j the reference node's.
enum class Side : uint8_t { k, j };

inline char side_char(Side s) { return s == Side::k ? 'k' : 'j'; }

struct GateRecord {
    Side side;
    int node;

    bool operator==(const GateRecord&) const = default;
};

struct Solution {
    CutAssignment assignment;
    double cut_value = 0.0;
    double ising_energy = 0.0;
    int start_node = -1;  // -1 for solvers without a start-node concept
    std::vector<GateRecord> gate_trace;
    std::vector<double> gradient_trace;  // selected gradient per step (not serialized)
    std::string solver;
    uint64_t seed = 0;
    double wall_time_s = 0.0;
};

nlohmann::json solution_to_json(const Solution& s);
Solution solution_from_json(const nlohmann::json& j);

}  // namespace cliffcut
