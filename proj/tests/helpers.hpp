#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "cliffcut/adapt.hpp"
#include "cliffcut/graph.hpp"
#include "cliffcut/solution.hpp"

namespace cliffcut::testing {

#ifndef CLIFFCUT_TEST_DATA_DIR
#define CLIFFCUT_TEST_DATA_DIR "tests/data"
#endif

inline std::string data_path(const std::string& name) {
    return std::string(CLIFFCUT_TEST_DATA_DIR) + "/" + name;
}

// 5-node worked example: unit weights, maximum cut 6 attained by
// ({0,2,3}, {1,4}).
inline Graph golden5() {
    Graph g(5);
    g.add_edge(0, 1, 1);
    g.add_edge(0, 4, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(1, 3, 1);
    g.add_edge(2, 3, 1);
    g.add_edge(2, 4, 1);
    g.add_edge(3, 4, 1);
    return g;
}

inline const std::string golden5_cut_bits = "10110";  // {0,2,3} vs {1,4}

// Tie-break script that reproduces the worked run from start node 1:
// j = 3, then nodes 0 (side j), 4 (side k), 2 (side j).
inline std::vector<GateRecord> golden5_script() {
    return {{Side::j, 3}, {Side::j, 0}, {Side::k, 4}, {Side::j, 2}};
}

// 4-node worked example: unit weights, maximum cut 3; the last node to be
// placed has gradient exactly 0 against both sides.
inline Graph golden4() {
    Graph g(4);
    g.add_edge(0, 1, 1);
    g.add_edge(0, 2, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(2, 3, 1);
    return g;
}

inline const std::string golden4_cut_bits = "1101";  // {0,1,3} vs {2}

// Worked run from start node 1: j = 2, node 3 joins side k, node 0 ends
// with zero gradient and is scripted onto side k.
inline std::vector<GateRecord> golden4_script() {
    return {{Side::j, 2}, {Side::k, 3}, {Side::k, 0}};
}

// Unique temp file path for round-trip tests.
inline std::string tmp_file(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path();
    return (dir / ("cliffcut_test_" + tag + "_" + std::to_string(++counter) +
                   "_" + std::to_string(::getpid())))
        .string();
}

}  // namespace cliffcut::testing
