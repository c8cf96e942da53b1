#include "cliffcut/solution.hpp"

#include <stdexcept>

namespace cliffcut {

nlohmann::json solution_to_json(const Solution& s) {
    nlohmann::json gates = nlohmann::json::array();
    for (const GateRecord& g : s.gate_trace) {
        gates.push_back({{"side", std::string(1, side_char(g.side))}, {"node", g.node}});
    }
    return nlohmann::json{
        {"start_node", s.start_node},
        {"cut_value", s.cut_value},
        {"ising_energy", s.ising_energy},
        {"assignment", s.assignment.to_string()},
        {"gate_trace", std::move(gates)},
        {"solver", s.solver},
        {"seed", s.seed},
        {"wall_time_s", s.wall_time_s},
    };
}

Solution solution_from_json(const nlohmann::json& j) {
    Solution s;
    s.start_node = j.at("start_node").get<int>();
    s.cut_value = j.at("cut_value").get<double>();
    s.ising_energy = j.at("ising_energy").get<double>();
    s.assignment = CutAssignment::from_string(j.at("assignment").get<std::string>());
    for (const auto& g : j.at("gate_trace")) {
        std::string side = g.at("side").get<std::string>();
        if (side != "k" && side != "j") {
            throw std::invalid_argument("solution_from_json: gate side must be \"k\" or \"j\"");
        }
        s.gate_trace.push_back({side == "k" ? Side::k : Side::j, g.at("node").get<int>()});
    }
    s.solver = j.at("solver").get<std::string>();
    s.seed = j.at("seed").get<uint64_t>();
    s.wall_time_s = j.at("wall_time_s").get<double>();
    return s;
}

}  // namespace cliffcut
