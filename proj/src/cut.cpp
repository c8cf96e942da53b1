#include "cliffcut/cut.hpp"

#include <stdexcept>

namespace cliffcut {

CutAssignment CutAssignment::complement() const {
    CutAssignment c(*this);
    for (auto& b : c.bits) {
        b ^= 1;
    }
    return c;
}

std::string CutAssignment::to_string() const {
    std::string s(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) {
            s[i] = '1';
        }
    }
    return s;
}

CutAssignment CutAssignment::from_string(const std::string& s) {
    CutAssignment z(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') {
            z.bits[i] = 1;
        } else if (s[i] != '0') {
            throw std::invalid_argument("CutAssignment: expected a 0/1 string");
        }
    }
    return z;
}

namespace {

void check_size(const Graph& g, const CutAssignment& z, const char* who) {
    if (z.size() != static_cast<size_t>(g.num_nodes())) {
        throw std::invalid_argument(std::string(who) + ": assignment length does not match graph");
    }
}

}  // namespace

double cut_value(const Graph& g, const CutAssignment& z) {
    check_size(g, z, "cut_value");
    double c = 0.0;
    for (const Edge& e : g.edges()) {
        if (z.bits[static_cast<size_t>(e.u)] != z.bits[static_cast<size_t>(e.v)]) {
            c += e.w;
        }
    }
    return c;
}

double ising_energy(const Graph& g, const CutAssignment& z) {
    check_size(g, z, "ising_energy");
    double e = 0.0;
    for (const Edge& edge : g.edges()) {
        int su = z.spin(static_cast<size_t>(edge.u));
        int sv = z.spin(static_cast<size_t>(edge.v));
        e += edge.w * su * sv;
    }
    return 0.5 * e;
}

double approx_ratio(double achieved, double optimum) {
    if (optimum == 0.0) {
        throw std::domain_error("approx_ratio: optimum is zero, ratio undefined");
    }
    return achieved / optimum;
}

}  // namespace cliffcut
