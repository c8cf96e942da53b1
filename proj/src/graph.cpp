#include "cliffcut/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cliffcut {

Graph::Graph(int n) : n_(n) {
    if (n < 1) {
        throw std::invalid_argument("Graph: node count must be at least 1");
    }
    adj_.resize(static_cast<size_t>(n));
}

void Graph::add_edge(int u, int v, double w) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) {
        throw std::invalid_argument("add_edge: node index out of range");
    }
    if (u == v) {
        throw std::invalid_argument("add_edge: self-loops are not allowed");
    }
    if (!std::isfinite(w)) {
        throw std::invalid_argument("add_edge: weight must be finite");
    }
    if (u > v) {
        std::swap(u, v);
    }
    uint64_t key = (static_cast<uint64_t>(u) << 32) | static_cast<uint64_t>(v);
    if (!edge_keys_.insert(key).second) {
        throw std::invalid_argument("add_edge: duplicate edge (" + std::to_string(u) + ", " +
                                    std::to_string(v) + ")");
    }
    edges_.push_back({u, v, w});
    adj_[static_cast<size_t>(u)].emplace_back(v, w);
    adj_[static_cast<size_t>(v)].emplace_back(u, w);
}

const std::vector<std::pair<int, double>>& Graph::neighbors(int v) const {
    return adj_.at(static_cast<size_t>(v));
}

double Graph::weight(int u, int v) const {
    for (const auto& [nbr, w] : neighbors(u)) {
        if (nbr == v) {
            return w;
        }
    }
    return 0.0;
}

double Graph::total_weight() const {
    double sum = 0.0;
    for (const Edge& e : edges_) {
        sum += e.w;
    }
    return sum;
}

WeightSpec WeightSpec::uniform(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("WeightSpec: uniform bounds must be finite");
    }
    WeightSpec s;
    s.kind = Kind::uniform;
    s.a = a;
    s.b = b;
    return s;
}

WeightSpec WeightSpec::exponential(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("WeightSpec: exponential mean must be positive");
    }
    WeightSpec s;
    s.kind = Kind::exponential;
    s.mean = mean;
    return s;
}

WeightSpec WeightSpec::normal(double mu, double var) {
    if (!std::isfinite(mu) || !std::isfinite(var) || var < 0.0) {
        throw std::invalid_argument("WeightSpec: normal parameters invalid");
    }
    WeightSpec s;
    s.kind = Kind::normal;
    s.mu = mu;
    s.var = var;
    return s;
}

double WeightSpec::sample(Rng& rng) const {
    switch (kind) {
        case Kind::unit:
            return 1.0;
        case Kind::uniform:
            return rng.uniform(a, b);
        case Kind::exponential:
            return rng.exponential(mean);
        case Kind::normal:
            return rng.normal(mu, var);
    }
    throw std::logic_error("WeightSpec: unknown kind");
}

Graph gen_complete(int n, const WeightSpec& spec, uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("gen_complete: need at least 2 nodes");
    }
    Graph g(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            g.add_edge(i, j, spec.sample(rng));
        }
    }
    return g;
}

Graph gen_sk(int n, uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("gen_sk: need at least 2 nodes");
    }
    Graph g(n);
    Rng rng(seed);
    double scale = 2.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            g.add_edge(i, j, scale * rng.normal());
        }
    }
    return g;
}

namespace {

// Pairing model: K copies of each node, random perfect matching of the
// copies. Self-loops and duplicates are then repaired by edge switches,
// which preserve the degree sequence. A pairing can be stuck: e.g. on 4
// nodes with K = 3, {00, 33, 11, 23, 02, 12} admits no single switch whose
// both results are new simple edges. When the switch budget runs out the
// pairing is resampled instead of failing.
Graph pair_and_repair(int n, int k, const WeightSpec& spec, Rng& rng) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<size_t>(n) * k);
    for (int v = 0; v < n; ++v) {
        for (int c = 0; c < k; ++c) {
            stubs.push_back(v);
        }
    }
    size_t m = stubs.size() / 2;
    std::vector<std::pair<int, int>> pairs(m);

    auto count_multiplicity = [&](std::set<std::pair<int, int>>& seen,
                                  std::vector<size_t>& bad) {
        seen.clear();
        bad.clear();
        for (size_t e = 0; e < pairs.size(); ++e) {
            if (pairs[e].first == pairs[e].second || !seen.insert(pairs[e]).second) {
                bad.push_back(e);
            }
        }
    };

    const int max_attempts = 200;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        // Fisher-Yates shuffle, then pair consecutive stubs.
        for (size_t i = stubs.size() - 1; i > 0; --i) {
            size_t j = rng.uniform_int(i + 1);
            std::swap(stubs[i], stubs[j]);
        }
        for (size_t e = 0; e < m; ++e) {
            int u = stubs[2 * e];
            int v = stubs[2 * e + 1];
            pairs[e] = {std::min(u, v), std::max(u, v)};
        }

        std::set<std::pair<int, int>> seen;
        std::vector<size_t> bad;
        count_multiplicity(seen, bad);
        // Each switch picks a bad pair and a random partner pair and swaps
        // one endpoint. Accepted only if both results are new simple edges,
        // so the bad count never increases.
        size_t guard = 0;
        const size_t guard_limit = 2000 + 200 * pairs.size();
        while (!bad.empty() && guard <= guard_limit) {
            ++guard;
            size_t e1 = bad[rng.uniform_int(bad.size())];
            size_t e2 = rng.uniform_int(pairs.size());
            if (e1 == e2) {
                continue;
            }
            auto [a, b] = pairs[e1];
            auto [c, d] = pairs[e2];
            // Swap b and d (orientation chosen at random for mixing).
            if (rng.uniform_int(2) == 0) {
                std::swap(c, d);
            }
            std::pair<int, int> f1{std::min(a, d), std::max(a, d)};
            std::pair<int, int> f2{std::min(c, b), std::max(c, b)};
            if (f1.first == f1.second || f2.first == f2.second || f1 == f2) {
                continue;
            }
            if (seen.count(f1) || seen.count(f2)) {
                continue;
            }
            seen.erase(pairs[e1]);
            // A duplicate pair was never inserted twice; erase may miss for
            // the second copy, which is fine: membership is rebuilt below.
            auto it2 = seen.find(pairs[e2]);
            if (it2 != seen.end()) {
                seen.erase(it2);
            }
            pairs[e1] = f1;
            pairs[e2] = f2;
            count_multiplicity(seen, bad);
        }
        if (!bad.empty()) {
            continue;  // stuck pairing: resample
        }

        Graph g(n);
        std::sort(pairs.begin(), pairs.end());
        for (auto [u, v] : pairs) {
            g.add_edge(u, v, spec.sample(rng));
        }
        return g;
    }
    throw std::runtime_error("gen_regular: pairing repair did not converge");
}

}  // namespace

Graph gen_regular(int n, int k, const WeightSpec& spec, uint64_t seed) {
    if (k >= n || k < 1) {
        throw std::invalid_argument("gen_regular: need 1 <= K < n");
    }
    if ((static_cast<long long>(n) * k) % 2 != 0) {
        throw std::invalid_argument("gen_regular: n*K must be even");
    }
    Rng rng(seed);
    Graph g = pair_and_repair(n, k, spec, rng);
    for (int v = 0; v < n; ++v) {
        if (static_cast<int>(g.neighbors(v).size()) != k) {
            throw std::logic_error("gen_regular: degree invariant violated");
        }
    }
    return g;
}

Graph gen_erdos_renyi(int n, double p, uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("gen_erdos_renyi: p must be in [0,1]");
    }
    if (n < 2) {
        throw std::invalid_argument("gen_erdos_renyi: need at least 2 nodes");
    }
    Graph g(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform01() < p) {
                g.add_edge(i, j, 1.0);
            }
        }
    }
    return g;
}

namespace {

std::string format_weight(double w) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    if (ec != std::errc()) {
        throw std::runtime_error("format_weight: conversion failed");
    }
    return std::string(buf, ptr);
}

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Graph parse_edge_list(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    long long n = -1, m = -1;
    auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            size_t start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos || line[start] == '#') {
                continue;
            }
            return true;
        }
        return false;
    };

    if (!next_content_line()) {
        parse_fail(origin, line_no, "missing header line \"n m\"");
    }
    {
        std::istringstream hdr(line);
        if (!(hdr >> n >> m) || n < 1 || m < 0) {
            parse_fail(origin, line_no, "malformed header, expected \"n m\"");
        }
        std::string extra;
        if (hdr >> extra) {
            parse_fail(origin, line_no, "trailing tokens after header");
        }
    }

    Graph g(static_cast<int>(n));
    std::set<std::pair<int, int>> seen;
    for (long long e = 0; e < m; ++e) {
        if (!next_content_line()) {
            parse_fail(origin, line_no, "expected " + std::to_string(m) + " edges, file ended early");
        }
        std::istringstream row(line);
        long long i, j;
        std::string wtok;
        if (!(row >> i >> j >> wtok)) {
            parse_fail(origin, line_no, "malformed edge line, expected \"i j w\"");
        }
        std::string extra;
        if (row >> extra) {
            parse_fail(origin, line_no, "trailing tokens after edge");
        }
        if (i < 0 || j < 0 || i >= n || j >= n) {
            parse_fail(origin, line_no, "node index out of range");
        }
        if (i >= j) {
            parse_fail(origin, line_no, "edges must satisfy i < j");
        }
        double w;
        auto* first = wtok.data();
        auto* last = wtok.data() + wtok.size();
        auto [ptr, ec] = std::from_chars(first, last, w);
        if (ec != std::errc() || ptr != last || !std::isfinite(w)) {
            parse_fail(origin, line_no, "malformed weight \"" + wtok + "\"");
        }
        if (!seen.insert({static_cast<int>(i), static_cast<int>(j)}).second) {
            parse_fail(origin, line_no, "duplicate edge");
        }
        g.add_edge(static_cast<int>(i), static_cast<int>(j), w);
    }
    if (next_content_line()) {
        parse_fail(origin, line_no, "unexpected content after last edge");
    }
    return g;
}

Graph read_edge_list(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(path + ": cannot open for reading");
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_edge_list(buf.str(), path);
}

std::string format_edge_list(const Graph& g) {
    std::vector<Edge> sorted = g.edges();
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    std::string out = std::to_string(g.num_nodes()) + " " + std::to_string(g.num_edges()) + "\n";
    for (const Edge& e : sorted) {
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_weight(e.w) + "\n";
    }
    return out;
}

void write_edge_list(const Graph& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    f << format_edge_list(g);
    if (!f) {
        throw std::runtime_error(path + ": write failed");
    }
}

}  // namespace cliffcut
