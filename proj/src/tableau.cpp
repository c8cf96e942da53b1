#include "cliffcut/tableau.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cliffcut {

namespace {

constexpr size_t word_count(int n) {
    return (static_cast<size_t>(n) + 63) / 64;
}

// Exponent of i in sigma_p * sigma_q = i^t sigma_{p xor q}, with paulis
// encoded as (x, z) bit pairs.
int site_phase(bool px, bool pz, bool qx, bool qz) {
    if ((!px && !pz) || (!qx && !qz)) {
        return 0;
    }
    if (px == qx && pz == qz) {
        return 0;
    }
    // The cyclic products XY=iZ, YZ=iX, ZX=iY have exponent 1, the reversed
    // orders exponent 3.
    int p = px ? (pz ? 2 : 1) : 3;  // X=1, Y=2, Z=3
    int q = qx ? (qz ? 2 : 1) : 3;
    return (q - p + 3) % 3 == 1 ? 1 : 3;
}

}  // namespace

PauliString::PauliString(int n) : n_(n), sign_(+1), x_(word_count(n), 0), z_(word_count(n), 0) {
    if (n < 1) {
        throw std::invalid_argument("PauliString: need at least 1 qubit");
    }
}

PauliString PauliString::from_string(const std::string& s) {
    size_t at = 0;
    int sign = +1;
    if (at < s.size() && (s[at] == '+' || s[at] == '-')) {
        sign = s[at] == '-' ? -1 : +1;
        ++at;
    }
    if (at == s.size()) {
        throw std::invalid_argument("PauliString: empty pauli body");
    }
    PauliString p(static_cast<int>(s.size() - at));
    p.sign_ = sign;
    for (int q = 0; at < s.size(); ++q, ++at) {
        p.set_pauli(q, s[at]);
    }
    return p;
}

PauliString PauliString::single(int n, int qubit, char pauli, int sign) {
    PauliString p(n);
    p.set_pauli(qubit, pauli);
    p.set_sign(sign);
    return p;
}

PauliString PauliString::two(int n, int q1, char p1, int q2, char p2, int sign) {
    if (q1 == q2) {
        throw std::invalid_argument("PauliString::two: qubits must differ");
    }
    PauliString p(n);
    p.set_pauli(q1, p1);
    p.set_pauli(q2, p2);
    p.set_sign(sign);
    return p;
}

PauliString PauliString::all_x(int n, int sign) {
    PauliString p(n);
    for (int q = 0; q < n; ++q) {
        p.set_pauli(q, 'X');
    }
    p.set_sign(sign);
    return p;
}

void PauliString::set_sign(int s) {
    if (s != 1 && s != -1) {
        throw std::invalid_argument("PauliString: sign must be +1 or -1");
    }
    sign_ = s;
}

bool PauliString::x_bit(int q) const {
    return (x_[static_cast<size_t>(q) / 64] >> (q % 64)) & 1;
}

bool PauliString::z_bit(int q) const {
    return (z_[static_cast<size_t>(q) / 64] >> (q % 64)) & 1;
}

char PauliString::pauli_at(int q) const {
    bool x = x_bit(q);
    bool z = z_bit(q);
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

void PauliString::set_pauli(int q, char p) {
    if (q < 0 || q >= n_) {
        throw std::invalid_argument("PauliString: qubit out of range");
    }
    uint64_t mask = 1ull << (q % 64);
    size_t w = static_cast<size_t>(q) / 64;
    x_[w] &= ~mask;
    z_[w] &= ~mask;
    switch (p) {
        case 'I':
            break;
        case 'X':
            x_[w] |= mask;
            break;
        case 'Y':
            x_[w] |= mask;
            z_[w] |= mask;
            break;
        case 'Z':
            z_[w] |= mask;
            break;
        default:
            throw std::invalid_argument("PauliString: pauli must be one of IXYZ");
    }
}

int PauliString::weight() const {
    int count = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
        count += __builtin_popcountll(x_[w] | z_[w]);
    }
    return count;
}

bool PauliString::is_identity() const {
    for (size_t w = 0; w < x_.size(); ++w) {
        if (x_[w] | z_[w]) {
            return false;
        }
    }
    return true;
}

bool PauliString::commutes_with(const PauliString& other) const {
    if (n_ != other.n_) {
        throw std::invalid_argument("commutes_with: qubit counts differ");
    }
    uint64_t parity = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
        parity ^= (x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w]);
    }
    return (__builtin_popcountll(parity) & 1) == 0;
}

int PauliString::phase_exponent_with(const PauliString& other) const {
    int t = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
        uint64_t support = (other.x_[w] | other.z_[w]) & (x_[w] | z_[w]);
        while (support) {
            int bit = __builtin_ctzll(support);
            support &= support - 1;
            int q = static_cast<int>(w * 64) + bit;
            t += site_phase(other.x_bit(q), other.z_bit(q), x_bit(q), z_bit(q));
        }
    }
    return t & 3;
}

void PauliString::left_mul(const PauliString& other, int extra_i_power) {
    if (n_ != other.n_) {
        throw std::invalid_argument("left_mul: qubit counts differ");
    }
    int t = (phase_exponent_with(other) + extra_i_power) & 3;
    if (t & 1) {
        throw std::logic_error("left_mul: product has imaginary phase");
    }
    if (t == 2) {
        sign_ = -sign_;
    }
    sign_ *= other.sign_;
    for (size_t w = 0; w < x_.size(); ++w) {
        x_[w] ^= other.x_[w];
        z_[w] ^= other.z_[w];
    }
}

std::string PauliString::to_string() const {
    std::string s(sign_ < 0 ? "-" : "+");
    for (int q = 0; q < n_; ++q) {
        s += pauli_at(q);
    }
    return s;
}

PauliString rotation_pauli(int n, int y_qubit, int z_qubit) {
    return PauliString::two(n, y_qubit, 'Y', z_qubit, 'Z');
}

Tableau Tableau::init_flipped_plus(int n, int k) {
    if (n < 1 || k < 0 || k >= n) {
        throw std::invalid_argument("init_flipped_plus: bad qubit count or index");
    }
    Tableau t(n);
    t.rows_.reserve(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) {
        t.rows_.push_back(PauliString::single(n, q, 'X', q == k ? -1 : +1));
    }
    return t;
}

void Tableau::apply_rotation(const PauliString& p) {
    if (p.num_qubits() != n_ || p.weight() != 2 || p.sign() != +1) {
        throw std::invalid_argument("apply_rotation: generator must be a +sign weight-2 pauli");
    }
    int y_count = 0, z_count = 0;
    for (int q = 0; q < n_; ++q) {
        char c = p.pauli_at(q);
        if (c == 'Y') {
            ++y_count;
        } else if (c == 'Z') {
            ++z_count;
        } else if (c == 'X') {
            throw std::invalid_argument("apply_rotation: generator must be of Y/Z form");
        }
    }
    if (y_count != 1 || z_count != 1) {
        throw std::invalid_argument("apply_rotation: generator must be of Y/Z form");
    }
    for (PauliString& row : rows_) {
        if (!row.commutes_with(p)) {
            // exp(i pi/4 P) Q exp(-i pi/4 P) = i P Q for anticommuting Q.
            row.left_mul(p, 1);
        }
    }
    assert(invariants_hold());
}

int Tableau::expectation(const PauliString& p) const {
    if (p.num_qubits() != n_) {
        throw std::invalid_argument("expectation: qubit counts differ");
    }
    if (p.is_identity()) {
        return p.sign();
    }
    for (const PauliString& row : rows_) {
        if (!row.commutes_with(p)) {
            return 0;
        }
    }
    // P commutes with the whole group; for a rank-n tableau the group is its
    // own symplectic centralizer, so +-P is a member. Reduce the unsigned
    // part of P by echelonized generators, accumulating signs; the residual
    // sign is the expectation of the unsigned pauli.
    std::vector<PauliString> rows = rows_;
    PauliString target = p;
    target.set_sign(+1);
    size_t pivot = 0;
    for (int col = 0; col < 2 * n_ && pivot < rows.size(); ++col) {
        int q = col % n_;
        bool want_x = col < n_;
        auto bit = [&](const PauliString& r) { return want_x ? r.x_bit(q) : r.z_bit(q); };
        size_t found = pivot;
        while (found < rows.size() && !bit(rows[found])) {
            ++found;
        }
        if (found == rows.size()) {
            continue;
        }
        std::swap(rows[pivot], rows[found]);
        for (size_t r = pivot + 1; r < rows.size(); ++r) {
            if (bit(rows[r])) {
                rows[r].left_mul(rows[pivot]);
            }
        }
        if (bit(target)) {
            target.left_mul(rows[pivot]);
        }
        ++pivot;
    }
    if (!target.is_identity()) {
        return 0;
    }
    return p.sign() * target.sign();
}

bool Tableau::invariants_hold() const {
    for (size_t i = 0; i < rows_.size(); ++i) {
        for (size_t j = i + 1; j < rows_.size(); ++j) {
            if (!rows_[i].commutes_with(rows_[j])) {
                return false;
            }
        }
    }
    // GF(2) rank of the stacked (x|z) rows must be n.
    std::vector<PauliString> rows = rows_;
    size_t pivot = 0;
    for (int col = 0; col < 2 * n_ && pivot < rows.size(); ++col) {
        int q = col % n_;
        bool want_x = col < n_;
        auto bit = [&](const PauliString& r) { return want_x ? r.x_bit(q) : r.z_bit(q); };
        size_t found = pivot;
        while (found < rows.size() && !bit(rows[found])) {
            ++found;
        }
        if (found == rows.size()) {
            continue;
        }
        std::swap(rows[pivot], rows[found]);
        for (size_t r = pivot + 1; r < rows.size(); ++r) {
            if (bit(rows[r])) {
                rows[r].left_mul(rows[pivot]);
            }
        }
        ++pivot;
    }
    return pivot == rows.size();
}

double gradient_full(const Tableau& t, const Graph& g, int a, int b) {
    if (g.num_nodes() != t.num_qubits()) {
        throw std::invalid_argument("gradient_full: graph and tableau sizes differ");
    }
    double sum = 0.0;
    for (const auto& [l, w] : g.neighbors(b)) {
        if (l == a) {
            sum += w;  // Z_a Z_a = identity, expectation +1
        } else {
            int e = t.expectation(PauliString::two(t.num_qubits(), l, 'Z', a, 'Z'));
            if (e != 0) {
                sum += w * e;
            }
        }
    }
    return -sum;
}

CutAssignment extract_cut(const Tableau& t) {
    int n = t.num_qubits();
    CutAssignment z(static_cast<size_t>(n));
    z.bits[0] = 1;  // anchor: node 0 on side A (spin +1)
    for (int i = 1; i < n; ++i) {
        int e = t.expectation(PauliString::two(n, 0, 'Z', i, 'Z'));
        if (e == 0) {
            throw std::runtime_error(
                "extract_cut: malformed state, node " + std::to_string(i) +
                " is not ZZ-correlated with node 0 (fewer than n-1 independent ZZ members)");
        }
        z.bits[static_cast<size_t>(i)] = e > 0 ? 1 : 0;
    }
    return z;
}

bool verify_solution(const Graph& g, const Solution& s, std::string* diagnostic) {
    auto fail = [&](const std::string& why) {
        if (diagnostic) {
            *diagnostic = why;
        }
        return false;
    };
    int n = g.num_nodes();
    if (n < 2) {
        return fail("graph has fewer than 2 nodes");
    }
    if (static_cast<int>(s.gate_trace.size()) != n - 1) {
        return fail("gate_trace must have exactly n-1 entries, got " +
                    std::to_string(s.gate_trace.size()));
    }
    if (s.start_node < 0 || s.start_node >= n) {
        return fail("start_node out of range");
    }
    if (s.gate_trace[0].side != Side::j) {
        return fail("first gate_trace entry must attach the reference node to side j");
    }
    if (s.assignment.size() != static_cast<size_t>(n)) {
        return fail("assignment length does not match the graph");
    }

    int k = s.start_node;
    int j = s.gate_trace[0].node;
    if (j == k || j < 0 || j >= n) {
        return fail("reference node invalid");
    }

    std::vector<uint8_t> placed(static_cast<size_t>(n), 0);
    placed[static_cast<size_t>(k)] = 1;
    placed[static_cast<size_t>(j)] = 1;

    Tableau t = Tableau::init_flipped_plus(n, k);
    // Seeding gate: Y on the start node, Z on the reference node.
    t.apply_rotation(rotation_pauli(n, k, j));
    for (size_t i = 1; i < s.gate_trace.size(); ++i) {
        const GateRecord& r = s.gate_trace[i];
        if (r.node < 0 || r.node >= n || placed[static_cast<size_t>(r.node)]) {
            return fail("gate_trace entry " + std::to_string(i) + " names a node already placed");
        }
        placed[static_cast<size_t>(r.node)] = 1;
        int ref = r.side == Side::k ? k : j;
        // Growth gate: Y on the joining node, Z on the side's reference.
        t.apply_rotation(rotation_pauli(n, r.node, ref));
    }

    CutAssignment extracted;
    try {
        extracted = extract_cut(t);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    if (extracted != s.assignment && extracted != s.assignment.complement()) {
        std::string why = "extracted assignment " + extracted.to_string() +
                          " differs from solution " + s.assignment.to_string();
        for (size_t i = 0; i < extracted.bits.size(); ++i) {
            if ((extracted.bits[i] == s.assignment.bits[i]) !=
                (extracted.bits[0] == s.assignment.bits[0])) {
                why += " (first differing node " + std::to_string(i) + ")";
                break;
            }
        }
        return fail(why);
    }
    double replay_cut = cut_value(g, extracted);
    if (std::abs(replay_cut - s.cut_value) > 1e-9) {
        return fail("cut value mismatch: replay " + std::to_string(replay_cut) +
                    " vs solution " + std::to_string(s.cut_value));
    }
    return true;
}

}  // namespace cliffcut
