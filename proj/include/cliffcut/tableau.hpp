#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cliffcut/cut.hpp"
#include "cliffcut/graph.hpp"
#include "cliffcut/solution.hpp"

namespace cliffcut {

// Signed n-qubit Pauli operator in the symplectic bit representation:
// qubit q carries X iff x bit set, Z iff z bit set, Y iff both.
// Only real signs are representable; operations that would produce an
// imaginary overall phase are contract violations.
class PauliString {
  public:
    explicit PauliString(int n);

    // "(+|-)?[IXYZ]+", e.g. "-XIZY".
    static PauliString from_string(const std::string& s);
    // Single-site and two-site constructors.
    static PauliString single(int n, int qubit, char pauli, int sign = +1);
    static PauliString two(int n, int q1, char p1, int q2, char p2, int sign = +1);
    static PauliString all_x(int n, int sign = +1);

    int num_qubits() const { return n_; }
    int sign() const { return sign_; }
    void set_sign(int s);
    char pauli_at(int q) const;  // 'I','X','Y','Z'
    void set_pauli(int q, char p);
    bool x_bit(int q) const;
    bool z_bit(int q) const;
    int weight() const;
    bool is_identity() const;

    bool commutes_with(const PauliString& other) const;

    // this <- other * this, tracking the sign; the accumulated power of i
    // must come out even (callers multiply commuting operators, or fold the
    // rotation's explicit leading i via extra_i_power = 1).
    void left_mul(const PauliString& other, int extra_i_power = 0);

    std::string to_string() const;
    bool operator==(const PauliString&) const = default;

  private:
    int phase_exponent_with(const PauliString& other) const;

    int n_;
    int sign_;  // +1 or -1
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
};

// Builds the two-qubit rotation generator Y_{y_qubit} Z_{z_qubit} used by
// both the seeding gate (Y on the start node) and the growth gates (Y on
// the joining node, Z on the side's reference node).
PauliString rotation_pauli(int n, int y_qubit, int z_qubit);

// Stabilizer tableau: n commuting, independent signed Pauli generators.
class Tableau {
  public:
    // Generators X_l for l != k and -X_k: the uniform-superposition state
    // with a phase flip on basis states where qubit k is 1.
    static Tableau init_flipped_plus(int n, int k);

    int num_qubits() const { return n_; }
    const std::vector<PauliString>& rows() const { return rows_; }

    // Conjugates every generator by exp(i pi/4 P) for a two-qubit P of the
    // Y/Z form above: commuting rows unchanged, anticommuting rows -> i*P*row.
    void apply_rotation(const PauliString& p);

    // +1/-1 if +P/-P is in the stabilizer group (GF(2) elimination over the
    // generators with sign accumulation), 0 if P anticommutes with any
    // generator, i.e. the expectation value of P in the stabilized state.
    int expectation(const PauliString& p) const;

    // Commutation of all pairs and GF(2) independence of the rows.
    bool invariants_hold() const;

  private:
    Tableau(int n) : n_(n) {}
    int n_;
    std::vector<PauliString> rows_;
};

// Full pair gradient, evaluated from the tableau:
//   -sum over neighbors l of b of w_lb * <Z_l Z_a>   (the l = a term is 1)
// Matches the solver's cached side-difference gradient when a is the side
// reference node; used as the independent oracle.
double gradient_full(const Tableau& t, const Graph& g, int a, int b);

// Reads the bipartition out of an end-of-run tableau by anchoring node 0 and
// taking the sign of <Z_0 Z_i> for every other node. A zero expectation
// means the state does not encode a single bipartition (fewer than n-1
// independent ZZ members) and raises a malformed-state error.
CutAssignment extract_cut(const Tableau& t);

// Replays the solution's gate trace on a fresh tableau and checks that the
// extracted cut reproduces s.assignment (up to complement) and s.cut_value.
bool verify_solution(const Graph& g, const Solution& s, std::string* diagnostic = nullptr);

}  // namespace cliffcut
