#pragma once

// Dense statevector simulator used only as an independent test oracle.
// Qubit q is bit q of the basis index. Rotations are assembled from the
// elementary gate decomposition
//   e^{i pi/4 Y_l Z_m} = S_l H_m CNOT_{l,m} Rx_l(-pi/2) CNOT_{l,m} S+_l H_m
// (rightmost factor first), deliberately not the Pauli-conjugation rule the
// tableau uses, so the two implementations share no logic.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cliffcut/tableau.hpp"

namespace cliffcut::testing {

class StateVector {
  public:
    using cplx = std::complex<double>;

    // |+>^n with qubit k flipped to |->: amplitude 2^{-n/2} * (-1)^{b_k}.
    static StateVector flipped_plus(int n, int k) {
        if (n < 1 || n > 20 || k < 0 || k >= n) {
            throw std::invalid_argument("flipped_plus: bad qubit count or index");
        }
        StateVector sv;
        sv.n_ = n;
        sv.amp_.assign(uint64_t{1} << n, cplx{0.0, 0.0});
        double scale = 1.0;
        for (int q = 0; q < n; ++q) {
            scale /= std::sqrt(2.0);
        }
        for (uint64_t b = 0; b < sv.amp_.size(); ++b) {
            sv.amp_[b] = cplx{((b >> k) & 1) ? -scale : scale, 0.0};
        }
        return sv;
    }

    int num_qubits() const { return n_; }
    cplx amplitude(uint64_t b) const { return amp_.at(b); }

    double norm2() const {
        double s = 0.0;
        for (const cplx& a : amp_) {
            s += std::norm(a);
        }
        return s;
    }

    void apply_h(int q) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for_pairs(q, [&](cplx& a0, cplx& a1) {
            cplx lo = (a0 + a1) * inv_sqrt2;
            cplx hi = (a0 - a1) * inv_sqrt2;
            a0 = lo;
            a1 = hi;
        });
    }

    void apply_s(int q, bool dagger) {
        cplx phase = dagger ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
        uint64_t mask = uint64_t{1} << q;
        for (uint64_t b = 0; b < amp_.size(); ++b) {
            if (b & mask) {
                amp_[b] *= phase;
            }
        }
    }

    // Rx(-pi/2) = (1/sqrt2) [[1, i], [i, 1]]
    void apply_rx_minus_half_pi(int q) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const cplx i{0.0, 1.0};
        for_pairs(q, [&](cplx& a0, cplx& a1) {
            cplx lo = (a0 + i * a1) * inv_sqrt2;
            cplx hi = (i * a0 + a1) * inv_sqrt2;
            a0 = lo;
            a1 = hi;
        });
    }

    void apply_cnot(int control, int target) {
        if (control == target) {
            throw std::invalid_argument("apply_cnot: control equals target");
        }
        uint64_t cmask = uint64_t{1} << control;
        uint64_t tmask = uint64_t{1} << target;
        for (uint64_t b = 0; b < amp_.size(); ++b) {
            if ((b & cmask) && !(b & tmask)) {
                std::swap(amp_[b], amp_[b | tmask]);
            }
        }
    }

    // e^{i pi/4 Y_l Z_m} via the elementary-gate decomposition.
    void apply_rotation_decomposed(int l, int m) {
        apply_h(m);
        apply_s(l, /*dagger=*/true);
        apply_cnot(l, m);
        apply_rx_minus_half_pi(l);
        apply_cnot(l, m);
        apply_h(m);
        apply_s(l, /*dagger=*/false);
    }

    // (I + i Y_l Z_m)/sqrt2 applied directly; cross-checks the decomposition.
    void apply_pauli_exponential(int l, int m) {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const cplx i{0.0, 1.0};
        std::vector<cplx> out(amp_.size());
        uint64_t lmask = uint64_t{1} << l;
        uint64_t mmask = uint64_t{1} << m;
        for (uint64_t b = 0; b < amp_.size(); ++b) {
            // Y_l Z_m |b> = phase |b ^ lmask>
            cplx phase = (b & lmask) ? -i : i;
            if (b & mmask) {
                phase = -phase;
            }
            out[b] += amp_[b];
            out[b ^ lmask] += i * phase * amp_[b];
        }
        for (uint64_t b = 0; b < amp_.size(); ++b) {
            amp_[b] = out[b] * inv_sqrt2;
        }
    }

    double expectation(const PauliString& p) const {
        if (p.num_qubits() != n_) {
            throw std::invalid_argument("expectation: qubit counts differ");
        }
        uint64_t xmask = 0;
        for (int q = 0; q < n_; ++q) {
            if (p.x_bit(q)) {
                xmask |= uint64_t{1} << q;
            }
        }
        cplx total{0.0, 0.0};
        for (uint64_t b = 0; b < amp_.size(); ++b) {
            cplx phase{static_cast<double>(p.sign()), 0.0};
            for (int q = 0; q < n_; ++q) {
                bool bit = (b >> q) & 1;
                char op = p.pauli_at(q);
                if (op == 'Y') {
                    phase *= bit ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
                } else if (op == 'Z' && bit) {
                    phase = -phase;
                }
            }
            total += std::conj(amp_[b ^ xmask]) * phase * amp_[b];
        }
        if (std::abs(total.imag()) > 1e-9) {
            throw std::logic_error("expectation: non-real value");
        }
        return total.real();
    }

  private:
    template <typename F>
    void for_pairs(int q, F&& f) {
        uint64_t mask = uint64_t{1} << q;
        for (uint64_t b = 0; b < amp_.size(); ++b) {
            if (!(b & mask)) {
                f(amp_[b], amp_[b | mask]);
            }
        }
    }

    int n_ = 0;
    std::vector<cplx> amp_;
};

}  // namespace cliffcut::testing
