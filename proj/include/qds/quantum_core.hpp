// Copyright 2026 The qds-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exact single-qubit machinery for BB84 signature elements: states,
 * projective and unambiguous-state-elimination (USE) measurements, the
 * minimum-cost analysis for a forger holding one copy, Pauli corrections on
 * the BB84 set, and the two-copy B92 counterexample.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qds/random.hpp"

namespace qds {

enum class Basis : std::uint8_t { Z, X };

/// |0>, |1>, |+>, |->.
enum class Bb84State : std::uint8_t { Z0, Z1, XPlus, XMinus };

inline constexpr std::array<Bb84State, 4> kBb84States{Bb84State::Z0, Bb84State::Z1, Bb84State::XPlus,
                                                      Bb84State::XMinus};

inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kPovmTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-9;

constexpr Basis basis_of(Bb84State s) {
    return (s == Bb84State::Z0 || s == Bb84State::Z1) ? Basis::Z : Basis::X;
}

/// Orthogonal partner within the same basis.
constexpr Bb84State conjugate_state(Bb84State s) {
    switch (s) {
        case Bb84State::Z0:
            return Bb84State::Z1;
        case Bb84State::Z1:
            return Bb84State::Z0;
        case Bb84State::XPlus:
            return Bb84State::XMinus;
        case Bb84State::XMinus:
            return Bb84State::XPlus;
    }
    return s;
}

/// Eigenstate of `basis` with eigenvalue index `bit` (0 -> |0>,|+>; 1 -> |1>,|->).
constexpr Bb84State basis_state(Basis basis, bool bit) {
    if (basis == Basis::Z) {
        return bit ? Bb84State::Z1 : Bb84State::Z0;
    }
    return bit ? Bb84State::XMinus : Bb84State::XPlus;
}

constexpr std::string_view to_string(Bb84State s) {
    switch (s) {
        case Bb84State::Z0:
            return "0";
        case Bb84State::Z1:
            return "1";
        case Bb84State::XPlus:
            return "+";
        case Bb84State::XMinus:
            return "-";
    }
    return "?";
}

constexpr std::string_view to_string(Basis b) {
    return b == Basis::Z ? "Z" : "X";
}

template <RandomBitStream Rng>
Bb84State random_bb84_state(Rng &rng) {
    return kBb84States[uniform_index(rng, kBb84States.size())];
}

using Amplitude = std::complex<double>;

/// Pure qubit state in the computational basis. Global phase is irrelevant.
struct QubitState {
    Amplitude zero{1.0, 0.0};
    Amplitude one{0.0, 0.0};

    double norm_squared() const {
        return std::norm(zero) + std::norm(one);
    }

    static QubitState from(Bb84State s) {
        constexpr double h = 1.0 / std::numbers::sqrt2;
        switch (s) {
            case Bb84State::Z0:
                return {{1.0, 0.0}, {0.0, 0.0}};
            case Bb84State::Z1:
                return {{0.0, 0.0}, {1.0, 0.0}};
            case Bb84State::XPlus:
                return {{h, 0.0}, {h, 0.0}};
            case Bb84State::XMinus:
                return {{h, 0.0}, {-h, 0.0}};
        }
        return {};
    }

    /// Normalises (a, b); throws if both vanish.
    static QubitState normalized(Amplitude a, Amplitude b) {
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        if (n == 0.0) {
            throw std::invalid_argument("QubitState: zero vector cannot be normalised");
        }
        return {a / n, b / n};
    }
};

inline Amplitude inner_product(const QubitState &bra, const QubitState &ket) {
    return std::conj(bra.zero) * ket.zero + std::conj(bra.one) * ket.one;
}

inline void require_normalized(const QubitState &state) {
    if (std::abs(state.norm_squared() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("QubitState is not normalised (|a|^2+|b|^2 = " +
                                    std::to_string(state.norm_squared()) + ")");
    }
}

/// Born-rule probability |<declared|state>|^2, clamped to [0, 1].
inline double outcome_probability(const QubitState &state, Bb84State declared) {
    const double p = std::norm(inner_product(QubitState::from(declared), state));
    return std::clamp(p, 0.0, 1.0);
}

template <RandomBitStream Rng>
Bb84State measure_projective(const QubitState &state, Basis basis, Rng &rng) {
    require_normalized(state);
    const Bb84State first = basis_state(basis, false);
    const double p_first = outcome_probability(state, first) / state.norm_squared();
    return uniform01(rng) < p_first ? first : basis_state(basis, true);
}

struct UseOutcome {
    Basis basis;
    Bb84State outcome;
    Bb84State excluded;
};

/// Unambiguous state elimination: random basis, projective measurement, and
/// the conjugate of the outcome is ruled out.
template <RandomBitStream Rng>
UseOutcome use_measure(const QubitState &state, Rng &rng) {
    const Basis basis = coin(rng) ? Basis::X : Basis::Z;
    const Bb84State outcome = measure_projective(state, basis, rng);
    return {basis, outcome, conjugate_state(outcome)};
}

enum class Origin : std::uint8_t { DirectFromAlice, ForwardedByPeer };

/// One state a recipient ruled out at a signature position.
struct EliminationRecord {
    std::size_t position = 0;
    std::uint8_t message_bit = 0;
    Bb84State excluded = Bb84State::Z0;
    Origin origin = Origin::DirectFromAlice;

    friend bool operator==(const EliminationRecord &, const EliminationRecord &) = default;
};

// ---------------------------------------------------------------------------
// Minimum-cost measurement for a forger holding one copy.

/// Row/column index in the cost matrix; order is (|0>, |+>, |1>, |->).
constexpr std::size_t cost_index(Bb84State s) {
    switch (s) {
        case Bb84State::Z0:
            return 0;
        case Bb84State::XPlus:
            return 1;
        case Bb84State::Z1:
            return 2;
        case Bb84State::XMinus:
            return 3;
    }
    return 0;
}

inline constexpr std::array<Bb84State, 4> kCostOrder{Bb84State::Z0, Bb84State::XPlus, Bb84State::Z1,
                                                     Bb84State::XMinus};

/// Probability that an honest USE on the sent state rules out the declared
/// state. Rows: state sent; columns: state declared.
struct CostMatrix {
    std::array<std::array<double, 4>, 4> entries{};

    double operator()(Bb84State sent, Bb84State declared) const {
        return entries[cost_index(sent)][cost_index(declared)];
    }
};

inline CostMatrix cost_matrix() {
    return {{{
        {0.0, 0.25, 0.5, 0.25},
        {0.25, 0.0, 0.25, 0.5},
        {0.5, 0.25, 0.0, 0.25},
        {0.25, 0.5, 0.25, 0.0},
    }}};
}

using Matrix2 = Eigen::Matrix2cd;

inline Matrix2 projector(const QubitState &s) {
    Eigen::Vector2cd v(s.zero, s.one);
    return v * v.adjoint();
}

inline Matrix2 projector(Bb84State s) {
    return projector(QubitState::from(s));
}

struct PovmElement {
    Matrix2 op;
    Bb84State declares;
};

/// Measurement whose outcomes are labelled with the BB84 state declared on
/// that outcome. Several elements may share a label.
struct Povm {
    std::vector<PovmElement> elements;
};

/// Empty string if valid, otherwise the reason.
inline std::string povm_violation(const Povm &povm, double tol = kPovmTolerance) {
    if (povm.elements.empty()) {
        return "POVM has no elements";
    }
    Matrix2 sum = Matrix2::Zero();
    for (std::size_t i = 0; i < povm.elements.size(); ++i) {
        const Matrix2 &op = povm.elements[i].op;
        if ((op - op.adjoint()).cwiseAbs().maxCoeff() > tol) {
            return "element " + std::to_string(i) + " is not Hermitian";
        }
        Eigen::SelfAdjointEigenSolver<Matrix2> es(op);
        if (es.eigenvalues().minCoeff() < -tol) {
            return "element " + std::to_string(i) + " is not positive semidefinite";
        }
        sum += op;
    }
    if ((sum - Matrix2::Identity()).cwiseAbs().maxCoeff() > tol) {
        return "elements do not sum to the identity";
    }
    return {};
}

inline bool is_valid_povm(const Povm &povm, double tol = kPovmTolerance) {
    return povm_violation(povm, tol).empty();
}

/// Average mismatch cost over uniformly chosen BB84 inputs:
/// sum_{i,j} 1/4 C[i][label_j] Tr(Pi_j rho_i).
inline double expected_cost(const Povm &povm) {
    if (auto why = povm_violation(povm); !why.empty()) {
        throw std::invalid_argument("expected_cost: invalid POVM: " + why);
    }
    const CostMatrix costs = cost_matrix();
    double total = 0.0;
    for (Bb84State sent : kBb84States) {
        const QubitState psi = QubitState::from(sent);
        const Eigen::Vector2cd v(psi.zero, psi.one);
        for (const auto &e : povm.elements) {
            const double p = std::real(v.dot(e.op * v));
            total += 0.25 * costs(sent, e.declares) * p;
        }
    }
    return total;
}

/// {q|0><0|, (1-q)|+><+|, q|1><1|, (1-q)|-><-|}, each outcome declaring its own state.
inline Povm min_cost_povm(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("min_cost_povm: q must lie in [0, 1]");
    }
    Povm povm;
    povm.elements.push_back({q * projector(Bb84State::Z0), Bb84State::Z0});
    povm.elements.push_back({(1.0 - q) * projector(Bb84State::XPlus), Bb84State::XPlus});
    povm.elements.push_back({q * projector(Bb84State::Z1), Bb84State::Z1});
    povm.elements.push_back({(1.0 - q) * projector(Bb84State::XMinus), Bb84State::XMinus});
    return povm;
}

/// Same operators, every declaration replaced by its conjugate.
inline Povm relabel_conjugate(Povm povm) {
    for (auto &e : povm.elements) {
        e.declares = conjugate_state(e.declares);
    }
    return povm;
}

/// Random POVM: A_j = G_j G_j^dagger with complex Gaussian G_j, then
/// Pi_j = S^{-1/2} A_j S^{-1/2} with S = sum_j A_j. Labels uniform.
template <RandomBitStream Rng>
Povm random_povm(std::size_t num_elements, Rng &rng) {
    if (num_elements == 0) {
        throw std::invalid_argument("random_povm: need at least one element");
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Matrix2> raw(num_elements);
    Matrix2 sum = Matrix2::Zero();
    for (auto &a : raw) {
        Matrix2 g;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                g(r, c) = Amplitude(re, im);
            }
        }
        a = g * g.adjoint();
        sum += a;
    }
    const Matrix2 inv_sqrt = Eigen::SelfAdjointEigenSolver<Matrix2>(sum).operatorInverseSqrt();
    Povm povm;
    povm.elements.reserve(num_elements);
    for (const auto &a : raw) {
        Matrix2 op = inv_sqrt * a * inv_sqrt;
        op = 0.5 * (op + op.adjoint()).eval();
        povm.elements.push_back({op, random_bb84_state(rng)});
    }
    return povm;
}

/// Forger's individual strategy on its own copy: random basis, declare the outcome.
template <RandomBitStream Rng>
Bb84State optimal_forging_guess(Bb84State copy_state, Rng &rng) {
    const Basis basis = coin(rng) ? Basis::X : Basis::Z;
    return measure_projective(QubitState::from(copy_state), basis, rng);
}

// ---------------------------------------------------------------------------
// Pauli corrections.

/// Label of X^a Z^b |s> up to global phase.
constexpr Bb84State pauli_correct(bool a, bool b, Bb84State s) {
    if (b && basis_of(s) == Basis::X) {
        s = conjugate_state(s);
    }
    if (a && basis_of(s) == Basis::Z) {
        s = conjugate_state(s);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Two-qubit states and the B92 counterexample.

/// Amplitudes over |00>, |01>, |10>, |11>.
struct TwoQubitState {
    std::array<Amplitude, 4> amplitudes{};

    double norm_squared() const {
        double n = 0.0;
        for (const auto &a : amplitudes) {
            n += std::norm(a);
        }
        return n;
    }

    static TwoQubitState product(const QubitState &first, const QubitState &second) {
        return {{first.zero * second.zero, first.zero * second.one, first.one * second.zero,
                 first.one * second.one}};
    }

    static TwoQubitState product(Bb84State first, Bb84State second) {
        return product(QubitState::from(first), QubitState::from(second));
    }

    TwoQubitState operator+(const TwoQubitState &o) const {
        TwoQubitState r;
        for (std::size_t i = 0; i < 4; ++i) {
            r.amplitudes[i] = amplitudes[i] + o.amplitudes[i];
        }
        return r;
    }

    TwoQubitState operator*(double k) const {
        TwoQubitState r;
        for (std::size_t i = 0; i < 4; ++i) {
            r.amplitudes[i] = amplitudes[i] * k;
        }
        return r;
    }
};

inline Amplitude inner_product(const TwoQubitState &bra, const TwoQubitState &ket) {
    Amplitude s{};
    for (std::size_t i = 0; i < 4; ++i) {
        s += std::conj(bra.amplitudes[i]) * ket.amplitudes[i];
    }
    return s;
}

struct B92Pair {
    Bb84State first;
    Bb84State second;

    friend bool operator==(const B92Pair &, const B92Pair &) = default;
};

/// Joint Born-rule table for Bob's entangled measurement on two B92 copies.
struct B92Table {
    /// Alice's pairs (rows), in the order |00>, |0+>, |+0>, |++>.
    std::array<B92Pair, 4> alice_pairs{};
    /// Declarations attached to the measurement outcomes (columns):
    /// phi_{++}, phi_{+0}, phi_{0+}, phi_{00}.
    std::array<B92Pair, 4> declarations{};
    /// joint[a][o] = P(Alice sent pair a, Bob obtained outcome o).
    std::array<std::array<double, 4>, 4> joint{};
    /// conditional[a][o] = P(outcome o | Alice sent pair a).
    std::array<std::array<double, 4>, 4> conditional{};
    double p_slot1_wrong = 0.0;
    double p_both_wrong = 0.0;
    double p_slot2_correct_given_slot1_wrong = 0.0;
};

/// Measurement basis phi_{++}, phi_{+0}, phi_{0+}, phi_{00}.
inline std::array<TwoQubitState, 4> b92_measurement_basis() {
    using S = Bb84State;
    const double h = 1.0 / std::numbers::sqrt2;
    auto pair = [](S a, S b) { return TwoQubitState::product(a, b); };
    return {
        (pair(S::Z0, S::Z1) + pair(S::Z1, S::Z0)) * h,
        (pair(S::Z0, S::XMinus) + pair(S::Z1, S::XPlus)) * h,
        (pair(S::XPlus, S::Z1) + pair(S::XMinus, S::Z0)) * h,
        (pair(S::XPlus, S::XMinus) + pair(S::XMinus, S::XPlus)) * h,
    };
}

inline B92Table b92_counterexample() {
    using S = Bb84State;
    B92Table t;
    t.alice_pairs = {B92Pair{S::Z0, S::Z0}, B92Pair{S::Z0, S::XPlus}, B92Pair{S::XPlus, S::Z0},
                     B92Pair{S::XPlus, S::XPlus}};
    t.declarations = {B92Pair{S::XPlus, S::XPlus}, B92Pair{S::XPlus, S::Z0}, B92Pair{S::Z0, S::XPlus},
                      B92Pair{S::Z0, S::Z0}};
    const auto basis = b92_measurement_basis();

    double slot1_wrong_slot2_right = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        const auto sent = TwoQubitState::product(t.alice_pairs[a].first, t.alice_pairs[a].second);
        for (std::size_t o = 0; o < 4; ++o) {
            const double p = std::norm(inner_product(basis[o], sent));
            t.conditional[a][o] = p;
            t.joint[a][o] = 0.25 * p;
            const bool wrong1 = t.declarations[o].first != t.alice_pairs[a].first;
            const bool wrong2 = t.declarations[o].second != t.alice_pairs[a].second;
            if (wrong1) {
                t.p_slot1_wrong += t.joint[a][o];
                if (wrong2) {
                    t.p_both_wrong += t.joint[a][o];
                } else {
                    slot1_wrong_slot2_right += t.joint[a][o];
                }
            }
        }
    }
    t.p_slot2_correct_given_slot1_wrong =
        t.p_slot1_wrong > 0.0 ? slot1_wrong_slot2_right / t.p_slot1_wrong : 0.0;
    return t;
}

}  // namespace qds
