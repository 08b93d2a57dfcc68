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
 * Analytic verification checks over the quantum core, as run by
 * `qds verify`. Each check returns a report instead of throwing.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qds/quantum_core.hpp"
#include "qds/random.hpp"

namespace qds {

enum class CheckName : std::uint8_t { CMin, CMax, Pauli, CostMatrix, B92 };

inline constexpr std::array<CheckName, 5> kAllChecks{CheckName::CMin, CheckName::CMax, CheckName::Pauli,
                                                     CheckName::CostMatrix, CheckName::B92};

constexpr std::string_view to_string(CheckName c) {
    switch (c) {
        case CheckName::CMin:
            return "cmin";
        case CheckName::CMax:
            return "cmax";
        case CheckName::Pauli:
            return "pauli";
        case CheckName::CostMatrix:
            return "costmatrix";
        case CheckName::B92:
            return "b92";
    }
    return "?";
}

inline std::optional<CheckName> parse_check_name(std::string_view s) {
    for (CheckName c : kAllChecks) {
        if (to_string(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

struct CheckReport {
    CheckName name = CheckName::CMin;
    bool passed = false;
    double value = 0.0;  ///< headline quantity of the check
    std::string detail;
};

inline constexpr std::size_t kRandomPovmSamples = 10'000;
inline constexpr std::uint64_t kCheckSeed = 0x51D5EEDULL;
inline constexpr std::array<double, 5> kMixingWeights{0.0, 0.25, 0.5, 0.75, 1.0};

/// Cost entry recomputed from the Born rule: the chance that an honest USE
/// of `sent` (fair basis coin) rules out `declared`.
inline double use_exclusion_probability(Bb84State sent, Bb84State declared) {
    // Ruling out `declared` means observing its conjugate, in declared's basis.
    return 0.5 * outcome_probability(QubitState::from(sent), conjugate_state(declared));
}

namespace detail {

inline CheckReport check_cmin() {
    CheckReport r;
    r.name = CheckName::CMin;
    std::ostringstream out;
    bool ok = true;
    double worst_gap = 0.0;
    for (double q : kMixingWeights) {
        const double c = expected_cost(min_cost_povm(q));
        worst_gap = std::max(worst_gap, std::abs(c - 0.125));
        ok = ok && std::abs(c - 0.125) <= kExactTolerance;
    }
    RandomStream rng(kCheckSeed);
    double lowest = 1.0;
    for (std::size_t i = 0; i < kRandomPovmSamples; ++i) {
        lowest = std::min(lowest, expected_cost(random_povm(4, rng)));
    }
    ok = ok && lowest >= 0.125 - 1e-9;
    r.passed = ok;
    r.value = expected_cost(min_cost_povm(0.5));
    out << "min-cost POVM cost = " << r.value << " (max deviation " << worst_gap << " over q in {0,.25,.5,.75,1}); "
        << "lowest cost over " << kRandomPovmSamples << " random POVMs = " << lowest;
    r.detail = out.str();
    return r;
}

inline CheckReport check_cmax() {
    CheckReport r;
    r.name = CheckName::CMax;
    std::ostringstream out;
    bool ok = true;
    double attained = 0.0;
    for (double q : kMixingWeights) {
        const double c = expected_cost(relabel_conjugate(min_cost_povm(q)));
        attained = std::max(attained, c);
        ok = ok && std::abs(c - 0.375) <= kExactTolerance;
    }
    RandomStream rng(kCheckSeed);
    double highest = 0.0;
    for (std::size_t i = 0; i < kRandomPovmSamples; ++i) {
        highest = std::max(highest, expected_cost(random_povm(4, rng)));
    }
    ok = ok && highest <= 0.375 + 1e-9;
    r.passed = ok;
    r.value = attained;
    out << "conjugate-relabelled min-cost POVM cost = " << attained << "; highest cost over " << kRandomPovmSamples
        << " random POVMs = " << highest;
    r.detail = out.str();
    return r;
}

inline CheckReport check_cost_matrix() {
    CheckReport r;
    r.name = CheckName::CostMatrix;
    static constexpr double expected[4][4] = {
        {0.0, 0.25, 0.5, 0.25},
        {0.25, 0.0, 0.25, 0.5},
        {0.5, 0.25, 0.0, 0.25},
        {0.25, 0.5, 0.25, 0.0},
    };
    const CostMatrix m = cost_matrix();
    bool exact = true;
    double born_gap = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            exact = exact && m.entries[i][j] == expected[i][j];
            born_gap = std::max(born_gap,
                                std::abs(m.entries[i][j] - use_exclusion_probability(kCostOrder[i], kCostOrder[j])));
        }
    }
    r.passed = exact && born_gap <= kExactTolerance;
    r.value = born_gap;
    r.detail = std::string(exact ? "all 16 entries match" : "entries differ") +
               "; max deviation from Born-rule derivation = " + std::to_string(born_gap);
    return r;
}

inline CheckReport check_pauli() {
    CheckReport r;
    r.name = CheckName::Pauli;
    bool ok = true;
    for (bool a : {false, true}) {
        for (bool b : {false, true}) {
            std::set<Bb84State> image;
            for (Bb84State s : kBb84States) {
                image.insert(pauli_correct(a, b, s));
                ok = ok && pauli_correct(a, b, pauli_correct(a, b, s)) == s;
                // The label must agree with the operator X^a Z^b applied to |s>.
                QubitState v = QubitState::from(s);
                if (b) {
                    v.one = -v.one;
                }
                if (a) {
                    std::swap(v.zero, v.one);
                }
                ok = ok && std::abs(outcome_probability(v, pauli_correct(a, b, s)) - 1.0) <= kExactTolerance;
            }
            ok = ok && image.size() == 4;
        }
    }
    r.passed = ok;
    r.value = ok ? 1.0 : 0.0;
    r.detail = ok ? "all four corrections X^a Z^b permute the BB84 set and are involutions"
                  : "a correction failed to act as an involutive permutation";
    return r;
}

inline CheckReport check_b92() {
    CheckReport r;
    r.name = CheckName::B92;
    const B92Table t = b92_counterexample();
    bool rows_ok = true;
    for (const auto &row : t.conditional) {
        double sum = 0.0;
        for (double p : row) {
            rows_ok = rows_ok && p >= 0.0;
            sum += p;
        }
        rows_ok = rows_ok && std::abs(sum - 1.0) <= kExactTolerance;
    }
    r.passed = rows_ok && t.p_both_wrong <= kExactTolerance &&
               std::abs(t.p_slot2_correct_given_slot1_wrong - 1.0) <= kExactTolerance;
    r.value = t.p_both_wrong;
    std::ostringstream out;
    out << "P(both slots wrong) = " << t.p_both_wrong
        << "; P(slot 2 correct | slot 1 wrong) = " << t.p_slot2_correct_given_slot1_wrong
        << (rows_ok ? "; table rows normalised" : "; table rows NOT normalised");
    r.detail = out.str();
    return r;
}

}  // namespace detail

inline CheckReport verify_check(CheckName name) {
    switch (name) {
        case CheckName::CMin:
            return detail::check_cmin();
        case CheckName::CMax:
            return detail::check_cmax();
        case CheckName::Pauli:
            return detail::check_pauli();
        case CheckName::CostMatrix:
            return detail::check_cost_matrix();
        case CheckName::B92:
            return detail::check_b92();
    }
    return {};
}

}  // namespace qds
