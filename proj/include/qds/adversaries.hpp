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
 * Canonical dishonest strategies: a repudiating Alice and a forging Bob for
 * P1/P1' and P2. Each emits the same message types honest parties emit.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qds/protocols.hpp"
#include "qds/quantum_core.hpp"
#include "qds/random.hpp"

namespace qds {

enum class Role : std::uint8_t { Honest, RepudiateAlice, ForgeBob };

constexpr std::string_view to_string(Role r) {
    switch (r) {
        case Role::Honest:
            return "honest";
        case Role::RepudiateAlice:
            return "repudiate";
        case Role::ForgeBob:
            return "forge";
    }
    return "?";
}

struct AdversaryConfig {
    Role role = Role::Honest;
    /// Aimed per-recipient mismatch fraction for a repudiating P1 Alice.
    std::optional<double> target_fraction;
    /// Forging Bob learns Charlie's kept set before forwarding anything.
    bool knows_kept_set = true;

    double resolved_target(const ProtocolParams &params) const {
        return target_fraction.value_or(0.5 * (params.s_a + params.s_v));
    }
};

/// `count` distinct positions drawn uniformly from [0, length), ascending.
template <RandomBitStream Rng>
std::vector<std::size_t> choose_positions(std::size_t length, std::size_t count, Rng &rng) {
    count = std::min(count, length);
    std::vector<std::size_t> all(length);
    std::iota(all.begin(), all.end(), std::size_t{0});
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + uniform_index(rng, length - i);
        std::swap(all[i], all[j]);
    }
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

// ---------------------------------------------------------------------------
// Repudiation

struct P1Repudiation {
    P1Signature signature;
    P1Declaration declaration;
    std::vector<std::size_t> tampered;
};

/// Number of tampered positions for aimed fraction p: each tampered position
/// yields one expected mismatch across its two copies, so ceil(2 p L).
inline std::size_t p1_tamper_count(double target_fraction, std::size_t length) {
    return std::min(length, threshold_count(2.0 * target_fraction, length));
}

/// Alice sends honest identical copies, then declares a key whose tampered
/// positions carry the conjugate of the state she sent.
template <RandomBitStream Rng>
P1Repudiation repudiating_alice_p1(const ProtocolParams &params, const AdversaryConfig &config, Rng &rng,
                                   std::uint8_t message_bit = 0) {
    params.validate();
    if (!(params.s_a < params.s_v)) {
        throw std::invalid_argument("repudiating_alice_p1: requires s_a < s_v");
    }
    const double p = config.resolved_target(params);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("repudiating_alice_p1: target fraction must lie in [0, 1]");
    }
    P1Repudiation out;
    out.signature = p1_generate(params, rng);
    out.tampered = choose_positions(params.length, p1_tamper_count(p, params.length), rng);
    out.declaration.message_bit = message_bit;
    out.declaration.key = out.signature.private_key[message_bit];
    for (std::size_t l : out.tampered) {
        out.declaration.key[l] = conjugate_state(out.declaration.key[l]);
    }
    return out;
}

struct P2Repudiation {
    P2Signature signature;
    P2Declaration declaration;
    std::vector<std::size_t> flipped;
};

/// Agrees with PrivKeyB everywhere; flips R = ceil(s_v L) uniformly chosen bits of PrivKeyC.
template <RandomBitStream Rng>
P2Repudiation repudiating_alice_p2(const ProtocolParams &params, Rng &rng, std::uint8_t message_bit = 0) {
    P2Repudiation out;
    out.signature = p2_generate(params, rng);
    out.flipped = choose_positions(params.length, threshold_count(params.s_v, params.length), rng);
    out.declaration.message_bit = message_bit;
    out.declaration.key_b = out.signature.key_b[message_bit];
    out.declaration.key_c = out.signature.key_c[message_bit];
    for (std::size_t l : out.flipped) {
        out.declaration.key_c[l] ^= 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Forging

struct P1Forgery {
    /// State Bob sends Charlie at each position Charlie receives from him;
    /// nullopt where Bob sends nothing.
    std::vector<std::optional<Bb84State>> forwarded;
    P1Declaration declaration;
};

/// Bob measures each of his copies with the minimum-cost strategy and
/// declares the outcomes. Wherever `bob_forwards` is set, he hands Charlie a
/// fresh copy of his declared state, which can never be ruled out.
template <RandomBitStream Rng>
P1Forgery forge_p1_with_mask(const std::vector<Bb84State> &bob_copy, const std::vector<bool> &bob_forwards, Rng &rng,
                             std::uint8_t message_bit = 0) {
    if (bob_copy.size() != bob_forwards.size()) {
        throw std::invalid_argument("forging_bob_p1: copy and mask lengths differ");
    }
    P1Forgery out;
    out.declaration.message_bit = message_bit;
    out.declaration.key.resize(bob_copy.size());
    out.forwarded.resize(bob_copy.size());
    for (std::size_t l = 0; l < bob_copy.size(); ++l) {
        const Bb84State guess = optimal_forging_guess(bob_copy[l], rng);
        out.declaration.key[l] = guess;
        if (bob_forwards[l]) {
            out.forwarded[l] = guess;
        }
    }
    return out;
}

/// Worst case: Bob knows Charlie's kept set and forwards exactly at the
/// positions Charlie did not keep.
template <RandomBitStream Rng>
P1Forgery forging_bob_p1(const ProtocolParams &params, const std::vector<Bb84State> &bob_copy,
                         const std::vector<bool> &charlie_kept, Rng &rng, std::uint8_t message_bit = 0) {
    params.validate();
    if (bob_copy.size() != params.length || charlie_kept.size() != params.length) {
        throw std::invalid_argument("forging_bob_p1: inputs must have length L");
    }
    std::vector<bool> forwards(charlie_kept.size());
    for (std::size_t l = 0; l < charlie_kept.size(); ++l) {
        forwards[l] = !charlie_kept[l];
    }
    return forge_p1_with_mask(bob_copy, forwards, rng, message_bit);
}

/// What a forging P2 Bob sees for one message bit.
struct P2BobView {
    std::vector<std::uint8_t> key_b;
    /// PrivKeyC bits Charlie forwarded; nullopt where unknown.
    std::vector<std::optional<std::uint8_t>> known_c;
};

inline P2BobView p2_bob_view(const P2Signature &sig, const P2Ledger &bob, std::uint8_t message_bit) {
    P2BobView v;
    v.key_b = sig.key_b[message_bit];
    v.known_c.resize(sig.length());
    for (const auto &rec : bob.records[message_bit]) {
        if (rec.origin == Origin::ForwardedByPeer) {
            v.known_c[rec.position] = rec.value;
        }
    }
    return v;
}

/// Copies PrivKeyB and every known PrivKeyC bit, guesses the rest uniformly.
template <RandomBitStream Rng>
P2Declaration forging_bob_p2(const ProtocolParams &params, const P2BobView &view, Rng &rng,
                             std::uint8_t message_bit = 0) {
    params.validate();
    if (view.key_b.size() != params.length || view.known_c.size() != params.length) {
        throw std::invalid_argument("forging_bob_p2: view must have length L");
    }
    P2Declaration d;
    d.message_bit = message_bit;
    d.key_b = view.key_b;
    d.key_c.resize(params.length);
    for (std::size_t l = 0; l < params.length; ++l) {
        d.key_c[l] = view.known_c[l] ? *view.known_c[l] : static_cast<std::uint8_t>(coin(rng) ? 1 : 0);
    }
    return d;
}

/// One complete P1 or P1' distribution against a forging Bob, forging
/// message bit 0. For bit 1 Bob follows the honest coin, so every abort count
/// is real. Bob's ledger carries only his forwarding choices and counts.
struct P1ForgeryRun {
    P1Forgery forgery;
    P1Ledger bob;
    P1Ledger charlie;
    bool aborted = false;
};

template <RandomBitStream Rng>
P1ForgeryRun p1_forgery_run(const ProtocolParams &params, const AdversaryConfig &config, Protocol variant, Rng &rng) {
    if (variant == Protocol::P2) {
        throw std::invalid_argument("p1_forgery_run: variant must be P1 or P1'");
    }
    const P1Signature sig = p1_generate(params, rng);
    const std::size_t L = params.length;

    P1ForgeryRun run;
    run.bob.owner = Party::Bob;
    run.charlie.owner = Party::Charlie;
    for (std::size_t k = 0; k < 2; ++k) {
        run.charlie.forwarded[k] = draw_forward_mask(L, rng);
    }
    run.bob.forwarded[0] = config.knows_kept_set ? run.charlie.forwarded[0] : draw_forward_mask(L, rng);
    run.bob.forwarded[1] = draw_forward_mask(L, rng);
    run.forgery = forge_p1_with_mask(sig.private_key[0], run.bob.forwarded[0], rng, 0);

    for (std::uint8_t k = 0; k < 2; ++k) {
        run.bob.received_count[k] = count_set(run.charlie.forwarded[k]);
        run.charlie.received_count[k] = count_set(run.bob.forwarded[k]);
        auto &out = run.charlie.records[k];
        for (std::size_t l = 0; l < L; ++l) {
            const QubitState alice = QubitState::from(sig.private_key[k][l]);
            if (!run.charlie.forwarded[k][l]) {
                out.push_back({l, k, use_measure(alice, rng).excluded, Origin::DirectFromAlice});
            }
            if (!run.bob.forwarded[k][l]) {
                continue;
            }
            if (k == 1) {
                out.push_back({l, k, use_measure(alice, rng).excluded, Origin::ForwardedByPeer});
            } else if (variant == Protocol::P1) {
                const QubitState sent = QubitState::from(*run.forgery.forwarded[l]);
                out.push_back({l, k, use_measure(sent, rng).excluded, Origin::ForwardedByPeer});
            } else {
                // P1': Bob reports a classical outcome consistent with his declaration.
                out.push_back({l, k, conjugate_state(*run.forgery.forwarded[l]), Origin::ForwardedByPeer});
            }
        }
    }
    run.aborted = p1_aborted(run.bob, run.charlie, params);
    return run;
}

}  // namespace qds
