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
 * Distribution and messaging stages of the three signature protocols:
 * P1 (recipients exchange qubits, then measure), P1' (recipients measure,
 * then exchange classical outcomes over a secure channel) and P2 (classical
 * shared keys exchanged between recipients).
 *
 * Channels are ideal. Every ledger holds only the records its owner may use:
 * elements a recipient forwarded are gone from his own checks.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qds/quantum_core.hpp"
#include "qds/random.hpp"

namespace qds {

enum class Protocol : std::uint8_t { P1, P1Prime, P2 };

constexpr std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::P1:
            return "p1";
        case Protocol::P1Prime:
            return "p1prime";
        case Protocol::P2:
            return "p2";
    }
    return "?";
}

enum class Party : std::uint8_t { Bob, Charlie };

/// Slack used when turning real thresholds into integer counts.
inline constexpr double kCountSlack = 1e-9;

struct ProtocolParams {
    std::size_t length = 0;  ///< L, signature elements per message bit.
    double s_a = 0.0;        ///< authentication threshold
    double s_v = 0.0;        ///< verification threshold
    double r = 0.0;          ///< abort half-width

    std::string violation() const {
        if (length < 1) {
            return "length must be at least 1";
        }
        if (!(s_a >= 0.0 && s_a < 1.0)) {
            return "s_a must lie in [0, 1)";
        }
        if (!(s_v > 0.0 && s_v < 1.0)) {
            return "s_v must lie in (0, 1)";
        }
        if (!(s_a < s_v)) {
            return "s_a must be smaller than s_v";
        }
        if (!(r >= 0.0 && r < 0.5)) {
            return "r must lie in [0, 1/2)";
        }
        return {};
    }

    void validate() const {
        if (auto why = violation(); !why.empty()) {
            throw std::invalid_argument("ProtocolParams: " + why);
        }
    }
};

/// Inclusive range of accepted forwarded-element counts.
struct AbortBand {
    std::size_t low = 0;
    std::size_t high = 0;

    bool contains(std::size_t count) const {
        return count >= low && count <= high;
    }
};

inline AbortBand abort_band(std::size_t length, double r) {
    const double L = static_cast<double>(length);
    const double lo = std::ceil(L * (0.5 - r) - kCountSlack);
    const double hi = std::floor(L * (0.5 + r) + kCountSlack);
    return {static_cast<std::size_t>(std::max(lo, 0.0)), static_cast<std::size_t>(std::max(hi, 0.0))};
}

/// Accept iff mismatches < fraction * L; a zero fraction means "no mismatches".
inline bool below_threshold(std::size_t mismatches, double fraction, std::size_t length) {
    if (fraction == 0.0) {
        return mismatches == 0;
    }
    return static_cast<double>(mismatches) < fraction * static_cast<double>(length);
}

/// Smallest integer count >= fraction * L.
inline std::size_t threshold_count(double fraction, std::size_t length) {
    const double x = std::ceil(fraction * static_cast<double>(length) - kCountSlack);
    return static_cast<std::size_t>(std::max(x, 0.0));
}

enum class Decision : std::uint8_t { Accept, Reject };

struct Verdict {
    Decision decision = Decision::Reject;
    std::size_t mismatch_count = 0;
    std::size_t records_checked = 0;

    bool accepted() const {
        return decision == Decision::Accept;
    }
};

struct MismatchCount {
    std::size_t mismatches = 0;
    std::size_t checked = 0;
};

template <RandomBitStream Rng>
std::vector<bool> draw_forward_mask(std::size_t length, Rng &rng) {
    std::vector<bool> mask(length);
    for (std::size_t l = 0; l < length; ++l) {
        mask[l] = coin(rng);
    }
    return mask;
}

inline std::size_t count_set(const std::vector<bool> &mask) {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

// ---------------------------------------------------------------------------
// P1 and P1'

/// Private keys (state labels) for both message bits.
struct P1Signature {
    std::array<std::vector<Bb84State>, 2> private_key;

    std::size_t length() const {
        return private_key[0].size();
    }
};

/// Per-recipient states Alice actually transmits, per message bit. An honest
/// Alice sends identical copies of her private key.
struct AliceTransmission {
    std::array<std::vector<QubitState>, 2> to_bob;
    std::array<std::vector<QubitState>, 2> to_charlie;
};

inline AliceTransmission honest_transmission(const P1Signature &sig) {
    AliceTransmission t;
    for (std::size_t k = 0; k < 2; ++k) {
        for (Bb84State s : sig.private_key[k]) {
            t.to_bob[k].push_back(QubitState::from(s));
        }
        t.to_charlie[k] = t.to_bob[k];
    }
    return t;
}

struct P1Ledger {
    Party owner = Party::Bob;
    /// Eliminated signature per message bit; a position may appear twice.
    std::array<std::vector<EliminationRecord>, 2> records;
    /// forwarded[k][l]: the owner's own element l went to the peer.
    std::array<std::vector<bool>, 2> forwarded;
    std::array<std::size_t, 2> received_count{0, 0};

    std::size_t kept_count(std::size_t k) const {
        return forwarded[k].size() - count_set(forwarded[k]);
    }
};

struct P1Declaration {
    std::uint8_t message_bit = 0;
    std::vector<Bb84State> key;
};

struct P1Distribution {
    P1Ledger bob;
    P1Ledger charlie;
    bool aborted = false;
};

template <RandomBitStream Rng>
P1Signature p1_generate(const ProtocolParams &params, Rng &rng) {
    params.validate();
    P1Signature sig;
    for (auto &key : sig.private_key) {
        key.resize(params.length);
        for (auto &s : key) {
            s = random_bb84_state(rng);
        }
    }
    return sig;
}

inline bool p1_aborted(const P1Ledger &bob, const P1Ledger &charlie, const ProtocolParams &params) {
    const AbortBand band = abort_band(params.length, params.r);
    for (std::size_t k = 0; k < 2; ++k) {
        if (!band.contains(bob.received_count[k]) || !band.contains(charlie.received_count[k])) {
            return true;
        }
    }
    return false;
}

inline void check_transmission(const AliceTransmission &t, std::size_t length) {
    for (std::size_t k = 0; k < 2; ++k) {
        if (t.to_bob[k].size() != length || t.to_charlie[k].size() != length) {
            throw std::invalid_argument("AliceTransmission: every state list must have length L");
        }
    }
}

/// P1: each recipient decides per element to keep or forward it, then
/// USE-measures everything he holds.
template <RandomBitStream Rng>
P1Distribution p1_distribute(const AliceTransmission &sent, const ProtocolParams &params, Rng &rng) {
    params.validate();
    const std::size_t L = params.length;
    check_transmission(sent, L);

    P1Distribution d;
    d.bob.owner = Party::Bob;
    d.charlie.owner = Party::Charlie;
    for (std::uint8_t k = 0; k < 2; ++k) {
        d.bob.forwarded[k] = draw_forward_mask(L, rng);
        d.charlie.forwarded[k] = draw_forward_mask(L, rng);
        d.bob.received_count[k] = count_set(d.charlie.forwarded[k]);
        d.charlie.received_count[k] = count_set(d.bob.forwarded[k]);

        auto measure_held = [&](P1Ledger &self, const P1Ledger &peer, const std::vector<QubitState> &own_copy,
                                const std::vector<QubitState> &peer_copy) {
            auto &out = self.records[k];
            out.reserve(L + L / 4);
            for (std::size_t l = 0; l < L; ++l) {
                if (!self.forwarded[k][l]) {
                    out.push_back({l, k, use_measure(own_copy[l], rng).excluded, Origin::DirectFromAlice});
                }
                if (peer.forwarded[k][l]) {
                    out.push_back({l, k, use_measure(peer_copy[l], rng).excluded, Origin::ForwardedByPeer});
                }
            }
        };
        measure_held(d.bob, d.charlie, sent.to_bob[k], sent.to_charlie[k]);
        measure_held(d.charlie, d.bob, sent.to_charlie[k], sent.to_bob[k]);
    }
    d.aborted = p1_aborted(d.bob, d.charlie, params);
    return d;
}

template <RandomBitStream Rng>
P1Distribution p1_distribute(const P1Signature &sig, const ProtocolParams &params, Rng &rng) {
    return p1_distribute(honest_transmission(sig), params, rng);
}

/// P1': each recipient USE-measures his whole copy on arrival, then decides
/// per element to keep the outcome or hand it to the peer over a secure
/// classical channel.
template <RandomBitStream Rng>
P1Distribution p1prime_distribute(const AliceTransmission &sent, const ProtocolParams &params, Rng &rng) {
    params.validate();
    const std::size_t L = params.length;
    check_transmission(sent, L);

    P1Distribution d;
    d.bob.owner = Party::Bob;
    d.charlie.owner = Party::Charlie;
    for (std::uint8_t k = 0; k < 2; ++k) {
        std::vector<Bb84State> bob_excluded(L), charlie_excluded(L);
        for (std::size_t l = 0; l < L; ++l) {
            bob_excluded[l] = use_measure(sent.to_bob[k][l], rng).excluded;
        }
        for (std::size_t l = 0; l < L; ++l) {
            charlie_excluded[l] = use_measure(sent.to_charlie[k][l], rng).excluded;
        }
        d.bob.forwarded[k] = draw_forward_mask(L, rng);
        d.charlie.forwarded[k] = draw_forward_mask(L, rng);
        d.bob.received_count[k] = count_set(d.charlie.forwarded[k]);
        d.charlie.received_count[k] = count_set(d.bob.forwarded[k]);

        auto collect = [&](P1Ledger &self, const P1Ledger &peer, const std::vector<Bb84State> &own,
                           const std::vector<Bb84State> &from_peer) {
            auto &out = self.records[k];
            out.reserve(L + L / 4);
            for (std::size_t l = 0; l < L; ++l) {
                if (!self.forwarded[k][l]) {
                    out.push_back({l, k, own[l], Origin::DirectFromAlice});
                }
                if (peer.forwarded[k][l]) {
                    out.push_back({l, k, from_peer[l], Origin::ForwardedByPeer});
                }
            }
        };
        collect(d.bob, d.charlie, bob_excluded, charlie_excluded);
        collect(d.charlie, d.bob, charlie_excluded, bob_excluded);
    }
    d.aborted = p1_aborted(d.bob, d.charlie, params);
    return d;
}

template <RandomBitStream Rng>
P1Distribution p1prime_distribute(const P1Signature &sig, const ProtocolParams &params, Rng &rng) {
    return p1prime_distribute(honest_transmission(sig), params, rng);
}

/// One check per record held for the declared message; a position with two
/// records can contribute two mismatches.
inline MismatchCount count_mismatches(const P1Declaration &decl, const P1Ledger &ledger) {
    if (decl.message_bit > 1) {
        throw std::invalid_argument("P1Declaration: message bit must be 0 or 1");
    }
    const auto &records = ledger.records[decl.message_bit];
    if (decl.key.size() != ledger.forwarded[decl.message_bit].size()) {
        throw std::invalid_argument("P1Declaration: key length does not match the signature length");
    }
    MismatchCount c;
    for (const auto &rec : records) {
        ++c.checked;
        if (decl.key[rec.position] == rec.excluded) {
            ++c.mismatches;
        }
    }
    return c;
}

namespace detail {
inline Verdict threshold_verdict(const MismatchCount &c, double fraction, std::size_t length) {
    return {below_threshold(c.mismatches, fraction, length) ? Decision::Accept : Decision::Reject, c.mismatches,
            c.checked};
}
}  // namespace detail

inline Verdict p1_authenticate(const P1Declaration &decl, const P1Ledger &ledger, const ProtocolParams &params) {
    return detail::threshold_verdict(count_mismatches(decl, ledger), params.s_a, params.length);
}

inline Verdict p1_verify(const P1Declaration &decl, const P1Ledger &ledger, const ProtocolParams &params) {
    return detail::threshold_verdict(count_mismatches(decl, ledger), params.s_v, params.length);
}

// ---------------------------------------------------------------------------
// P2

/// Two independent secret bit strings per message bit: one for Bob, one for Charlie.
struct P2Signature {
    std::array<std::vector<std::uint8_t>, 2> key_b;
    std::array<std::vector<std::uint8_t>, 2> key_c;

    std::size_t length() const {
        return key_b[0].size();
    }
};

struct ClassicalRecord {
    std::size_t position = 0;
    std::uint8_t message_bit = 0;
    std::uint8_t value = 0;
    Origin origin = Origin::DirectFromAlice;
};

/// Direct records come from the owner's own key (PrivKeyB for Bob, PrivKeyC
/// for Charlie); forwarded records come from the peer's key.
struct P2Ledger {
    Party owner = Party::Bob;
    std::array<std::vector<ClassicalRecord>, 2> records;
    std::array<std::vector<bool>, 2> forwarded;
    std::array<std::size_t, 2> received_count{0, 0};

    std::size_t kept_count(std::size_t k) const {
        return forwarded[k].size() - count_set(forwarded[k]);
    }
};

struct P2Declaration {
    std::uint8_t message_bit = 0;
    std::vector<std::uint8_t> key_b;
    std::vector<std::uint8_t> key_c;
};

struct P2Distribution {
    P2Ledger bob;
    P2Ledger charlie;
    bool aborted = false;
};

template <RandomBitStream Rng>
P2Signature p2_generate(const ProtocolParams &params, Rng &rng) {
    params.validate();
    P2Signature sig;
    for (std::size_t k = 0; k < 2; ++k) {
        sig.key_b[k].resize(params.length);
        sig.key_c[k].resize(params.length);
        for (auto &b : sig.key_b[k]) {
            b = coin(rng) ? 1 : 0;
        }
        for (auto &b : sig.key_c[k]) {
            b = coin(rng) ? 1 : 0;
        }
    }
    return sig;
}

template <RandomBitStream Rng>
P2Distribution p2_distribute(const P2Signature &sig, const ProtocolParams &params, Rng &rng) {
    params.validate();
    const std::size_t L = params.length;
    for (std::size_t k = 0; k < 2; ++k) {
        if (sig.key_b[k].size() != L || sig.key_c[k].size() != L) {
            throw std::invalid_argument("P2Signature: keys must have length L");
        }
    }
    P2Distribution d;
    d.bob.owner = Party::Bob;
    d.charlie.owner = Party::Charlie;
    for (std::uint8_t k = 0; k < 2; ++k) {
        d.bob.forwarded[k] = draw_forward_mask(L, rng);
        d.charlie.forwarded[k] = draw_forward_mask(L, rng);
        d.bob.received_count[k] = count_set(d.charlie.forwarded[k]);
        d.charlie.received_count[k] = count_set(d.bob.forwarded[k]);

        auto collect = [&](P2Ledger &self, const P2Ledger &peer, const std::vector<std::uint8_t> &own,
                           const std::vector<std::uint8_t> &from_peer) {
            auto &out = self.records[k];
            out.reserve(L + L / 4);
            for (std::size_t l = 0; l < L; ++l) {
                if (!self.forwarded[k][l]) {
                    out.push_back({l, k, own[l], Origin::DirectFromAlice});
                }
                if (peer.forwarded[k][l]) {
                    out.push_back({l, k, from_peer[l], Origin::ForwardedByPeer});
                }
            }
        };
        collect(d.bob, d.charlie, sig.key_b[k], sig.key_c[k]);
        collect(d.charlie, d.bob, sig.key_c[k], sig.key_b[k]);
    }
    const AbortBand band = abort_band(L, params.r);
    for (std::size_t k = 0; k < 2; ++k) {
        if (!band.contains(d.bob.received_count[k]) || !band.contains(d.charlie.received_count[k])) {
            d.aborted = true;
        }
    }
    return d;
}

/// Mismatches split by record origin.
struct P2MismatchCount {
    MismatchCount direct;
    MismatchCount forwarded;
};

inline P2MismatchCount count_mismatches(const P2Declaration &decl, const P2Ledger &ledger) {
    if (decl.message_bit > 1) {
        throw std::invalid_argument("P2Declaration: message bit must be 0 or 1");
    }
    const std::size_t L = ledger.forwarded[decl.message_bit].size();
    if (decl.key_b.size() != L || decl.key_c.size() != L) {
        throw std::invalid_argument("P2Declaration: key length does not match the signature length");
    }
    const auto &own_key = ledger.owner == Party::Bob ? decl.key_b : decl.key_c;
    const auto &peer_key = ledger.owner == Party::Bob ? decl.key_c : decl.key_b;
    P2MismatchCount c;
    for (const auto &rec : ledger.records[decl.message_bit]) {
        const bool direct = rec.origin == Origin::DirectFromAlice;
        MismatchCount &bucket = direct ? c.direct : c.forwarded;
        ++bucket.checked;
        if ((direct ? own_key : peer_key)[rec.position] != rec.value) {
            ++bucket.mismatches;
        }
    }
    return c;
}

/// Bob accepts only a declaration with no mismatch at all (s_a = 0).
inline Verdict p2_bob_accept(const P2Declaration &decl, const P2Ledger &bob, const ProtocolParams &) {
    const auto c = count_mismatches(decl, bob);
    const std::size_t total = c.direct.mismatches + c.forwarded.mismatches;
    return {total == 0 ? Decision::Accept : Decision::Reject, total, c.direct.checked + c.forwarded.checked};
}

/// Charlie accepts iff (i) nothing Bob forwarded mismatches and (ii) fewer
/// than s_v L of his kept PrivKeyC bits mismatch.
inline Verdict p2_charlie_verify(const P2Declaration &decl, const P2Ledger &charlie, const ProtocolParams &params) {
    const auto c = count_mismatches(decl, charlie);
    const bool ok = c.forwarded.mismatches == 0 && below_threshold(c.direct.mismatches, params.s_v, params.length);
    return {ok ? Decision::Accept : Decision::Reject, c.direct.mismatches + c.forwarded.mismatches,
            c.direct.checked + c.forwarded.checked};
}

}  // namespace qds
