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

#include "qds/protocols.hpp"

#include <array>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "qds/stats.hpp"

using namespace qds;

namespace {

ProtocolParams params(std::size_t L, double s_a, double s_v, double r) {
    return {L, s_a, s_v, r};
}

template <class Ledger>
void expect_partition(const Ledger &self, const Ledger &peer, std::size_t L) {
    for (std::size_t k = 0; k < 2; ++k) {
        ASSERT_EQ(self.forwarded[k].size(), L);
        EXPECT_EQ(self.kept_count(k) + count_set(self.forwarded[k]), L);
        EXPECT_EQ(self.received_count[k], count_set(peer.forwarded[k]));
        std::size_t direct = 0;
        std::size_t forwarded = 0;
        for (const auto &rec : self.records[k]) {
            ASSERT_LT(rec.position, L);
            EXPECT_EQ(rec.message_bit, k);
            if (rec.origin == Origin::DirectFromAlice) {
                ++direct;
                EXPECT_FALSE(self.forwarded[k][rec.position]);
            } else {
                ++forwarded;
                EXPECT_TRUE(peer.forwarded[k][rec.position]);
            }
        }
        EXPECT_EQ(direct, self.kept_count(k));
        EXPECT_EQ(forwarded, self.received_count[k]);
    }
}

P1Distribution distribute(Protocol p, const P1Signature &sig, const ProtocolParams &pp, RandomStream &rng) {
    return p == Protocol::P1 ? p1_distribute(sig, pp, rng) : p1prime_distribute(sig, pp, rng);
}

}  // namespace

TEST(ProtocolParams, validity) {
    EXPECT_TRUE(params(10, 0.0, 0.1, 0.1).violation().empty());
    EXPECT_THROW(params(0, 0.0, 0.1, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(params(10, 0.1, 0.1, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(params(10, 0.2, 0.1, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(params(10, 0.0, 1.0, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(params(10, 0.0, 0.1, 0.5).validate(), std::invalid_argument);
    EXPECT_THROW(params(10, -0.1, 0.1, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(params(10, 0.0, 0.1, -0.01).validate(), std::invalid_argument);
}

TEST(Generation, lengths_and_independence) {
    RandomStream rng(21);
    const auto pp = params(64, 0.0, 0.1, 0.1);
    const auto sig = p1_generate(pp, rng);
    EXPECT_EQ(sig.private_key[0].size(), 64u);
    EXPECT_EQ(sig.private_key[1].size(), 64u);
    const auto p2 = p2_generate(pp, rng);
    EXPECT_EQ(p2.length(), 64u);
    EXPECT_NE(p2.key_b[0], p2.key_c[0]);
    EXPECT_THROW(p1_generate(params(0, 0.0, 0.1, 0.1), rng), std::invalid_argument);

    // Bob's and Charlie's keys agree on about half the positions.
    std::size_t agree = 0;
    std::size_t total = 0;
    for (int t = 0; t < 200; ++t) {
        const auto s = p2_generate(pp, rng);
        for (std::size_t l = 0; l < 64; ++l) {
            agree += s.key_b[0][l] == s.key_c[0][l];
            ++total;
        }
    }
    EXPECT_NEAR(agree / double(total), 0.5, 0.02);
}

TEST(AbortBand, boundaries) {
    const auto b = abort_band(100, 0.1);
    EXPECT_EQ(b.low, 40u);
    EXPECT_EQ(b.high, 60u);
    EXPECT_TRUE(b.contains(40));
    EXPECT_TRUE(b.contains(60));
    EXPECT_FALSE(b.contains(39));
    EXPECT_FALSE(b.contains(61));
    const auto tight = abort_band(100, 0.01);
    EXPECT_EQ(tight.low, 49u);
    EXPECT_EQ(tight.high, 51u);
    const auto zero = abort_band(101, 0.0);
    EXPECT_EQ(zero.low, 51u);
    EXPECT_EQ(zero.high, 50u);
    EXPECT_FALSE(zero.contains(50));
    EXPECT_FALSE(zero.contains(51));
}

TEST(Threshold, strict_and_zero_rules) {
    EXPECT_TRUE(below_threshold(0, 0.0, 100));
    EXPECT_FALSE(below_threshold(1, 0.0, 100));
    EXPECT_TRUE(below_threshold(9, 0.1, 100));
    EXPECT_FALSE(below_threshold(10, 0.1, 100));
    EXPECT_EQ(threshold_count(0.1, 100), 10u);
    EXPECT_EQ(threshold_count(0.1, 133), 14u);
    EXPECT_EQ(threshold_count(0.0, 133), 0u);
}

class HonestP1 : public ::testing::TestWithParam<Protocol> {};

TEST_P(HonestP1, completeness_and_conservation) {
    RandomStream rng(22);
    const auto pp = params(128, 0.0, 0.05, 0.2);
    int completed = 0;
    for (int t = 0; t < 300; ++t) {
        const auto sig = p1_generate(pp, rng);
        const auto d = distribute(GetParam(), sig, pp, rng);
        expect_partition(d.bob, d.charlie, pp.length);
        expect_partition(d.charlie, d.bob, pp.length);
        if (d.aborted) {
            continue;
        }
        ++completed;
        for (std::uint8_t k = 0; k < 2; ++k) {
            const P1Declaration decl{k, sig.private_key[k]};
            const auto bob = p1_authenticate(decl, d.bob, pp);
            const auto charlie = p1_verify(decl, d.charlie, pp);
            EXPECT_TRUE(bob.accepted());
            EXPECT_TRUE(charlie.accepted());
            EXPECT_EQ(bob.mismatch_count, 0u);
            EXPECT_EQ(charlie.mismatch_count, 0u);
            EXPECT_LE(bob.mismatch_count, bob.records_checked);
        }
    }
    EXPECT_GT(completed, 250);
}

TEST_P(HonestP1, record_configurations_are_uniform) {
    // Per position, Bob holds both copies, his own only, the peer's only, or neither.
    RandomStream rng(23);
    const auto pp = params(16, 0.0, 0.1, 0.49);
    constexpr int runs = 10'000;
    std::array<std::size_t, 4> configs{};
    for (int t = 0; t < runs; ++t) {
        const auto d = distribute(GetParam(), p1_generate(pp, rng), pp, rng);
        for (std::size_t l = 0; l < pp.length; ++l) {
            const bool own = !d.bob.forwarded[0][l];
            const bool peer = d.charlie.forwarded[0][l];
            ++configs[(own ? 0 : 2) + (peer ? 0 : 1)];
        }
    }
    const double total = runs * 16.0;
    for (std::size_t c : configs) {
        EXPECT_NEAR(c / total, 0.25, 0.02);
    }
}

TEST_P(HonestP1, abort_flag_matches_band) {
    RandomStream rng(24);
    const auto pp = params(20, 0.0, 0.1, 0.1);
    bool saw_abort = false;
    bool saw_run = false;
    for (int t = 0; t < 2000; ++t) {
        const auto d = distribute(GetParam(), p1_generate(pp, rng), pp, rng);
        const auto band = abort_band(pp.length, pp.r);
        bool outside = false;
        for (std::size_t k = 0; k < 2; ++k) {
            outside = outside || !band.contains(d.bob.received_count[k]) || !band.contains(d.charlie.received_count[k]);
        }
        EXPECT_EQ(d.aborted, outside);
        saw_abort = saw_abort || d.aborted;
        saw_run = saw_run || !d.aborted;
    }
    EXPECT_TRUE(saw_abort);
    EXPECT_TRUE(saw_run);
}

INSTANTIATE_TEST_SUITE_P(Variants, HonestP1, ::testing::Values(Protocol::P1, Protocol::P1Prime),
                         [](const auto &info) { return std::string(to_string(info.param)); });

TEST(P1, conjugate_declaration_is_caught_in_matching_basis) {
    RandomStream rng(25);
    const auto pp = params(1, 0.0, 0.5, 0.0);
    P1Signature sig;
    sig.private_key = {std::vector{Bb84State::XPlus}, std::vector{Bb84State::Z0}};
    P1Declaration decl{0, {Bb84State::XMinus}};
    int caught = 0;
    int checked = 0;
    for (int t = 0; t < 4000; ++t) {
        const auto d = p1_distribute(sig, pp, rng);
        for (const auto &rec : d.bob.records[0]) {
            ++checked;
            // Only an X-basis measurement (which always yields +) rules out |->.
            caught += rec.excluded == Bb84State::XMinus;
        }
        EXPECT_EQ(count_mismatches(decl, d.bob).mismatches,
                  static_cast<std::size_t>(std::count_if(d.bob.records[0].begin(), d.bob.records[0].end(),
                                                         [](const auto &r) { return r.excluded == Bb84State::XMinus; })));
    }
    EXPECT_NEAR(caught / double(checked), 0.5, 0.03);
}

TEST(P1, declaration_errors) {
    RandomStream rng(26);
    const auto pp = params(8, 0.0, 0.1, 0.4);
    const auto sig = p1_generate(pp, rng);
    const auto d = p1_distribute(sig, pp, rng);
    EXPECT_THROW(count_mismatches(P1Declaration{2, sig.private_key[0]}, d.bob), std::invalid_argument);
    EXPECT_THROW(count_mismatches(P1Declaration{0, {Bb84State::Z0}}, d.bob), std::invalid_argument);
    AliceTransmission short_t = honest_transmission(sig);
    short_t.to_charlie[1].pop_back();
    EXPECT_THROW(p1_distribute(short_t, pp, rng), std::invalid_argument);
}

TEST(P1, equivalent_to_p1prime_for_honest_parties) {
    // Statistic: records Bob holds, and mismatches against a declaration with
    // four conjugated positions. Both should have the same law in P1 and P1'.
    const auto pp = params(32, 0.0, 0.5, 0.45);
    constexpr int runs = 10'000;
    Histogram records[2];
    Histogram mismatches[2];
    const Protocol variants[2] = {Protocol::P1, Protocol::P1Prime};
    for (int v = 0; v < 2; ++v) {
        for (int t = 0; t < runs; ++t) {
            auto rng = trial_stream(100 + v, t);
            const auto sig = p1_generate(pp, rng);
            const auto d = distribute(variants[v], sig, pp, rng);
            P1Declaration decl{0, sig.private_key[0]};
            for (std::size_t l : {1u, 7u, 19u, 30u}) {
                decl.key[l] = conjugate_state(decl.key[l]);
            }
            const auto c = count_mismatches(decl, d.bob);
            ++records[v][static_cast<std::int64_t>(c.checked)];
            ++mismatches[v][static_cast<std::int64_t>(c.mismatches)];
        }
    }
    EXPECT_GT(chi_square_homogeneity(records[0], records[1]), 0.01);
    EXPECT_GT(chi_square_homogeneity(mismatches[0], mismatches[1]), 0.01);
}

TEST(P2, honest_completeness_and_conservation) {
    RandomStream rng(27);
    const auto pp = params(100, 0.0, 0.1, 0.2);
    for (int t = 0; t < 300; ++t) {
        const auto sig = p2_generate(pp, rng);
        const auto d = p2_distribute(sig, pp, rng);
        expect_partition(d.bob, d.charlie, pp.length);
        expect_partition(d.charlie, d.bob, pp.length);
        for (std::uint8_t k = 0; k < 2; ++k) {
            const P2Declaration decl{k, sig.key_b[k], sig.key_c[k]};
            EXPECT_TRUE(p2_bob_accept(decl, d.bob, pp).accepted());
            const auto v = p2_charlie_verify(decl, d.charlie, pp);
            EXPECT_TRUE(v.accepted());
            EXPECT_EQ(v.mismatch_count, 0u);
        }
    }
}

TEST(P2, record_sources) {
    RandomStream rng(28);
    const auto pp = params(50, 0.0, 0.1, 0.4);
    const auto sig = p2_generate(pp, rng);
    const auto d = p2_distribute(sig, pp, rng);
    for (const auto &rec : d.bob.records[0]) {
        const auto &src = rec.origin == Origin::DirectFromAlice ? sig.key_b[0] : sig.key_c[0];
        EXPECT_EQ(rec.value, src[rec.position]);
    }
    for (const auto &rec : d.charlie.records[1]) {
        const auto &src = rec.origin == Origin::DirectFromAlice ? sig.key_c[1] : sig.key_b[1];
        EXPECT_EQ(rec.value, src[rec.position]);
    }
}

TEST(P2, verdict_examples) {
    RandomStream rng(29);
    const auto pp = params(100, 0.0, 0.1, 0.45);
    P2Signature sig;
    P2Distribution d;
    do {
        sig = p2_generate(pp, rng);
        d = p2_distribute(sig, pp, rng);
    } while (d.aborted);

    std::size_t bob_kept = 0;
    std::size_t bob_forwarded = 0;
    std::vector<std::size_t> charlie_kept_positions;
    while (d.bob.forwarded[0][bob_kept]) {
        ++bob_kept;
    }
    while (!d.bob.forwarded[0][bob_forwarded]) {
        ++bob_forwarded;
    }
    for (std::size_t l = 0; l < pp.length; ++l) {
        if (!d.charlie.forwarded[0][l]) {
            charlie_kept_positions.push_back(l);
        }
    }
    const std::size_t charlie_kept = charlie_kept_positions.front();

    const P2Declaration honest{0, sig.key_b[0], sig.key_c[0]};

    auto flipped_b = honest;
    flipped_b.key_b[bob_kept] ^= 1;
    EXPECT_FALSE(p2_bob_accept(flipped_b, d.bob, pp).accepted());

    auto hidden_c = honest;
    hidden_c.key_c[charlie_kept] ^= 1;
    EXPECT_TRUE(p2_bob_accept(hidden_c, d.bob, pp).accepted());
    EXPECT_TRUE(p2_charlie_verify(hidden_c, d.charlie, pp).accepted());

    auto forwarded_b = honest;
    forwarded_b.key_b[bob_forwarded] ^= 1;
    EXPECT_FALSE(p2_charlie_verify(forwarded_b, d.charlie, pp).accepted());

    const std::size_t R = threshold_count(pp.s_v, pp.length);
    ASSERT_GE(charlie_kept_positions.size(), R);
    auto many = honest;
    for (std::size_t i = 0; i < R; ++i) {
        many.key_c[charlie_kept_positions[i]] ^= 1;
    }
    const auto v = p2_charlie_verify(many, d.charlie, pp);
    EXPECT_FALSE(v.accepted());
    EXPECT_EQ(v.mismatch_count, R);
    auto one_fewer = honest;
    for (std::size_t i = 0; i + 1 < R; ++i) {
        one_fewer.key_c[charlie_kept_positions[i]] ^= 1;
    }
    EXPECT_TRUE(p2_charlie_verify(one_fewer, d.charlie, pp).accepted());
}

TEST(P2, abort_frequency_matches_exact_binomial) {
    const auto pp = params(100, 0.0, 0.1, 0.01);
    const double exact = oracle::exact_abort_probability(100, 49, 51);
    constexpr int runs = 20'000;
    int aborts = 0;
    RandomStream rng(30);
    for (int t = 0; t < runs; ++t) {
        aborts += p2_distribute(p2_generate(pp, rng), pp, rng).aborted;
    }
    EXPECT_NEAR(aborts / double(runs), exact, oracle::binomial_tolerance(exact, runs));
}

TEST(P2, abort_frequency_loose_band) {
    const auto pp = params(20, 0.0, 0.1, 0.1);
    const auto band = abort_band(20, 0.1);
    const double exact = oracle::exact_abort_probability(20, band.low, band.high);
    constexpr int runs = 20'000;
    int aborts = 0;
    RandomStream rng(31);
    for (int t = 0; t < runs; ++t) {
        aborts += p2_distribute(p2_generate(pp, rng), pp, rng).aborted;
    }
    EXPECT_NEAR(aborts / double(runs), exact, oracle::binomial_tolerance(exact, runs));
}
