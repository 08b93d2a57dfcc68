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
 * Monte Carlo runner. Trial i draws all randomness from
 * trial_stream(master_seed, i), and per-thread tallies are integer sums,
 * so results do not depend on the number of threads.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qds/adversaries.hpp"
#include "qds/analysis.hpp"
#include "qds/protocols.hpp"
#include "qds/random.hpp"
#include "qds/stats.hpp"

namespace qds {

inline constexpr double kDefaultConfidence = 0.99;

struct Scenario {
    Protocol protocol = Protocol::P1;
    ProtocolParams params;
    AdversaryConfig adversary;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;

    void validate() const {
        params.validate();
        if (trials < 1) {
            throw std::invalid_argument("Scenario: trials must be at least 1");
        }
        if (adversary.target_fraction && !(*adversary.target_fraction >= 0.0 && *adversary.target_fraction <= 1.0)) {
            throw std::invalid_argument("Scenario: target fraction must lie in [0, 1]");
        }
    }
};

/// Result of one protocol run. `verifier_mismatches` is Charlie's count.
struct TrialOutcome {
    bool aborted = false;
    bool success = false;
    std::size_t verifier_mismatches = 0;
};

/// Success means: honest, both recipients accept; repudiation, Bob accepts
/// and Charlie rejects the same declaration; forging, Charlie accepts Bob's
/// fabricated declaration.
template <RandomBitStream Rng>
TrialOutcome run_single_trial(const Scenario &sc, Rng &rng) {
    const ProtocolParams &params = sc.params;
    TrialOutcome out;
    const bool quantum = sc.protocol != Protocol::P2;

    auto distribute_p1 = [&](const P1Signature &sig) {
        return sc.protocol == Protocol::P1 ? p1_distribute(sig, params, rng) : p1prime_distribute(sig, params, rng);
    };

    switch (sc.adversary.role) {
        case Role::Honest: {
            if (quantum) {
                const auto sig = p1_generate(params, rng);
                const auto dist = distribute_p1(sig);
                if ((out.aborted = dist.aborted)) {
                    return out;
                }
                const P1Declaration decl{0, sig.private_key[0]};
                const auto bob = p1_authenticate(decl, dist.bob, params);
                const auto charlie = p1_verify(decl, dist.charlie, params);
                out.success = bob.accepted() && charlie.accepted();
                out.verifier_mismatches = charlie.mismatch_count;
            } else {
                const auto sig = p2_generate(params, rng);
                const auto dist = p2_distribute(sig, params, rng);
                if ((out.aborted = dist.aborted)) {
                    return out;
                }
                const P2Declaration decl{0, sig.key_b[0], sig.key_c[0]};
                const auto bob = p2_bob_accept(decl, dist.bob, params);
                const auto charlie = p2_charlie_verify(decl, dist.charlie, params);
                out.success = bob.accepted() && charlie.accepted();
                out.verifier_mismatches = charlie.mismatch_count;
            }
            return out;
        }
        case Role::RepudiateAlice: {
            if (quantum) {
                const auto rep = repudiating_alice_p1(params, sc.adversary, rng);
                const auto dist = distribute_p1(rep.signature);
                if ((out.aborted = dist.aborted)) {
                    return out;
                }
                const auto bob = p1_authenticate(rep.declaration, dist.bob, params);
                const auto charlie = p1_verify(rep.declaration, dist.charlie, params);
                out.success = bob.accepted() && !charlie.accepted();
                out.verifier_mismatches = charlie.mismatch_count;
            } else {
                const auto rep = repudiating_alice_p2(params, rng);
                const auto dist = p2_distribute(rep.signature, params, rng);
                if ((out.aborted = dist.aborted)) {
                    return out;
                }
                const auto bob = p2_bob_accept(rep.declaration, dist.bob, params);
                const auto charlie = p2_charlie_verify(rep.declaration, dist.charlie, params);
                out.success = bob.accepted() && !charlie.accepted();
                out.verifier_mismatches = charlie.mismatch_count;
            }
            return out;
        }
        case Role::ForgeBob: {
            if (quantum) {
                const auto run = p1_forgery_run(params, sc.adversary, sc.protocol, rng);
                if ((out.aborted = run.aborted)) {
                    return out;
                }
                const auto charlie = p1_verify(run.forgery.declaration, run.charlie, params);
                out.success = charlie.accepted();
                out.verifier_mismatches = charlie.mismatch_count;
            } else {
                const auto sig = p2_generate(params, rng);
                const auto dist = p2_distribute(sig, params, rng);
                if ((out.aborted = dist.aborted)) {
                    return out;
                }
                const auto decl = forging_bob_p2(params, p2_bob_view(sig, dist.bob, 0), rng);
                const auto charlie = p2_charlie_verify(decl, dist.charlie, params);
                out.success = charlie.accepted();
                out.verifier_mismatches = charlie.mismatch_count;
            }
            return out;
        }
    }
    return out;
}

/// Closed form matched to a scenario: the adversary's bound, or the abort
/// bound for honest runs.
inline double scenario_bound(const Scenario &sc) {
    const auto &p = sc.params;
    switch (sc.adversary.role) {
        case Role::Honest:
            return abort_probability_bound(p.r, p.length);
        case Role::RepudiateAlice:
            return repudiation_bound(sc.protocol, p.s_a, p.s_v, p.length);
        case Role::ForgeBob:
            return forging_bound(sc.protocol, p.s_v, p.r, p.length);
    }
    return 1.0;
}

/// Integer aggregate; merging is associative and commutative.
struct TrialTally {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t aborts = 0;
    std::map<std::size_t, std::uint64_t> mismatch_counts;

    void add(const TrialOutcome &o) {
        ++trials;
        if (o.aborted) {
            ++aborts;
            return;
        }
        if (o.success) {
            ++successes;
        }
        ++mismatch_counts[o.verifier_mismatches];
    }

    void merge(const TrialTally &o) {
        trials += o.trials;
        successes += o.successes;
        aborts += o.aborts;
        for (const auto &[k, v] : o.mismatch_counts) {
            mismatch_counts[k] += v;
        }
    }
};

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t aborts = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double bound = 1.0;
    /// Verifier mismatch count -> frequency among non-aborted trials.
    std::map<std::size_t, double> mismatch_histogram;

    std::uint64_t completed() const {
        return trials - aborts;
    }

    friend bool operator==(const TrialStats &, const TrialStats &) = default;
};

inline TrialStats finalize(const TrialTally &t, double bound, double level = kDefaultConfidence) {
    TrialStats s;
    s.trials = t.trials;
    s.successes = t.successes;
    s.aborts = t.aborts;
    const std::uint64_t n = t.trials - t.aborts;
    s.rate = n == 0 ? 0.0 : static_cast<double>(t.successes) / static_cast<double>(n);
    const Interval ci = confidence_interval(t.successes, n, level);
    s.ci_low = ci.low;
    s.ci_high = ci.high;
    s.bound = bound;
    for (const auto &[k, v] : t.mismatch_counts) {
        s.mismatch_histogram[k] = static_cast<double>(v) / static_cast<double>(n);
    }
    return s;
}

inline TrialTally tally_range(const Scenario &sc, std::uint64_t begin, std::uint64_t end) {
    TrialTally t;
    for (std::uint64_t i = begin; i < end; ++i) {
        auto rng = trial_stream(sc.master_seed, i);
        t.add(run_single_trial(sc, rng));
    }
    return t;
}

/// Runs every trial of `sc`; `threads` = 0 uses the hardware concurrency.
inline TrialStats run_trials(const Scenario &sc, unsigned threads = 0) {
    sc.validate();
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::uint64_t workers = std::min<std::uint64_t>(threads, sc.trials);
    std::vector<TrialTally> partial(workers);
    if (workers == 1) {
        partial[0] = tally_range(sc, 0, sc.trials);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = sc.trials * w / workers;
            const std::uint64_t end = sc.trials * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { partial[w] = tally_range(sc, begin, end); });
        }
    }
    TrialTally total;
    for (const auto &p : partial) {
        total.merge(p);
    }
    return finalize(total, scenario_bound(sc));
}

}  // namespace qds
