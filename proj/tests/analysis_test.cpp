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

#include "qds/analysis.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace qds;

// Reference values computed independently in double precision with mpmath/scipy.
TEST(Bounds, spot_values) {
    EXPECT_NEAR(p1_repudiation_bound(0.0, 0.1, 1000), 0.006737946999085461, 1e-12);
    EXPECT_NEAR(p1_forging_bound(0.02, 0.0, 1000), 7.281525390894617e-4, 1e-12);
    EXPECT_NEAR(p2_repudiation_bound(0.1, 100), 9.765625e-4, 1e-15);
    EXPECT_NEAR(p2_forging_bound(0.1, 0.0, 100), 1.2340980408667956e-4, 1e-12);
    EXPECT_NEAR(p2_forging_bound(0.1, 0.01, 133), 1.1044572484165936e-5, 1e-12);
    EXPECT_NEAR(abort_probability_bound(0.1, 512), 1.4285139856654085e-4, 1e-12);
    EXPECT_NEAR(p1_forging_bound(0.03, 0.05, 512), 0.2056806574662173, 1e-12);
    EXPECT_NEAR(p2_forging_bound(0.1, 0.05, 200), 9.292491998047319e-07, 1e-15);
}

TEST(Bounds, degenerate_lengths_and_thresholds) {
    EXPECT_EQ(p1_repudiation_bound(0.2, 0.3, 0), 1.0);
    EXPECT_EQ(p2_repudiation_bound(0.3, 0), 1.0);
    EXPECT_EQ(p2_forging_bound(0.25, 0.0, 1000), 1.0);
    EXPECT_EQ(p2_forging_bound(0.2, 0.1, 1000), 1.0);
    EXPECT_EQ(abort_probability_bound(0.0, 1000), 1.0);
    EXPECT_NEAR(abort_probability_bound(0.499, 100), 4.0 * std::exp(-2.0 * 0.499 * 0.499 * 100), 1e-15);
    EXPECT_THROW(p1_repudiation_bound(0.1, 0.1, 10), std::invalid_argument);
    EXPECT_THROW(p2_repudiation_bound(0.0, 10), std::invalid_argument);
    EXPECT_THROW(abort_probability_bound(-0.1, 10), std::invalid_argument);
}

TEST(Bounds, p1_forging_vacuity_edge) {
    for (double r : {0.0, 0.1, 0.25}) {
        const double edge = (1.0 - 2.0 * r) / 16.0;
        EXPECT_EQ(p1_forging_bound(edge, r, 1000), 1.0) << r;
        EXPECT_LT(p1_forging_bound(edge * 0.9, r, 1000), 1.0) << r;
    }
}

TEST(Bounds, p1_forging_at_zero_threshold_is_exp_minus_L_over_64) {
    for (std::size_t L : {2u, 64u, 100u, 512u, 1000u, 4096u}) {
        EXPECT_NEAR(p1_forging_bound(0.0, 0.0, L), std::exp(-static_cast<double>(L) / 64.0), 1e-15) << L;
    }
    // With K = ceil(L/2) an odd L keeps one more element, so the bound is slightly smaller.
    EXPECT_LT(p1_forging_bound(0.0, 0.0, 101), std::exp(-101.0 / 64.0));
}

TEST(Bounds, p2_repudiation_halves_per_extra_mismatch) {
    for (std::size_t L : {10u, 50u, 100u}) {
        EXPECT_NEAR(p2_repudiation_bound(0.1, L + 10) / p2_repudiation_bound(0.1, L), 0.5, 1e-12);
    }
}

TEST(Bounds, in_unit_interval_and_nonincreasing_in_length) {
    const double svs[] = {0.001, 0.01, 0.03, 0.06, 0.1, 0.2};
    const double rs[] = {0.0, 0.01, 0.05, 0.2, 0.45};
    for (double s_v : svs) {
        for (double r : rs) {
            double prev[4] = {2.0, 2.0, 2.0, 2.0};
            // Up to L = 2048 no exponent drops below -700, so nothing underflows to 0.
            for (std::size_t L = 1; L <= 2048; L = L * 3 / 2 + 1) {
                const double now[4] = {p1_repudiation_bound(0.0, s_v, L), p1_forging_bound(s_v, r, L),
                                       p2_repudiation_bound(s_v, L), p2_forging_bound(s_v, r, L)};
                for (int i = 0; i < 4; ++i) {
                    EXPECT_GT(now[i], 0.0);
                    EXPECT_LE(now[i], 1.0);
                    // K = ceil(L(1/2 - r)) jumps by at most one, so P1 forging is monotone up to that rounding.
                    if (i != 1) {
                        EXPECT_LE(now[i], prev[i]);
                    }
                    prev[i] = now[i];
                }
            }
        }
    }
    EXPECT_LT(p1_repudiation_bound(0.0, 0.1, 2000), p1_repudiation_bound(0.0, 0.1, 1000));
    EXPECT_LT(p1_forging_bound(0.02, 0.0, 2000), p1_forging_bound(0.02, 0.0, 1000));
}

TEST(Bounds, abort_bound_dominates_exact_tail) {
    for (std::size_t L : {20u, 100u, 512u}) {
        for (double r : {0.05, 0.1, 0.2}) {
            const auto band = abort_band(L, r);
            const double exact = oracle::exact_abort_probability(L, band.low, band.high);
            EXPECT_LE(exact, abort_probability_bound(r, L)) << L << ' ' << r;
        }
    }
    const double outside = 1.0 - oracle::binomial_mass(100, 40, 60, 0.5);
    EXPECT_NEAR(outside, 0.0352002, 1e-6);
    EXPECT_LE(outside, abort_probability_bound(0.1, 100));
}

TEST(BoundReport, fields) {
    const auto b = bound_report(Protocol::P1, {1000, 0.0, 0.02, 0.0});
    EXPECT_EQ(b.K, 500u);
    EXPECT_NEAR(b.forging_bound, 7.281525390894617e-4, 1e-12);
    EXPECT_FALSE(b.forging_vacuous);
    const auto v = bound_report(Protocol::P2, {100, 0.0, 0.3, 0.0});
    EXPECT_TRUE(v.forging_vacuous);
    EXPECT_EQ(v.forging_bound, 1.0);
    EXPECT_EQ(bound_report(Protocol::P1Prime, {100, 0.0, 0.01, 0.0}).protocol, Protocol::P1);
    EXPECT_EQ(kept_elements(512, 0.05), 231u);
}

namespace {

double worst_bound(Protocol p, double s_a, double s_v, double r, std::size_t L) {
    return std::max(repudiation_bound(p, s_a, s_v, L), forging_bound(p, s_v, r, L));
}

std::optional<std::size_t> scan_min_length(Protocol p, double eps, double s_a, double s_v, double r,
                                           std::size_t limit) {
    for (std::size_t L = 1; L <= limit; ++L) {
        if (worst_bound(p, s_a, s_v, r, L) <= eps) {
            return L;
        }
    }
    return std::nullopt;
}

}  // namespace

TEST(MinLength, p2_example_is_133) {
    const auto L = min_length(Protocol::P2, 1e-4, 0.0, 0.1, 0.01);
    ASSERT_TRUE(L.has_value());
    EXPECT_EQ(*L, 133u);
    EXPECT_LE(p2_repudiation_bound(0.1, 133), 1e-4);
    EXPECT_LE(p2_forging_bound(0.1, 0.01, 133), 1e-4);
    EXPECT_GT(p2_repudiation_bound(0.1, 132), 1e-4);
}

TEST(MinLength, epsilon_one_gives_one) {
    EXPECT_EQ(min_length(Protocol::P1, 1.0, 0.0, 0.01, 0.1), 1u);
    EXPECT_EQ(min_length(Protocol::P2, 1.0, 0.0, 0.3, 0.1), 1u);
}

TEST(MinLength, matches_linear_scan) {
    struct Case {
        Protocol p;
        double eps, s_a, s_v, r;
    };
    const Case cases[] = {
        {Protocol::P2, 1e-4, 0.0, 0.1, 0.01}, {Protocol::P2, 1e-3, 0.0, 0.05, 0.1},
        {Protocol::P2, 1e-6, 0.0, 0.15, 0.0}, {Protocol::P1, 1e-2, 0.0, 0.03, 0.05},
        {Protocol::P1, 1e-3, 0.0, 0.02, 0.01}, {Protocol::P1, 1e-4, 0.01, 0.04, 0.0},
    };
    for (const auto &c : cases) {
        const auto solved = min_length(c.p, c.eps, c.s_a, c.s_v, c.r);
        const auto scanned = scan_min_length(c.p, c.eps, c.s_a, c.s_v, c.r, 200'000);
        ASSERT_TRUE(scanned.has_value());
        ASSERT_TRUE(solved.has_value());
        EXPECT_EQ(*solved, *scanned) << to_string(c.p) << " eps=" << c.eps << " sv=" << c.s_v;
    }
}

TEST(MinLength, minimality_contract) {
    for (double eps : {0.5, 0.1, 1e-2, 1e-5, 1e-9}) {
        const auto L = min_length(Protocol::P1, eps, 0.0, 0.025, 0.02);
        ASSERT_TRUE(L.has_value());
        EXPECT_LE(worst_bound(Protocol::P1, 0.0, 0.025, 0.02, *L), eps);
        if (*L > 1) {
            EXPECT_GT(worst_bound(Protocol::P1, 0.0, 0.025, 0.02, *L - 1), eps);
        }
    }
}

TEST(MinLength, nonincreasing_in_epsilon) {
    std::size_t prev = 0;
    for (double eps = 1e-12; eps < 1.0; eps *= 3.0) {
        const auto L = min_length(Protocol::P2, eps, 0.0, 0.1, 0.05);
        ASSERT_TRUE(L.has_value());
        if (prev != 0) {
            EXPECT_LE(*L, prev);
        }
        prev = *L;
    }
}

TEST(MinLength, vacuous_forging_is_unsatisfiable) {
    EXPECT_FALSE(min_length(Protocol::P1, 1e-3, 0.0, 0.07, 0.0).has_value());
    EXPECT_FALSE(min_length(Protocol::P2, 1e-3, 0.0, 0.3, 0.0).has_value());
}

TEST(MinLength, rejects_bad_inputs) {
    EXPECT_THROW(min_length(Protocol::P2, 0.0, 0.0, 0.1, 0.0), std::invalid_argument);
    EXPECT_THROW(min_length(Protocol::P2, 1.5, 0.0, 0.1, 0.0), std::invalid_argument);
    EXPECT_THROW(min_length(Protocol::P1, 1e-3, 0.1, 0.05, 0.0), std::invalid_argument);
    EXPECT_THROW(min_length(Protocol::P2, 1e-3, 0.0, 0.1, 0.5), std::invalid_argument);
}

TEST(Optimize, p1_interior_optimum) {
    const auto c = optimize_thresholds(Protocol::P1, 4096, 0.01, 0.0);
    EXPECT_GT(c.s_v, 0.0);
    EXPECT_LT(c.s_v, (1.0 - 2 * 0.01) / 16.0);
    EXPECT_NEAR(c.repudiation_bound / c.forging_bound, 1.0, 0.01);
}

TEST(Optimize, p2_equalises_bounds) {
    const auto c = optimize_thresholds(Protocol::P2, 200, 0.0);
    EXPECT_NEAR(c.repudiation_bound / c.forging_bound, 1.0, 0.01);
    EXPECT_DOUBLE_EQ(c.value, std::max(c.repudiation_bound, c.forging_bound));
}

TEST(Optimize, no_grid_point_is_better) {
    struct Case {
        Protocol p;
        std::size_t L;
        double r;
    };
    for (const auto &[p, L, r] : {Case{Protocol::P1, 4096, 0.01}, Case{Protocol::P1, 512, 0.1},
                                  Case{Protocol::P2, 200, 0.0}, Case{Protocol::P2, 1000, 0.2}}) {
        const auto c = optimize_thresholds(p, L, r, 0.0);
        for (int i = 1; i < 5000; ++i) {
            const double s_v = 0.3 * i / 5000.0;
            EXPECT_LE(c.value, worst_bound(p, 0.0, s_v, r, L) * (1.0 + 1e-9)) << to_string(p) << " s_v=" << s_v;
        }
    }
}

TEST(Optimize, free_sa_is_at_least_as_good) {
    const auto fixed = optimize_thresholds(Protocol::P1, 4096, 0.01, 0.0);
    const auto free = optimize_thresholds(Protocol::P1, 4096, 0.01, std::nullopt);
    EXPECT_LE(free.value, fixed.value * (1.0 + 1e-12));
    EXPECT_LT(free.s_a, free.s_v);
}

TEST(Optimize, rejects_bad_inputs) {
    EXPECT_THROW(optimize_thresholds(Protocol::P1, 0, 0.1), std::invalid_argument);
    EXPECT_THROW(optimize_thresholds(Protocol::P1, 100, 0.5), std::invalid_argument);
    EXPECT_THROW(optimize_thresholds(Protocol::P1, 100, 0.1, 1.0), std::invalid_argument);
}
