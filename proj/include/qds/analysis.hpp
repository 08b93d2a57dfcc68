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
 * Closed-form security bounds, signature-length solving and threshold
 * optimisation. Everything here is deterministic.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qds/protocols.hpp"

namespace qds {

inline constexpr double kMinForgeMismatch = 1.0 / 8.0;  // C_min
inline constexpr double kMaxForgeMismatch = 3.0 / 8.0;  // C_max
inline constexpr std::size_t kMaxSolvedLength = 1'000'000'000;

/// Elements Charlie keeps in the worst case: ceil(L (1/2 - r)).
inline std::size_t kept_elements(std::size_t length, double r) {
    return threshold_count(0.5 - r, length);
}

inline double p1_repudiation_bound(double s_a, double s_v, std::size_t length) {
    if (!(s_a < s_v)) {
        throw std::invalid_argument("p1_repudiation_bound: requires s_a < s_v");
    }
    const double d = s_v - s_a;
    return std::min(1.0, std::exp(-d * d * static_cast<double>(length) / 2.0));
}

/// Vacuous (1) once s_v L / K reaches 1/8.
inline double p1_forging_bound(double s_v, double r, std::size_t length) {
    const std::size_t K = kept_elements(length, r);
    if (K == 0) {
        return 1.0;
    }
    const double Kd = static_cast<double>(K);
    const double ratio = s_v * static_cast<double>(length) / Kd;
    if (ratio >= kMinForgeMismatch - 1e-12) {
        return 1.0;
    }
    const double gap = kMinForgeMismatch - ratio;
    return std::min(1.0, std::exp(-2.0 * gap * gap * Kd));
}

inline double p2_repudiation_bound(double s_v, std::size_t length) {
    if (!(s_v > 0.0)) {
        throw std::invalid_argument("p2_repudiation_bound: requires s_v > 0");
    }
    return std::min(1.0, std::pow(0.5, s_v * static_cast<double>(length)));
}

/// Vacuous (1) once s_v / (1 - 2r) reaches 1/4, where the exponent vanishes.
inline double p2_forging_bound(double s_v, double r, std::size_t length) {
    const double width = 1.0 - 2.0 * r;
    if (!(width > 0.0)) {
        return 1.0;
    }
    const double x = s_v / width;
    if (x >= 0.25 - 1e-12) {
        return 1.0;
    }
    const double gap = 0.25 - x;
    return std::min(1.0, std::exp(-4.0 * gap * gap * static_cast<double>(length) * width));
}

/// 4 exp(-2 r^2 L): an exponential tail for the four Binomial(L, 1/2)
/// received counts leaving the abort band; numerically it dominates the exact
/// abort probability.
inline double abort_probability_bound(double r, std::size_t length) {
    if (r < 0.0) {
        throw std::invalid_argument("abort_probability_bound: r must be nonnegative");
    }
    if (r == 0.0) {
        return 1.0;
    }
    return std::min(1.0, 4.0 * std::exp(-2.0 * r * r * static_cast<double>(length)));
}

inline double repudiation_bound(Protocol p, double s_a, double s_v, std::size_t length) {
    return p == Protocol::P2 ? p2_repudiation_bound(s_v, length) : p1_repudiation_bound(s_a, s_v, length);
}

inline double forging_bound(Protocol p, double s_v, double r, std::size_t length) {
    return p == Protocol::P2 ? p2_forging_bound(s_v, r, length) : p1_forging_bound(s_v, r, length);
}

struct BoundReport {
    Protocol protocol = Protocol::P1;
    ProtocolParams params;
    double repudiation_bound = 1.0;
    double forging_bound = 1.0;
    double abort_bound = 1.0;
    std::size_t K = 0;
    bool repudiation_vacuous = true;
    bool forging_vacuous = true;
};

inline BoundReport bound_report(Protocol protocol, const ProtocolParams &params) {
    params.validate();
    BoundReport b;
    b.protocol = protocol == Protocol::P1Prime ? Protocol::P1 : protocol;
    b.params = params;
    b.repudiation_bound = repudiation_bound(b.protocol, params.s_a, params.s_v, params.length);
    b.forging_bound = forging_bound(b.protocol, params.s_v, params.r, params.length);
    b.abort_bound = abort_probability_bound(params.r, params.length);
    b.K = kept_elements(params.length, params.r);
    b.repudiation_vacuous = b.repudiation_bound >= 1.0;
    b.forging_vacuous = b.forging_bound >= 1.0;
    return b;
}

/// Smallest L with max(repudiation, forging) <= epsilon, or nullopt when no
/// L up to 1e9 qualifies (e.g. a vacuous forging bound). Doubling, then
/// bisection, then a downward check so that L - 1 is known to fail.
inline std::optional<std::size_t> min_length(Protocol protocol, double epsilon, double s_a, double s_v, double r) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("min_length: epsilon must lie in (0, 1]");
    }
    if (!(r >= 0.0 && r < 0.5)) {
        throw std::invalid_argument("min_length: r must lie in [0, 1/2)");
    }
    if (protocol != Protocol::P2 && !(s_a < s_v)) {
        throw std::invalid_argument("min_length: requires s_a < s_v");
    }
    if (!(s_v > 0.0)) {
        throw std::invalid_argument("min_length: requires s_v > 0");
    }
    auto ok = [&](std::size_t L) {
        return std::max(repudiation_bound(protocol, s_a, s_v, L), forging_bound(protocol, s_v, r, L)) <= epsilon;
    };
    if (ok(1)) {
        return 1;
    }
    std::size_t lo = 1;
    std::size_t hi = 2;
    while (!ok(hi)) {
        lo = hi;
        if (hi >= kMaxSolvedLength) {
            return std::nullopt;
        }
        hi = std::min(hi * 2, kMaxSolvedLength);
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    while (hi > 1 && ok(hi - 1)) {
        --hi;
    }
    return hi;
}

struct ThresholdChoice {
    double s_a = 0.0;
    double s_v = 0.0;
    double value = 1.0;  ///< max(repudiation, forging) at the choice
    double repudiation_bound = 1.0;
    double forging_bound = 1.0;
};

namespace detail {

/// Largest s_v for which the forging bound is not vacuous.
inline double forging_vacuity_edge(Protocol p, std::size_t length, double r) {
    if (p == Protocol::P2) {
        return (1.0 - 2.0 * r) / 4.0;
    }
    return static_cast<double>(kept_elements(length, r)) / (8.0 * static_cast<double>(length));
}

inline ThresholdChoice evaluate(Protocol p, std::size_t length, double r, double s_a, double s_v) {
    ThresholdChoice c;
    c.s_a = s_a;
    c.s_v = s_v;
    c.repudiation_bound = repudiation_bound(p, s_a, s_v, length);
    c.forging_bound = forging_bound(p, s_v, r, length);
    c.value = std::max(c.repudiation_bound, c.forging_bound);
    return c;
}

inline constexpr std::size_t kThresholdGrid = 2000;

/// Grid over s_v in (s_a, edge), then bisection on the sign of
/// repudiation - forging inside the bracket around the best grid point.
inline ThresholdChoice optimize_sv(Protocol p, std::size_t length, double r, double s_a) {
    const double edge = std::min(forging_vacuity_edge(p, length, r), 1.0);
    if (!(edge > s_a)) {
        return evaluate(p, length, r, s_a, std::min(std::nextafter(s_a, 1.0), 0.999999));
    }
    const double step = (edge - s_a) / static_cast<double>(kThresholdGrid + 1);
    std::size_t best_i = 1;
    ThresholdChoice best = evaluate(p, length, r, s_a, s_a + step);
    for (std::size_t i = 2; i <= kThresholdGrid; ++i) {
        const auto c = evaluate(p, length, r, s_a, s_a + step * static_cast<double>(i));
        if (c.value < best.value) {
            best = c;
            best_i = i;
        }
    }
    double lo = s_a + step * static_cast<double>(best_i - 1);
    double hi = s_a + step * static_cast<double>(best_i + 1);
    if (best_i == 1) {
        lo = s_a + step * 0.5;
    }
    auto gap = [&](double s_v) {
        const auto c = evaluate(p, length, r, s_a, s_v);
        return c.repudiation_bound - c.forging_bound;
    };
    if (gap(lo) > 0.0 && gap(hi) < 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) > 0.0 ? lo : hi) = mid;
        }
        for (double s_v : {lo, hi}) {
            const auto c = evaluate(p, length, r, s_a, s_v);
            if (c.value < best.value) {
                best = c;
            }
        }
    }
    return best;
}

}  // namespace detail

/// Minimises max(repudiation, forging) over s_v, and over s_a when it is
/// not fixed. P2 has no authentication threshold, so s_a is always 0 there.
inline ThresholdChoice optimize_thresholds(Protocol protocol, std::size_t length, double r,
                                           std::optional<double> fixed_s_a = 0.0) {
    if (length < 1) {
        throw std::invalid_argument("optimize_thresholds: length must be at least 1");
    }
    if (!(r >= 0.0 && r < 0.5)) {
        throw std::invalid_argument("optimize_thresholds: r must lie in [0, 1/2)");
    }
    if (protocol == Protocol::P2) {
        return detail::optimize_sv(protocol, length, r, 0.0);
    }
    if (fixed_s_a) {
        if (!(*fixed_s_a >= 0.0 && *fixed_s_a < 1.0)) {
            throw std::invalid_argument("optimize_thresholds: s_a must lie in [0, 1)");
        }
        return detail::optimize_sv(protocol, length, r, *fixed_s_a);
    }
    const double edge = detail::forging_vacuity_edge(protocol, length, r);
    ThresholdChoice best = detail::optimize_sv(protocol, length, r, 0.0);
    constexpr int kSaGrid = 40;
    for (int i = 1; i < kSaGrid; ++i) {
        const double s_a = edge * static_cast<double>(i) / kSaGrid;
        const auto c = detail::optimize_sv(protocol, length, r, s_a);
        if (c.value < best.value) {
            best = c;
        }
    }
    return best;
}

}  // namespace qds
