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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace qds {

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Exact two-sided Clopper-Pearson interval for a binomial proportion.
inline Interval confidence_interval(std::uint64_t successes, std::uint64_t trials, double level = 0.99) {
    if (successes > trials) {
        throw std::invalid_argument("confidence_interval: successes exceed trials");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence_interval: level must lie in (0, 1)");
    }
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double alpha = 1.0 - level;
    const double x = static_cast<double>(successes);
    const double n = static_cast<double>(trials);
    Interval ci;
    ci.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
    ci.high = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
    return ci;
}

using Histogram = std::map<std::int64_t, std::uint64_t>;

/// p-value of the chi-square test that two samples share one distribution.
/// Adjacent categories are pooled until every expected count is at least 5.
inline double chi_square_homogeneity(const Histogram &a, const Histogram &b) {
    std::map<std::int64_t, std::pair<double, double>> joint;
    double na = 0.0;
    double nb = 0.0;
    for (const auto &[k, v] : a) {
        joint[k].first += static_cast<double>(v);
        na += static_cast<double>(v);
    }
    for (const auto &[k, v] : b) {
        joint[k].second += static_cast<double>(v);
        nb += static_cast<double>(v);
    }
    if (na == 0.0 || nb == 0.0) {
        throw std::invalid_argument("chi_square_homogeneity: empty sample");
    }
    const double n = na + nb;
    std::vector<std::pair<double, double>> bins;
    std::pair<double, double> acc{0.0, 0.0};
    auto expected_ok = [&](const std::pair<double, double> &c) {
        const double tot = c.first + c.second;
        return tot * na / n >= 5.0 && tot * nb / n >= 5.0;
    };
    for (const auto &[k, c] : joint) {
        acc.first += c.first;
        acc.second += c.second;
        if (expected_ok(acc)) {
            bins.push_back(acc);
            acc = {0.0, 0.0};
        }
    }
    if (acc.first + acc.second > 0.0) {
        if (bins.empty()) {
            bins.push_back(acc);
        } else {
            bins.back().first += acc.first;
            bins.back().second += acc.second;
        }
    }
    if (bins.size() < 2) {
        return 1.0;
    }
    double stat = 0.0;
    for (const auto &[oa, ob] : bins) {
        const double tot = oa + ob;
        const double ea = tot * na / n;
        const double eb = tot * nb / n;
        stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    boost::math::chi_squared dist(static_cast<double>(bins.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace qds
