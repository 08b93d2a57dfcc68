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
 * JSON and CSV serialisation of simulation and bound reports. Output is a
 * pure function of the report, so identical inputs give identical bytes.
 */

#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "qds/adversaries.hpp"
#include "qds/analysis.hpp"
#include "qds/harness.hpp"
#include "qds/protocols.hpp"

namespace qds {

using ordered_json = nlohmann::ordered_json;

enum class ReportFormat : std::uint8_t { Json, Csv };

inline std::optional<Protocol> parse_protocol(std::string_view s) {
    for (Protocol p : {Protocol::P1, Protocol::P1Prime, Protocol::P2}) {
        if (to_string(p) == s) {
            return p;
        }
    }
    return std::nullopt;
}

inline std::optional<Role> parse_role(std::string_view s) {
    for (Role r : {Role::Honest, Role::RepudiateAlice, Role::ForgeBob}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    return std::nullopt;
}

/// A simulated scenario together with its statistics.
struct SimulationReport {
    Scenario scenario;
    TrialStats stats;
};

inline ordered_json params_json(const ProtocolParams &p) {
    ordered_json j;
    j["length"] = p.length;
    j["sa"] = p.s_a;
    j["sv"] = p.s_v;
    j["r"] = p.r;
    return j;
}

inline ordered_json to_json(const SimulationReport &rep) {
    const auto &sc = rep.scenario;
    const auto &st = rep.stats;
    ordered_json j;
    j["protocol"] = std::string(to_string(sc.protocol));
    j["adversary"] = std::string(to_string(sc.adversary.role));
    j["params"] = params_json(sc.params);
    j["trials"] = st.trials;
    j["seed"] = sc.master_seed;
    j["aborts"] = st.aborts;
    j["successes"] = st.successes;
    j["rate"] = st.rate;
    j["ci_low"] = st.ci_low;
    j["ci_high"] = st.ci_high;
    j["bound"] = st.bound;
    ordered_json hist = ordered_json::object();
    for (const auto &[k, v] : st.mismatch_histogram) {
        hist[std::to_string(k)] = v;
    }
    j["mismatch_histogram"] = std::move(hist);
    return j;
}

/// Inverse of to_json; throws nlohmann::json::exception or
/// std::invalid_argument on malformed input.
inline SimulationReport simulation_report_from_json(const nlohmann::json &j) {
    SimulationReport rep;
    auto &sc = rep.scenario;
    auto &st = rep.stats;
    const auto protocol = parse_protocol(j.at("protocol").get<std::string>());
    const auto role = parse_role(j.at("adversary").get<std::string>());
    if (!protocol || !role) {
        throw std::invalid_argument("report: unknown protocol or adversary");
    }
    sc.protocol = *protocol;
    sc.adversary.role = *role;
    const auto &p = j.at("params");
    sc.params.length = p.at("length").get<std::size_t>();
    sc.params.s_a = p.at("sa").get<double>();
    sc.params.s_v = p.at("sv").get<double>();
    sc.params.r = p.at("r").get<double>();
    st.trials = j.at("trials").get<std::uint64_t>();
    sc.trials = st.trials;
    sc.master_seed = j.at("seed").get<std::uint64_t>();
    st.aborts = j.at("aborts").get<std::uint64_t>();
    st.successes = j.at("successes").get<std::uint64_t>();
    st.rate = j.at("rate").get<double>();
    st.ci_low = j.at("ci_low").get<double>();
    st.ci_high = j.at("ci_high").get<double>();
    st.bound = j.at("bound").get<double>();
    for (const auto &[k, v] : j.at("mismatch_histogram").items()) {
        st.mismatch_histogram[std::stoull(k)] = v.get<double>();
    }
    return rep;
}

inline ordered_json to_json(const BoundReport &b) {
    ordered_json j;
    j["protocol"] = std::string(to_string(b.protocol));
    j["params"] = params_json(b.params);
    j["K"] = b.K;
    j["repudiation_bound"] = b.repudiation_bound;
    j["forging_bound"] = b.forging_bound;
    j["abort_bound"] = b.abort_bound;
    j["repudiation_vacuous"] = b.repudiation_vacuous;
    j["forging_vacuous"] = b.forging_vacuous;
    return j;
}

namespace detail {

/// Shortest representation that round-trips.
inline std::string format_exact(double x) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

/// Scientific notation with 10 significant digits.
inline std::string format_probability(double x) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 9);
    return std::string(buf.data(), res.ptr);
}

}  // namespace detail

inline constexpr std::string_view kSimulationCsvHeader =
    "protocol,adversary,length,sa,sv,r,trials,seed,aborts,successes,rate,ci_low,ci_high,bound";

inline constexpr std::string_view kBoundsCsvHeader =
    "protocol,length,sa,sv,r,K,repudiation_bound,forging_bound,abort_bound";

inline std::string csv_row(const SimulationReport &rep) {
    using detail::format_exact;
    using detail::format_probability;
    const auto &sc = rep.scenario;
    const auto &st = rep.stats;
    std::string row;
    row += std::string(to_string(sc.protocol)) + ',' + std::string(to_string(sc.adversary.role)) + ',';
    row += std::to_string(sc.params.length) + ',' + format_exact(sc.params.s_a) + ',' + format_exact(sc.params.s_v) +
           ',' + format_exact(sc.params.r) + ',';
    row += std::to_string(st.trials) + ',' + std::to_string(sc.master_seed) + ',' + std::to_string(st.aborts) + ',' +
           std::to_string(st.successes) + ',';
    row += format_probability(st.rate) + ',' + format_probability(st.ci_low) + ',' + format_probability(st.ci_high) +
           ',' + format_probability(st.bound);
    return row;
}

inline std::string csv_row(const BoundReport &b) {
    using detail::format_exact;
    using detail::format_probability;
    std::string row;
    row += std::string(to_string(b.protocol)) + ',' + std::to_string(b.params.length) + ',' +
           format_exact(b.params.s_a) + ',' + format_exact(b.params.s_v) + ',' + format_exact(b.params.r) + ',';
    row += std::to_string(b.K) + ',' + format_probability(b.repudiation_bound) + ',' +
           format_probability(b.forging_bound) + ',' + format_probability(b.abort_bound);
    return row;
}

template <class Report>
std::string render(const Report &rep, ReportFormat format) {
    if (format == ReportFormat::Json) {
        return to_json(rep).dump(2) + "\n";
    }
    const std::string_view header =
        std::is_same_v<Report, BoundReport> ? kBoundsCsvHeader : kSimulationCsvHeader;
    return std::string(header) + "\n" + csv_row(rep) + "\n";
}

/// Writes `content` to `path`, or to standard output when no path is given.
inline void emit_report(const std::string &content, const std::optional<std::string> &path) {
    if (!path) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(*path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open report file '" + *path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing report file '" + *path + "'");
    }
}

}  // namespace qds
