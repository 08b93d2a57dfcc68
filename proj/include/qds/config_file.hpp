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

#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qds {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

namespace detail {
inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}
}  // namespace detail

/// Parses `key = value` lines. '#' starts a comment; blank lines are skipped.
/// Keys are long flag names without the leading dashes.
inline ConfigEntries parse_config_text(std::string_view text) {
    ConfigEntries entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = detail::trim(std::string_view(stripped).substr(0, eq));
        std::string value = detail::trim(std::string_view(stripped).substr(eq + 1));
        if (key.starts_with("--")) {
            key.erase(0, 2);
        }
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        }
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

inline ConfigEntries parse_config_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read config file '" + path + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

/// Config entries as command-line tokens ("--key", "value"). Placed before
/// the user's own flags so that the latter win.
inline std::vector<std::string> config_to_args(const ConfigEntries &entries) {
    std::vector<std::string> args;
    for (const auto &[k, v] : entries) {
        args.push_back("--" + k);
        args.push_back(v);
    }
    return args;
}

}  // namespace qds
