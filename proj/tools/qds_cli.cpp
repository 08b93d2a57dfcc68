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

// Command-line front end: bounds, solve, optimize, simulate, verify.
// Exit status: 0 success, 1 failed check or unsatisfiable request, 2 usage error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qds/qds.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string protocol;
    std::size_t length = 0;
    double sa = 0.0;
    double sv = 0.0;
    double r = 0.0;
    std::string format = "json";
    std::optional<std::string> out;
    std::string config;  // consumed before parsing
};

qds::ReportFormat parse_format(const std::string &s) {
    return s == "csv" ? qds::ReportFormat::Csv : qds::ReportFormat::Json;
}

qds::Protocol require_protocol(const std::string &s) {
    auto p = qds::parse_protocol(s);
    if (!p) {
        throw UsageError("unknown protocol '" + s + "'");
    }
    return *p;
}

qds::ProtocolParams make_params(const CommonOptions &o) {
    qds::ProtocolParams p{o.length, o.sa, o.sv, o.r};
    if (auto why = p.violation(); !why.empty()) {
        throw UsageError("invalid parameters: " + why);
    }
    return p;
}

void add_config_option(CLI::App *sub, CommonOptions &o) {
    sub->add_option("--config", o.config, "key = value file; command-line flags override it");
}

void add_output_options(CLI::App *sub, CommonOptions &o) {
    sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out, "output path (default: standard output)");
}

/// Splits off `--config PATH` / `--config=PATH` and returns the path.
std::optional<std::string> take_config_path(std::vector<std::string> &args) {
    std::optional<std::string> path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                throw UsageError("--config requires a path");
            }
            path = args[++i];
        } else if (args[i].starts_with("--config=")) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    args = std::move(rest);
    return path;
}

int run(int argc, char **argv) {
    CLI::App app{"Quantum digital signature simulator and security-bound calculator", "qds"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CommonOptions bounds_opt;
    auto *bounds = app.add_subcommand("bounds", "evaluate closed-form security bounds");
    bounds->add_option("--protocol", bounds_opt.protocol)->required()->check(CLI::IsMember({"p1", "p2"}));
    bounds->add_option("--length", bounds_opt.length)->required();
    bounds->add_option("--sa", bounds_opt.sa);
    bounds->add_option("--sv", bounds_opt.sv)->required();
    bounds->add_option("--r", bounds_opt.r)->required();
    add_output_options(bounds, bounds_opt);
    add_config_option(bounds, bounds_opt);

    CommonOptions solve_opt;
    double epsilon = 0.0;
    auto *solve = app.add_subcommand("solve", "smallest signature length meeting a security target");
    solve->add_option("--protocol", solve_opt.protocol)->required()->check(CLI::IsMember({"p1", "p2"}));
    solve->add_option("--epsilon", epsilon)->required();
    solve->add_option("--sa", solve_opt.sa);
    solve->add_option("--sv", solve_opt.sv)->required();
    solve->add_option("--r", solve_opt.r)->required();
    add_config_option(solve, solve_opt);

    CommonOptions opt_opt;
    std::optional<double> opt_sa;
    bool free_sa = false;
    auto *optimize = app.add_subcommand("optimize", "choose thresholds minimising the worst bound");
    optimize->add_option("--protocol", opt_opt.protocol)->required()->check(CLI::IsMember({"p1", "p2"}));
    optimize->add_option("--length", opt_opt.length)->required();
    optimize->add_option("--r", opt_opt.r)->required();
    optimize->add_option("--sa", opt_sa, "fixed authentication threshold (default 0)");
    optimize->add_flag("--free-sa", free_sa, "search over the authentication threshold too");
    add_config_option(optimize, opt_opt);

    CommonOptions sim_opt;
    std::string adversary = "honest";
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::optional<double> target_fraction;
    bool hide_kept_set = false;
    unsigned threads = 0;
    auto *simulate = app.add_subcommand("simulate", "Monte Carlo estimate of honest or adversarial success");
    simulate->add_option("--protocol", sim_opt.protocol)->required()->check(CLI::IsMember({"p1", "p1prime", "p2"}));
    simulate->add_option("--adversary", adversary)->check(CLI::IsMember({"honest", "repudiate", "forge"}));
    simulate->add_option("--length", sim_opt.length)->required();
    simulate->add_option("--sa", sim_opt.sa);
    simulate->add_option("--sv", sim_opt.sv)->required();
    simulate->add_option("--r", sim_opt.r)->required();
    simulate->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed)->required();
    simulate->add_option("--target-fraction", target_fraction, "repudiating Alice's aimed mismatch fraction")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_flag("--hide-kept-set", hide_kept_set, "forging Bob does not learn Charlie's kept set");
    simulate->add_option("--threads", threads, "worker threads (0: all cores); output does not depend on it");
    add_output_options(simulate, sim_opt);
    add_config_option(simulate, sim_opt);

    std::string check = "all";
    std::string verify_config;
    auto *verify = app.add_subcommand("verify", "analytic checks of the forging measurement results");
    verify->add_option("--check", check)->check(CLI::IsMember({"cmin", "cmax", "pauli", "costmatrix", "b92", "all"}));
    verify->add_option("--config", verify_config);

    std::vector<std::string> args(argv + 1, argv + argc);
    if (auto path = take_config_path(args)) {
        const auto entries = qds::parse_config_file(*path);
        CLI::App *target = args.empty() ? nullptr : app.get_subcommand_no_throw(args.front());
        if (target == nullptr) {
            throw UsageError("--config must follow a subcommand");
        }
        qds::ConfigEntries usable;
        for (const auto &entry : entries) {
            if (target->get_option_no_throw("--" + entry.first) != nullptr) {
                usable.push_back(entry);
                continue;
            }
            bool known_elsewhere = false;
            for (const auto *sub : app.get_subcommands({})) {
                known_elsewhere = known_elsewhere || sub->get_option_no_throw("--" + entry.first) != nullptr;
            }
            if (!known_elsewhere) {
                throw UsageError("config file: unknown key '" + entry.first + "'");
            }
        }
        auto injected = qds::config_to_args(usable);
        args.insert(args.begin() + 1, injected.begin(), injected.end());
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        std::cerr << "qds: " << e.what() << "\n" << app.help() << std::flush;
        return kExitUsage;
    }

    if (bounds->parsed()) {
        const auto report = qds::bound_report(require_protocol(bounds_opt.protocol), make_params(bounds_opt));
        qds::emit_report(qds::render(report, parse_format(bounds_opt.format)), bounds_opt.out);
        return kExitOk;
    }
    if (solve->parsed()) {
        const auto protocol = require_protocol(solve_opt.protocol);
        if (!(epsilon > 0.0 && epsilon <= 1.0)) {
            throw UsageError("--epsilon must lie in (0, 1]");
        }
        if (protocol == qds::Protocol::P1 && !(solve_opt.sa < solve_opt.sv)) {
            throw UsageError("--sa must be smaller than --sv");
        }
        if (!(solve_opt.sv > 0.0) || !(solve_opt.r >= 0.0 && solve_opt.r < 0.5)) {
            throw UsageError("need --sv > 0 and --r in [0, 1/2)");
        }
        const auto L = qds::min_length(protocol, epsilon, solve_opt.sa, solve_opt.sv, solve_opt.r);
        if (!L) {
            std::cerr << "qds: unsatisfiable: no signature length up to " << qds::kMaxSolvedLength
                      << " meets epsilon (a bound is vacuous for these thresholds)\n";
            return kExitFailure;
        }
        std::cout << "length = " << *L << "\n"
                  << "repudiation_bound = " << qds::repudiation_bound(protocol, solve_opt.sa, solve_opt.sv, *L) << "\n"
                  << "forging_bound = " << qds::forging_bound(protocol, solve_opt.sv, solve_opt.r, *L) << "\n";
        return kExitOk;
    }
    if (optimize->parsed()) {
        const auto protocol = require_protocol(opt_opt.protocol);
        if (opt_opt.length < 1 || !(opt_opt.r >= 0.0 && opt_opt.r < 0.5)) {
            throw UsageError("need --length >= 1 and --r in [0, 1/2)");
        }
        std::optional<double> fixed = free_sa ? std::nullopt : std::optional<double>(opt_sa.value_or(0.0));
        const auto c = qds::optimize_thresholds(protocol, opt_opt.length, opt_opt.r, fixed);
        std::cout << "sa = " << c.s_a << "\n"
                  << "sv = " << c.s_v << "\n"
                  << "repudiation_bound = " << c.repudiation_bound << "\n"
                  << "forging_bound = " << c.forging_bound << "\n"
                  << "max_bound = " << c.value << "\n";
        return kExitOk;
    }
    if (simulate->parsed()) {
        qds::Scenario sc;
        sc.protocol = require_protocol(sim_opt.protocol);
        sc.params = make_params(sim_opt);
        sc.adversary.role = *qds::parse_role(adversary);
        sc.adversary.target_fraction = target_fraction;
        sc.adversary.knows_kept_set = !hide_kept_set;
        sc.trials = trials;
        sc.master_seed = seed;
        const qds::SimulationReport report{sc, qds::run_trials(sc, threads)};
        qds::emit_report(qds::render(report, parse_format(sim_opt.format)), sim_opt.out);
        return kExitOk;
    }
    if (verify->parsed()) {
        std::vector<qds::CheckName> selected;
        if (check == "all") {
            selected.assign(qds::kAllChecks.begin(), qds::kAllChecks.end());
        } else {
            selected.push_back(*qds::parse_check_name(check));
        }
        bool all_ok = true;
        for (auto name : selected) {
            const auto rep = qds::verify_check(name);
            all_ok = all_ok && rep.passed;
            std::cout << qds::to_string(name) << ": " << (rep.passed ? "PASS" : "FAIL") << " value=" << rep.value
                      << " | " << rep.detail << "\n";
        }
        return all_ok ? kExitOk : kExitFailure;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError &e) {
        std::cerr << "qds: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "qds: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "qds: " << e.what() << "\n";
        return kExitFailure;
    }
}
