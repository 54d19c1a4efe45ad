// Copyright 2026 The packet-teleport Authors
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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "teleport/cli/commands.hpp"
#include "teleport/cli/config.hpp"
#include "teleport/error.hpp"

namespace teleport::cli {

inline std::string error_json(const Error &e) {
    Json body = {{"component", e.component()}, {"kind", std::string(to_string(e.kind()))},
                 {"message", e.what()}};
    body["field"] = e.field().empty() ? Json(nullptr) : Json(e.field());
    return Json{{"error", body}}.dump() + "\n";
}

struct CliOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::vector<double> chi;
    std::optional<double> detuning_min;
    std::optional<double> detuning_max;
    std::optional<std::size_t> detuning_steps;
    bool truncate_time_grid = false;
};

inline RunConfig load_config(const CliOptions &opts) {
    RunConfig cfg;
    if (opts.config_path) {
        std::ifstream in(*opts.config_path);
        if (!in) {
            throw config_error("config", "cannot open " + *opts.config_path);
        }
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::parse_error &e) {
            throw config_error("config", std::string("invalid JSON: ") + e.what());
        }
        cfg = parse_config(j);
    }
    if (opts.out_path) cfg.output_path = opts.out_path;
    if (opts.format) cfg.output_format = opts.format;
    if (opts.seed) {
        cfg.policy = "sample";
        cfg.seed = *opts.seed;
    }
    if (!opts.chi.empty()) cfg.chi = opts.chi;
    if (opts.detuning_min) cfg.sweep.detuning_min = *opts.detuning_min;
    if (opts.detuning_max) cfg.sweep.detuning_max = *opts.detuning_max;
    if (opts.detuning_steps) cfg.sweep.steps = *opts.detuning_steps;
    cfg.truncate_time_grid = cfg.truncate_time_grid || opts.truncate_time_grid;
    return cfg;
}

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
inline int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Single-photon packet teleportation simulator"};
    app.require_subcommand(1);
    CliOptions opts;

    auto add_common = [&opts](CLI::App *sub) {
        sub->add_option("--config", opts.config_path, "JSON run configuration");
        sub->add_option("--out", opts.out_path, "Write output to this file instead of stdout");
        sub->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", opts.seed, "Sample the outcome with this seed");
        sub->add_option("--chi", opts.chi, "Coupling value (repeatable)")->take_all();
        sub->add_option("--detuning-min", opts.detuning_min, "First detuning of the sweep");
        sub->add_option("--detuning-max", opts.detuning_max, "Last detuning of the sweep");
        sub->add_option("--detuning-steps", opts.detuning_steps, "Number of sweep points");
        sub->add_flag("--truncate-time-grid", opts.truncate_time_grid,
                      "Keep only half of the time nodes (completeness demo)");
    };
    auto *teleport_cmd = app.add_subcommand("teleport", "Run one protocol instance, JSON record");
    auto *sweep_cmd = app.add_subcommand("sweep", "Fidelity against Omega_+ detuning, CSV");
    auto *scheme_cmd = app.add_subcommand("scheme", "Two-crystal setup at leading order");
    auto *check_cmd = app.add_subcommand("check", "Invariant and oracle checks");
    for (auto *sub : {teleport_cmd, sweep_cmd, scheme_cmd, check_cmd}) {
        add_common(sub);
    }

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << error_json(Error(ErrorKind::Config, "cli", e.what(), "arguments"));
        return kConfigError;
    }

    try {
        const RunConfig cfg = load_config(opts);
        CommandResult result;
        if (teleport_cmd->parsed()) {
            result = cmd_teleport(cfg);
        } else if (sweep_cmd->parsed()) {
            result = cmd_sweep(cfg);
        } else if (scheme_cmd->parsed()) {
            result = cmd_scheme(cfg);
        } else {
            result = cmd_check(cfg);
        }
        if (cfg.output_path) {
            std::ofstream file(*cfg.output_path, std::ios::binary);
            if (!file || !(file << result.output)) {
                throw config_error("output.path", "cannot write " + *cfg.output_path);
            }
        } else {
            out << result.output;
        }
        return result.exit_code;
    } catch (const Error &e) {
        err << error_json(e);
        return kConfigError;
    }
}

} // namespace teleport::cli
