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
#include <cmath>
#include <cstddef>
#include <future>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleport/cli/config.hpp"
#include "teleport/error.hpp"
#include "teleport/freqgrid.hpp"
#include "teleport/oracle.hpp"
#include "teleport/povm.hpp"
#include "teleport/scheme.hpp"
#include "teleport/serialize.hpp"
#include "teleport/states.hpp"

namespace teleport::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

enum class Format { Csv, Json };

struct CommandResult {
    int exit_code = kOk;
    std::string output;
};

inline Format resolve_format(const RunConfig &cfg, Format fallback) {
    if (!cfg.output_format) {
        return fallback;
    }
    return *cfg.output_format == "csv" ? Format::Csv : Format::Json;
}

inline std::string dump(const Json &j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

inline CommandResult cmd_teleport(const RunConfig &cfg) {
    validate(cfg);
    const SinglePhotonAmplitude packet = cfg.make_packet();
    if (resolve_format(cfg, Format::Json) == Format::Csv) {
        const auto dist = outcome_distribution(epr_state(cfg.grid(), cfg.epr_spec()), packet);
        return {kOk, distribution_csv(dist)};
    }
    const ProtocolRecord rec = teleport_once(cfg.epr_spec(), packet, cfg.outcome_policy());
    return {kOk, dump(to_json(rec))};
}

/// One row per detuning d: outcome (t, Omega - d) conditioned, then corrected.
inline std::vector<DetuningRow> detuning_rows(const RunConfig &cfg) {
    const SinglePhotonAmplitude packet = cfg.make_packet();
    const FrequencyGrid grid = cfg.grid();
    const TwoChannelAmplitude epr = epr_state(grid, cfg.epr_spec());
    const double total = outcome_distribution(epr, packet).total();
    const DensityMatrix reference = density_from_amplitude(packet, 0.0);
    const double t = cfg.policy == "fixed" ? cfg.outcome_t : 0.0;

    auto row_for = [&](double detuning) {
        const PovmOutcome outcome = PovmOutcome::at(grid, t, cfg.pump_frequency() - detuning);
        DetuningRow row{detuning, outcome_weight(epr, packet, outcome) / total, 0.0, 0.0};
        if (row.weight > 0.0) {
            const DensityMatrix before = condition_on_outcome(epr, packet, outcome);
            const double omega_plus = SumFrequencyGrid(grid).node(outcome.omega_plus_index);
            row.fidelity_before = fidelity(before, reference);
            row.fidelity_after =
                fidelity(phase_correct(before, ClassicalMessage::fired_at(outcome.t, omega_plus)), reference);
        }
        return row;
    };

    // Points run concurrently; rows come back in parameter order.
    std::vector<std::future<DetuningRow>> pending;
    for (double d : cfg.detunings()) {
        pending.push_back(std::async(std::launch::async, row_for, d));
    }
    std::vector<DetuningRow> rows;
    rows.reserve(pending.size());
    for (auto &f : pending) {
        rows.push_back(f.get());
    }
    return rows;
}

inline CommandResult cmd_sweep(const RunConfig &cfg) {
    validate(cfg);
    const auto rows = detuning_rows(cfg);
    if (resolve_format(cfg, Format::Csv) == Format::Csv) {
        return {kOk, detuning_sweep_csv(rows)};
    }
    Json arr = Json::array();
    for (const auto &r : rows) {
        arr.push_back(to_json(r));
    }
    return {kOk, dump(arr)};
}

inline CommandResult cmd_scheme(const RunConfig &cfg) {
    validate(cfg);
    if (resolve_format(cfg, Format::Json) == Format::Csv) {
        const SchemeConfig base = cfg.scheme_config(cfg.chi.front());
        std::vector<SchemeResult> rows;
        for (double d : cfg.detunings()) {
            rows.push_back(detune_detector(base, cfg.pump_frequency() - d));
        }
        return {kOk, scheme_sweep_csv(rows)};
    }
    Json runs = Json::array();
    std::vector<std::string> warnings;
    for (double chi : cfg.chi) {
        const SchemeResult res = run_scheme(cfg.scheme_config(chi));
        runs.push_back(to_json(res));
        warnings = res.warnings;
    }
    Json out = {{"runs", runs}, {"warnings", warnings}};
    std::set<double> distinct(cfg.chi.begin(), cfg.chi.end());
    if (distinct.size() >= 2) {
        out["chi_exponent"] = chi_scaling_exponent(cfg.scheme_config(cfg.chi.front()), cfg.chi);
    }
    return {kOk, dump(out)};
}

// ---------------------------------------------------------------------------
// Invariant checks

struct CheckResult {
    std::string name;
    std::string status; // pass | fail | skipped
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

namespace detail {

inline CheckResult measured(std::string name, double value, double tolerance, std::string detail = {}) {
    const bool ok = std::isfinite(value) && value <= tolerance;
    return {std::move(name), ok ? "pass" : "fail", value, tolerance, std::move(detail)};
}

inline CheckResult skipped(std::string name, std::string why) {
    return {std::move(name), "skipped", 0.0, 0.0, std::move(why)};
}

inline double max_entry_diff(const CMatrix &a, const CMatrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace detail

/// Runs the invariant suite for `cfg`. Oracle checks are skipped above n = 8.
inline std::vector<CheckResult> run_checks(const RunConfig &cfg) {
    using detail::measured;
    std::vector<CheckResult> out;
    const FrequencyGrid grid = cfg.grid();
    const SinglePhotonAmplitude packet = cfg.make_packet();
    const TwoChannelAmplitude epr = epr_state(grid, cfg.epr_spec());
    const TimeGrid full = TimeGrid::dual_of(grid);
    const TimeGrid times = cfg.truncate_time_grid ? full.truncated(std::max<std::size_t>(1, full.size() / 2)) : full;
    const SumFrequencyGrid sums(grid);
    const std::size_t pump = *sums.find_node(cfg.pump_frequency());
    const std::string time_note = cfg.truncate_time_grid ? "truncated time grid" : "";

    const double fast_defect = completeness_defect(grid, times);
    out.push_back(measured("completeness", fast_defect, 1e-8, time_note));

    {
        const auto dist = outcome_distribution(epr, packet, times);
        const double expected = epr.norm_squared() * packet.norm_squared();
        out.push_back(measured("total_probability", std::abs(dist.total() - expected) / expected, 1e-8, time_note));
    }

    {
        const auto dist = outcome_distribution(epr, packet, full);
        const std::size_t mid = grid.size() / 2;
        const auto other = monochromatic_state(grid, grid.node(mid));
        const auto other_dist = outcome_distribution(epr, other, full);
        double dev = 0.0;
        const double ref = dist.normalized(0, pump);
        for (std::size_t k = 0; k < full.size(); ++k) {
            dev = std::max(dev, std::abs(dist.normalized(k, pump) - ref) / ref);
            dev = std::max(dev, std::abs(other_dist.normalized(k, pump) - ref) / ref);
        }
        out.push_back(measured("no_information", dev, 1e-12,
                               "t-uniformity and packet independence at Omega_+ = Omega"));
    }

    {
        const DensityMatrix reference = density_from_amplitude(packet, 0.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < full.size(); ++k) {
            const PovmOutcome o{full.node(k), pump};
            const auto before = condition_on_outcome(epr, packet, o);
            const auto after = phase_correct(before, ClassicalMessage::fired_at(o.t, sums.node(pump)));
            worst = std::max(worst, 1.0 - fidelity(after, reference));
        }
        out.push_back(measured("ideal_teleportation", worst, 1e-10, "1 - min fidelity after correction"));
    }

    {
        CMatrix acc = CMatrix::Zero(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(grid.size()));
        for (std::size_t k = 0; k < full.size(); ++k) {
            for (std::size_t m = 0; m < sums.size(); ++m) {
                const PovmOutcome o{full.node(k), m};
                const double w = outcome_weight(epr, packet, o);
                if (w > 0.0) {
                    acc += w * condition_on_outcome(epr, packet, o).mat();
                }
            }
        }
        const auto reduced = partial_trace(tensor(epr, packet), 1);
        out.push_back(measured("conditioning_consistency", detail::max_entry_diff(acc, reduced.mat()), 1e-9));
    }

    {
        const SchemeConfig base = cfg.scheme_config(cfg.chi.front());
        double worst = 0.0;
        const TwoChannelAmplitude flat = epr_state(grid, EprSpec{cfg.pump_frequency(), std::nullopt});
        for (std::size_t m = 0; m < sums.size(); ++m) {
            const auto res = detune_detector(base, sums.node(m));
            if (!(res.detection_weight > 0.0)) {
                continue;
            }
            const auto povm_state = condition_on_outcome(flat, packet, PovmOutcome{0.0, m});
            worst = std::max(worst, detail::max_entry_diff(res.normalized_state.mat(), povm_state.mat()));
        }
        out.push_back(measured("path_equivalence", worst, 1e-9, "scheme vs POVM at t = 0, flat pair"));
    }

    {
        std::set<double> distinct(cfg.chi.begin(), cfg.chi.end());
        if (distinct.size() < 2) {
            out.push_back(detail::skipped("chi_scaling", "needs at least two distinct chi values"));
        } else {
            const double exponent = chi_scaling_exponent(cfg.scheme_config(cfg.chi.front()), cfg.chi);
            out.push_back(measured("chi_scaling", std::abs(exponent - 4.0), 1e-6, "|exponent - 4|"));
        }
    }

    if (grid.size() > oracle::kMaxCompletenessGrid) {
        out.push_back(detail::skipped("oracle_completeness", "grid larger than 8 nodes"));
        out.push_back(detail::skipped("oracle_equivalence", "grid larger than 8 nodes"));
    } else {
        const double dense = oracle::dense_completeness(grid, times);
        out.push_back(measured("oracle_completeness", std::abs(dense - fast_defect), 1e-10));

        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double worst = 0.0;
        int cases = 0;
        for (int attempt = 0; attempt < 200 && cases < 20; ++attempt) {
            CVector amps(static_cast<Eigen::Index>(grid.size()));
            for (Eigen::Index i = 0; i < amps.size(); ++i) {
                amps[i] = Complex(uni(rng), uni(rng));
            }
            const SinglePhotonAmplitude random_packet =
                cases == 0 ? packet : SinglePhotonAmplitude(grid, amps).normalized();
            const PovmOutcome o{full.node(rng() % full.size()), static_cast<std::size_t>(rng() % sums.size())};
            const double w = outcome_weight(epr, random_packet, o);
            if (!(w > 1e-12)) {
                continue;
            }
            const double dw = oracle::dense_weight(grid, epr, random_packet, o);
            worst = std::max(worst, std::abs(w - dw));
            worst = std::max(worst, detail::max_entry_diff(condition_on_outcome(epr, random_packet, o).mat(),
                                                           oracle::dense_condition(grid, epr, random_packet, o).mat()));
            ++cases;
        }
        out.push_back(measured("oracle_equivalence", worst, 1e-10,
                               std::to_string(cases) + " randomized (packet, outcome) cases"));
    }
    return out;
}

inline CommandResult cmd_check(const RunConfig &cfg) {
    validate(cfg);
    const auto checks = run_checks(cfg);
    const bool passed = std::none_of(checks.begin(), checks.end(),
                                     [](const CheckResult &c) { return c.status == "fail"; });
    const int code = passed ? kOk : kCheckFailed;
    if (resolve_format(cfg, Format::Json) == Format::Csv) {
        std::string csv = "check,status,value,tolerance\n";
        for (const auto &c : checks) {
            csv += c.name + "," + c.status + "," + format_number(c.value) + "," + format_number(c.tolerance) + "\n";
        }
        return {code, csv};
    }
    Json arr = Json::array();
    for (const auto &c : checks) {
        arr.push_back({{"name", c.name},
                       {"status", c.status},
                       {"value", c.value},
                       {"tolerance", c.tolerance},
                       {"detail", c.detail}});
    }
    return {code, dump({{"passed", passed}, {"n_points", cfg.n_points}, {"checks", arr}})};
}

} // namespace teleport::cli
