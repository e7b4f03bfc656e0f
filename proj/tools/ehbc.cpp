// SPDX-License-Identifier: Apache-2.0
//
// ehbc: scheduling for energy-harvesting MIMO broadcast transmitters
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end: solve, simulate, sweep, p-o, level.
// Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 solver failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ehbc/config.hpp"
#include "ehbc/csv.hpp"
#include "ehbc/errors.hpp"
#include "ehbc/experiment.hpp"
#include "ehbc/model.hpp"
#include "ehbc/offline.hpp"
#include "ehbc/online.hpp"
#include "ehbc/single_epoch.hpp"

namespace {

using namespace ehbc;

struct Overrides {
    std::string config;
    bool profile = false;
    std::optional<double> eta, eavg, deadline, epsilon, peak;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<unsigned> threads;
    std::string policies;
};

void add_scenario_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    cmd->add_flag("--profile", o.profile, "use the deterministic six-arrival profile");
    cmd->add_option("--eta", o.eta, "battery efficiency");
    cmd->add_option("--eavg", o.eavg, "mean harvested amount per arrival (J)");
    cmd->add_option("--deadline", o.deadline, "deadline T (s)");
    cmd->add_option("--epsilon", o.epsilon, "circuit power (J/s)");
    cmd->add_option("--p-peak", o.peak, "peak transmit power (J/s)");
    cmd->add_option("--seed", o.seed, "master seed");
}

void add_run_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--policies", o.policies, "comma-separated policy list");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials");
    cmd->add_option("--threads", o.threads, "worker threads");
}

ExperimentSpec build_spec(const Overrides& o)
{
    ExperimentSpec spec = o.config.empty() ? ExperimentSpec{} : load_config(o.config);
    Parameters& p = spec.params;
    if (o.profile) {
        const double horizon = p.scenario.horizon;
        p.scenario = deterministic_profile();
        p.scenario.horizon = std::max(horizon, p.scenario.horizon);
    }
    if (o.eta)
        p.storage.efficiency = *o.eta;
    if (o.eavg)
        p.scenario.mean_amount = *o.eavg;
    if (o.deadline)
        p.scenario.horizon = *o.deadline;
    if (o.epsilon)
        p.circuit = *o.epsilon;
    if (o.peak)
        p.peak_power = *o.peak;
    if (o.seed)
        spec.seed = *o.seed;
    if (o.trials)
        spec.trials = *o.trials;
    if (o.threads)
        spec.threads = *o.threads;
    if (!o.policies.empty())
        spec.policies = parse_policy_list(o.policies);
    return spec;
}

BroadcastModel model_for(const Overrides& o)
{
    if (o.config.empty())
        return BroadcastModel::scalar({1.0}, {1.0});
    const ExperimentSpec spec = load_config(o.config);
    const TrialInputs in = trial_inputs(spec.params, o.seed.value_or(spec.seed), 0);
    return BroadcastModel::from_channels(in.channels);
}

std::vector<double> parse_values(const std::string& text)
{
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty())
            continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size())
            throw ValidationError("cannot parse sweep value '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw ValidationError("sweep value grid is empty");
    return out;
}

int run(int argc, char** argv)
{
    CLI::App app{"ehbc: scheduling for energy-harvesting MIMO broadcast transmitters"};
    app.require_subcommand(1);

    Overrides solve_o;
    std::string mode, out = "-", certificate_out, trace_out;
    auto* solve = app.add_subcommand("solve", "schedule one instance with one policy");
    add_scenario_options(solve, solve_o);
    solve->add_option("--mode", mode, "policy")->required();
    solve->add_option("--out", out, "schedule CSV (- for stdout)");
    solve->add_option("--certificate", certificate_out, "dual certificate CSV (offline modes)");
    solve->add_option("--trace", trace_out, "cumulative throughput CSV");

    Overrides sim_o;
    std::string sim_out = "-", sim_trace;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of policies");
    add_scenario_options(simulate, sim_o);
    add_run_options(simulate, sim_o);
    simulate->add_option("--out", sim_out, "report CSV (- for stdout)");
    simulate->add_option("--trace", sim_trace, "trace CSV of trial 0 for every policy");

    Overrides sweep_o;
    std::string axis, values, sweep_out = "-";
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo comparison along one parameter axis");
    add_scenario_options(sweep, sweep_o);
    add_run_options(sweep, sweep_o);
    sweep->add_option("--axis", axis, "eta | eavg | deadline | epsilon")->required();
    sweep->add_option("--values", values, "comma-separated grid")->required();
    sweep->add_option("--out", sweep_out, "report CSV (- for stdout)");

    Overrides po_o;
    double po_eps = 1;
    int po_points = 41;
    std::string po_out = "-";
    auto* po = app.add_subcommand("p-o", "energy-efficient power and the rate-per-joule curve");
    po->add_option("--epsilon", po_eps, "circuit power (J/s)")->required();
    po->add_option("--config", po_o.config, "JSON configuration (unit scalar channel if absent)")
        ->check(CLI::ExistingFile);
    po->add_option("--seed", po_o.seed, "channel draw seed");
    po->add_option("--points", po_points, "curve samples on [0, p_peak]")->check(CLI::Range(2, 100000));
    po->add_option("--p-peak", po_o.peak, "upper end of the curve (J/s)");
    po->add_option("--out", po_out, "CSV (- for stdout)");

    Overrides level_o;
    double budget = 1;
    std::string level_out = "-";
    auto* level = app.add_subcommand("level", "water level and per-user powers for a sum-power budget");
    level->add_option("--budget", budget, "sum power (J/s)")->required()->check(CLI::NonNegativeNumber);
    level->add_option("--config", level_o.config, "JSON configuration (unit scalar channel if absent)")
        ->check(CLI::ExistingFile);
    level->add_option("--seed", level_o.seed, "channel draw seed");
    level->add_option("--out", level_out, "CSV (- for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (solve->parsed()) {
        const ExperimentSpec spec = build_spec(solve_o);
        const PolicyKind kind = parse_policy(mode);
        ExperimentSpec check = spec;
        check.policies = {kind};
        check.trials = 1;
        check.validate();
        const TrialInputs in = trial_inputs(spec.params, spec.seed, 0);
        if (is_offline(kind)) {
            const BroadcastModel model = BroadcastModel::from_channels(in.channels);
            OfflineProblem problem;
            problem.timeline = in.timeline;
            problem.storage = spec.params.storage;
            problem.peak_power = spec.params.peak_power;
            problem.circuit.assign(in.timeline.epoch_count(), 0.0);
            if (kind == PolicyKind::OfflineCircuit)
                problem.circuit.assign(in.timeline.epoch_count(), spec.params.circuit);
            if (kind == PolicyKind::OfflineGeneral)
                problem.circuit = in.circuit_draws;
            const OfflineSolution sol = solve_offline(model, problem);
            emit_csv(out, [&](std::ostream& s) { write_schedule_csv(s, in.timeline, sol.schedule); });
            if (!certificate_out.empty())
                emit_csv(certificate_out, [&](std::ostream& s) { write_certificate_csv(s, sol.certificate); });
            if (!trace_out.empty())
                emit_csv(trace_out, [&](std::ostream& s) {
                    write_trace_csv(s, {{mode, schedule_trace(in.timeline, sol.schedule)}});
                });
        } else {
            if (!certificate_out.empty())
                throw ValidationError("--certificate applies to offline modes only");
            const PolicyOutcome o = run_policy(kind, spec.params, in);
            emit_csv(out, [&](std::ostream& s) { write_schedule_csv(s, in.timeline, o.schedule); });
            if (!trace_out.empty())
                emit_csv(trace_out, [&](std::ostream& s) { write_trace_csv(s, {{mode, o.trace}}); });
        }
        return 0;
    }

    if (simulate->parsed() || sweep->parsed()) {
        const bool is_sweep = sweep->parsed();
        ExperimentSpec spec = build_spec(is_sweep ? sweep_o : sim_o);
        if (is_sweep) {
            spec.axis = parse_axis(axis);
            spec.values = parse_values(values);
        }
        if (spec.policies.empty())
            throw ValidationError("no policies given (use --policies or the 'policies' configuration key)");
        const ExperimentReport report = run_experiment(spec);
        emit_csv(is_sweep ? sweep_out : sim_out, [&](std::ostream& s) { write_report_csv(s, report); });
        if (!is_sweep && !sim_trace.empty()) {
            const Parameters params = spec.params;
            const TrialInputs in = trial_inputs(params, spec.seed, 0);
            std::vector<NamedTrace> traces;
            for (PolicyKind k : spec.policies)
                traces.push_back({to_string(k), run_policy(k, params, in).trace});
            emit_csv(sim_trace, [&](std::ostream& s) { write_trace_csv(s, traces); });
        }
        return 0;
    }

    if (po->parsed()) {
        const BroadcastModel model = model_for(po_o);
        const double peak = po_o.peak.value_or(default_parameters().peak_power);
        if (!(peak > 0))
            throw ValidationError("--p-peak must be positive");
        const double p_o = solve_p_o(model.curve, po_eps);
        emit_csv(po_out, [&](std::ostream& s) {
            s << "kind,power,efficiency\n";
            s << "p_o," << format_number(p_o) << ',' << format_number(energy_efficiency(model.curve, p_o, po_eps))
              << '\n';
            for (int j = 0; j < po_points; ++j) {
                const double p = peak * j / (po_points - 1);
                s << "curve," << format_number(p) << ',' << format_number(energy_efficiency(model.curve, p, po_eps))
                  << '\n';
            }
        });
        return 0;
    }

    if (level->parsed()) {
        const BroadcastModel model = model_for(level_o);
        const double lvl = model.curve.level_at_power(budget);
        const CovarianceSet<double> covs = model.covariances(budget);
        emit_csv(level_out, [&](std::ostream& s) {
            s << "quantity,value\n";
            s << "budget," << format_number(budget) << '\n';
            s << "level," << format_number(lvl) << '\n';
            s << "weighted_rate," << format_number(model.curve.rate(budget)) << '\n';
            for (std::size_t k = 0; k < covs.size(); ++k)
                s << "power_user_" << k + 1 << ',' << format_number(covs[k].trace().real()) << '\n';
        });
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const ehbc::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ehbc::RankError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ehbc::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const ehbc::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
