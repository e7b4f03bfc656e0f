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

#include "ehbc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "ehbc/errors.hpp"
#include "ehbc/offline.hpp"
#include "ehbc/single_epoch.hpp"

namespace ehbc {

namespace {

struct PolicyName {
    PolicyKind kind;
    const char* name;
};

constexpr PolicyName kPolicyNames[] = {
    {PolicyKind::OfflineIdeal, "offline-ideal"},   {PolicyKind::OfflineCircuit, "offline-circuit"},
    {PolicyKind::OfflineGeneral, "offline-general"}, {PolicyKind::OnlineIdeal, "online-ideal"},
    {PolicyKind::OnlineCircuit, "online-circuit"},   {PolicyKind::OnlineGeneral, "online-general"},
};

bool uses_circuit(PolicyKind kind)
{
    return kind == PolicyKind::OfflineCircuit || kind == PolicyKind::OnlineCircuit ||
           kind == PolicyKind::OfflineGeneral || kind == PolicyKind::OnlineGeneral;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n)
{
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
}

void hash_double(std::uint64_t& h, double v) { hash_bytes(h, &v, sizeof v); }

} // namespace

std::string to_string(PolicyKind kind)
{
    for (const auto& p : kPolicyNames)
        if (p.kind == kind)
            return p.name;
    throw ValidationError("unknown policy kind");
}

PolicyKind parse_policy(const std::string& name)
{
    for (const auto& p : kPolicyNames)
        if (name == p.name)
            return p.kind;
    throw ValidationError("unknown policy '" + name +
                          "' (expected offline-ideal, offline-circuit, offline-general, online-ideal, "
                          "online-circuit or online-general)");
}

std::vector<PolicyKind> parse_policy_list(const std::string& comma_separated)
{
    std::vector<PolicyKind> out;
    std::stringstream in(comma_separated);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(parse_policy(item));
    if (out.empty())
        throw ValidationError("policy list is empty");
    return out;
}

bool is_offline(PolicyKind kind)
{
    return kind == PolicyKind::OfflineIdeal || kind == PolicyKind::OfflineCircuit ||
           kind == PolicyKind::OfflineGeneral;
}

PolicyKind offline_counterpart(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::OnlineIdeal:
        return PolicyKind::OfflineIdeal;
    case PolicyKind::OnlineCircuit:
        return PolicyKind::OfflineCircuit;
    case PolicyKind::OnlineGeneral:
        return PolicyKind::OfflineGeneral;
    default:
        return kind;
    }
}

Parameters default_parameters() { return Parameters{}; }

ScenarioSpec deterministic_profile()
{
    ScenarioSpec s;
    s.poisson = false;
    s.arrivals = {{0, 4}, {2, 7}, {3, 3}, {5, 5}, {8, 1}, {9, 8}};
    s.horizon = 10;
    return s;
}

std::string axis_name(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::None:
        return "none";
    case SweepAxis::Eta:
        return "eta";
    case SweepAxis::MeanAmount:
        return "eavg";
    case SweepAxis::Deadline:
        return "deadline";
    case SweepAxis::Circuit:
        return "epsilon";
    }
    return "none";
}

SweepAxis parse_axis(const std::string& name)
{
    for (SweepAxis a : {SweepAxis::None, SweepAxis::Eta, SweepAxis::MeanAmount, SweepAxis::Deadline,
                        SweepAxis::Circuit})
        if (axis_name(a) == name)
            return a;
    throw ValidationError("unknown sweep axis '" + name + "' (expected eta, eavg, deadline or epsilon)");
}

Parameters with_axis_value(Parameters params, SweepAxis axis, double value)
{
    switch (axis) {
    case SweepAxis::None:
        break;
    case SweepAxis::Eta:
        params.storage.efficiency = value;
        break;
    case SweepAxis::MeanAmount:
        params.scenario.mean_amount = value;
        break;
    case SweepAxis::Deadline:
        params.scenario.horizon = value;
        break;
    case SweepAxis::Circuit:
        params.circuit = value;
        break;
    }
    return params;
}

void ExperimentSpec::validate() const
{
    if (trials < 1)
        throw ValidationError("trial count must be at least 1");
    if (policies.empty())
        throw ValidationError("policy list is empty");
    if (axis != SweepAxis::None && values.empty())
        throw ValidationError("sweep axis '" + axis_name(axis) + "' needs a nonempty value grid");
    if (threads < 1)
        throw ValidationError("thread count must be at least 1");
    const std::vector<double> grid = axis == SweepAxis::None ? std::vector<double>{0.0} : values;
    for (double v : grid) {
        const Parameters p = with_axis_value(params, axis, v);
        p.storage.validate();
        if (!(p.peak_power > 0))
            throw ValidationError("peak power must be positive");
        if (!(p.scenario.horizon > 0))
            throw ValidationError("deadline must be positive");
        if (p.scenario.poisson && (!(p.scenario.arrival_rate > 0) || p.scenario.mean_amount < 0))
            throw ValidationError("poisson scenario needs a positive rate and nonnegative mean amount");
        if (!(p.circuit >= 0))
            throw ValidationError("circuit power must be nonnegative");
        for (PolicyKind k : policies)
            if (uses_circuit(k) && !(p.circuit > 0))
                throw ValidationError("policy " + to_string(k) + " needs a positive circuit power (got " +
                                      std::to_string(p.circuit) + ")");
    }
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

TrialInputs trial_inputs(const Parameters& params, std::uint64_t master_seed, int trial)
{
    TrialInputs in;
    in.seed = master_seed ^ static_cast<std::uint64_t>(trial);
    const std::uint64_t arrival_seed = splitmix64(in.seed);
    const std::uint64_t channel_seed = splitmix64(arrival_seed);
    const std::uint64_t circuit_seed = splitmix64(channel_seed);

    const ScenarioSpec& s = params.scenario;
    in.timeline = s.poisson ? generate_compound_poisson(s.arrival_rate, s.mean_amount, s.horizon, s.initial,
                                                        arrival_seed)
                            : build_timeline(s.arrivals, s.horizon);

    const ChannelSpec& c = params.channel;
    if (c.explicit_set) {
        in.channels = *c.explicit_set;
    } else {
        in.channels = generate_channels(c.transmit_antennas, c.users, c.pinned ? c.seed : channel_seed);
    }

    if (params.circuit_sequence) {
        if (params.circuit_sequence->size() != in.timeline.epoch_count())
            throw DimensionError("circuit sequence has " + std::to_string(params.circuit_sequence->size()) +
                                 " entries for " + std::to_string(in.timeline.epoch_count()) + " epochs");
        in.circuit_draws = *params.circuit_sequence;
    } else {
        std::mt19937_64 rng(circuit_seed);
        std::uniform_real_distribution<double> uniform(0.0, params.circuit);
        for (std::size_t i = 0; i < in.timeline.epoch_count(); ++i)
            in.circuit_draws.push_back(uniform(rng));
    }

    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < in.timeline.epoch_count(); ++i) {
        hash_double(h, in.timeline.arrival_times[i]);
        hash_double(h, in.timeline.amounts[i]);
        hash_double(h, in.circuit_draws[i]);
    }
    for (const auto& g : in.channels.gains)
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            hash_double(h, g.data()[j].real());
            hash_double(h, g.data()[j].imag());
        }
    in.checksum = h;
    return in;
}

PolicyOutcome run_policy(PolicyKind kind, const Parameters& params, const TrialInputs& inputs)
{
    const BroadcastModel model = BroadcastModel::from_channels(inputs.channels);
    const EpochTimeline& tl = inputs.timeline;
    PolicyOutcome out;
    if (is_offline(kind)) {
        OfflineSolution sol;
        if (kind == PolicyKind::OfflineIdeal)
            sol = solve_offline_ideal(model, tl, params.storage, params.peak_power);
        else if (kind == PolicyKind::OfflineCircuit)
            sol = solve_offline_circuit(model, tl, params.storage, params.peak_power, params.circuit);
        else
            sol = solve_offline_general(model, tl, params.storage, params.peak_power, inputs.circuit_draws);
        out.schedule = std::move(sol.schedule);
        out.trace = schedule_trace(tl, out.schedule);
        for (const auto& e : out.schedule.epochs)
            out.discarded += e.discarded;
        return out;
    }

    OnlinePolicy policy;
    policy.peak_power = params.peak_power;
    std::optional<PoTable> table;
    if (kind == PolicyKind::OnlineIdeal) {
        policy.kind = OnlineKind::Ideal;
    } else if (kind == PolicyKind::OnlineCircuit) {
        policy.kind = OnlineKind::Circuit;
        policy.circuit = params.circuit;
    } else {
        policy.kind = OnlineKind::General;
        policy.circuit_sequence = inputs.circuit_draws;
        std::vector<double> grid;
        constexpr int kTablePoints = 32;
        for (int j = 1; j <= kTablePoints; ++j)
            grid.push_back(params.circuit * j / kTablePoints);
        table = build_po_table(model.curve, grid);
        policy.table = &*table;
    }
    OnlineRun run = run_online(model, tl, params.storage, policy);
    out.schedule = std::move(run.schedule);
    out.trace = std::move(run.trace);
    out.discarded = run.discarded;
    return out;
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& samples)
{
    if (samples.empty())
        return {0.0, 0.0};
    auto kahan = [](const std::vector<double>& xs, auto f) {
        double sum = 0, comp = 0;
        for (double x : xs) {
            const double y = f(x) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    };
    const double n = static_cast<double>(samples.size());
    const double mean = kahan(samples, [](double x) { return x; }) / n;
    if (samples.size() < 2)
        return {mean, 0.0};
    const double ss = kahan(samples, [mean](double x) { return (x - mean) * (x - mean); });
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

ExperimentReport run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    ExperimentReport report;
    report.axis = spec.axis;
    const std::vector<double> grid = spec.axis == SweepAxis::None ? std::vector<double>{0.0} : spec.values;
    const std::size_t np = spec.policies.size();
    const std::size_t nt = static_cast<std::size_t>(spec.trials);

    for (double v : grid) {
        const Parameters params = with_axis_value(spec.params, spec.axis, v);
        std::vector<std::vector<double>> throughput(np, std::vector<double>(nt));
        std::vector<std::vector<double>> discarded(np, std::vector<double>(nt));

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        auto worker = [&]() {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= nt || failed.load())
                    return;
                try {
                    const TrialInputs inputs = trial_inputs(params, spec.seed, static_cast<int>(t));
                    for (std::size_t p = 0; p < np; ++p) {
                        const PolicyOutcome o = run_policy(spec.policies[p], params, inputs);
                        throughput[p][t] = o.schedule.objective;
                        discarded[p][t] = o.discarded;
                    }
                } catch (...) {
                    if (!failed.exchange(true))
                        failure = std::current_exception();
                    return;
                }
            }
        };
        const unsigned nthreads = std::min<unsigned>(spec.threads, static_cast<unsigned>(nt));
        if (nthreads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned j = 0; j < nthreads; ++j)
                pool.emplace_back(worker);
            for (auto& th : pool)
                th.join();
        }
        if (failure)
            std::rethrow_exception(failure);

        std::vector<double> means(np);
        for (std::size_t p = 0; p < np; ++p) {
            ReportRow row;
            row.axis_value = v;
            row.policy = spec.policies[p];
            std::tie(row.mean, row.standard_error) = mean_and_stderr(throughput[p]);
            row.discarded = mean_and_stderr(discarded[p]).first;
            means[p] = row.mean;
            report.rows.push_back(row);
        }
        const std::size_t first = report.rows.size() - np;
        for (std::size_t p = 0; p < np; ++p) {
            const PolicyKind kind = spec.policies[p];
            if (is_offline(kind))
                continue;
            for (std::size_t q = 0; q < np; ++q)
                if (spec.policies[q] == offline_counterpart(kind) && means[q] > 0)
                    report.rows[first + p].ratio_to_offline = means[p] / means[q];
        }
    }
    return report;
}

} // namespace ehbc
