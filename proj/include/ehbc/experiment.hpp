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

#pragma once

// Monte Carlo experiments: paired trials over arrivals, channels and circuit
// draws, swept along one parameter axis, summarized per policy.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ehbc/energy.hpp"
#include "ehbc/model.hpp"
#include "ehbc/online.hpp"

namespace ehbc {

enum class PolicyKind { OfflineIdeal, OfflineCircuit, OfflineGeneral, OnlineIdeal, OnlineCircuit, OnlineGeneral };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);
std::vector<PolicyKind> parse_policy_list(const std::string& comma_separated);
bool is_offline(PolicyKind kind);
PolicyKind offline_counterpart(PolicyKind kind);

struct ChannelSpec {
    int transmit_antennas = 4;
    std::vector<UserConfig<double>> users{{2, 1.0}, {2, 1.0}};
    bool pinned = false;      // one draw (from `seed`) shared by every trial
    std::uint64_t seed = 0;
    std::optional<ChannelSet<double>> explicit_set; // overrides random draws
};

struct ScenarioSpec {
    bool poisson = true;
    std::vector<std::pair<double, double>> arrivals; // (time, joules) when not poisson
    double arrival_rate = 1;
    double mean_amount = 5;
    double initial = 5;
    double horizon = 10;
};

struct Parameters {
    double peak_power = 4;
    double circuit = 1; // constant eps; upper end of the uniform eps(i) draw
    std::optional<std::vector<double>> circuit_sequence; // fixed eps(i) instead of draws
    StorageParams storage;
    ScenarioSpec scenario;
    ChannelSpec channel;
};

// Peak 4 J/s, capacities 5 J and 100 J, T = 10 s, eps = 1 J/s, one arrival per
// second with a 5 J initial arrival, unit-variance channels and noise.
Parameters default_parameters();

// Arrivals E = [4, 7, 3, 5, 1, 8] J at t = [0, 2, 3, 5, 8, 9] s.
ScenarioSpec deterministic_profile();

enum class SweepAxis { None, Eta, MeanAmount, Deadline, Circuit };

std::string axis_name(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);
Parameters with_axis_value(Parameters params, SweepAxis axis, double value);

struct ExperimentSpec {
    Parameters params = default_parameters();
    std::vector<PolicyKind> policies;
    SweepAxis axis = SweepAxis::None;
    std::vector<double> values; // sweep grid; ignored when axis is None
    int trials = 200;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    void validate() const;
};

// Everything a trial's policies share.
struct TrialInputs {
    std::uint64_t seed = 0;
    EpochTimeline timeline;
    ChannelSet<double> channels;
    std::vector<double> circuit_draws; // eps(i) ~ U[0, eps]
    std::uint64_t checksum = 0;        // over arrivals, channel entries and eps draws
};

std::uint64_t splitmix64(std::uint64_t x);
TrialInputs trial_inputs(const Parameters& params, std::uint64_t master_seed, int trial);

struct PolicyOutcome {
    Schedule schedule;
    std::vector<TracePoint> trace;
    double discarded = 0;
};

PolicyOutcome run_policy(PolicyKind kind, const Parameters& params, const TrialInputs& inputs);

struct ReportRow {
    double axis_value = 0;
    PolicyKind policy = PolicyKind::OfflineIdeal;
    double mean = 0;
    double standard_error = 0;
    std::optional<double> ratio_to_offline; // mean / mean of the offline counterpart
    double discarded = 0;                   // mean overflow discard per trial, joules
};

struct ExperimentReport {
    SweepAxis axis = SweepAxis::None;
    std::vector<ReportRow> rows;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

// Sample mean and standard error with compensated summation, in index order.
std::pair<double, double> mean_and_stderr(const std::vector<double>& samples);

} // namespace ehbc
