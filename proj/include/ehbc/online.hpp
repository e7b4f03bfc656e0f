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

// Causal scheduling: each epoch is planned from the current buffer levels,
// the epoch length and the time left before the deadline. Arrivals fill the
// super-capacitor first, then the battery; energy beyond both is discarded.

#include <string>
#include <vector>

#include "ehbc/energy.hpp"
#include "ehbc/model.hpp"
#include "ehbc/single_epoch.hpp"

namespace ehbc {

// What a policy may see at the start of an epoch.
struct PolicyState {
    double time = 0;          // arrival instant opening the epoch
    double sc_level = 0;      // after this epoch's arrival was stored
    double battery_level = 0; // drainable joules
    double remaining = 0;     // horizon minus elapsed time
};

struct EpochAction {
    double duration = 0;
    double power_sc = 0;
    double power_b = 0;
    double circuit_sc = 0;
    double circuit_b = 0;

    double power() const { return power_sc + power_b; }
    double sc_drain() const { return duration * (power_sc + circuit_sc); }
    double battery_drain() const { return duration * (power_b + circuit_b); }
};

// SC-first fill of an arrival given the current levels; the store is not modified.
ArrivalSplit split_arrival(double amount, double sc_level, double battery_level, const StorageParams& storage);

// Spread the drainable energy evenly over the remaining horizon, capped at the peak.
EpochAction policy_ideal(const PolicyState& state, double length, double peak_power);

// Single-epoch rule on the drainable energy with the efficient power p_o.
EpochAction policy_circuit(const RateCurve<double>& curve, const PolicyState& state, double length,
                           double peak_power, double circuit, double p_o);

enum class OnlineKind { Ideal, Circuit, General };

struct OnlinePolicy {
    OnlineKind kind = OnlineKind::Ideal;
    double peak_power = 4;
    double circuit = 0;                  // Circuit: constant eps
    std::vector<double> circuit_sequence; // General: eps(i) revealed at epoch i
    const PoTable* table = nullptr;       // General: p°(eps) lookup, exact solve off-grid
};

struct TracePoint {
    double time = 0;
    double cumulative = 0; // nats
};

struct OnlineRun {
    Schedule schedule;
    std::vector<TracePoint> trace; // at t = 0 and every epoch end
    double discarded = 0;
    std::vector<std::string> log;  // one line per discarding arrival
    std::vector<double> circuit;   // eps(i) in effect per epoch
};

OnlineRun run_online(const BroadcastModel& model, const EpochTimeline& timeline, const StorageParams& storage,
                     const OnlinePolicy& policy);

// Cumulative throughput of any schedule sampled at epoch boundaries.
std::vector<TracePoint> schedule_trace(const EpochTimeline& timeline, const Schedule& schedule);

} // namespace ehbc
