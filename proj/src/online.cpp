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

#include "ehbc/online.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "ehbc/errors.hpp"

namespace ehbc {

ArrivalSplit split_arrival(double amount, double sc_level, double battery_level, const StorageParams& storage)
{
    if (amount < 0)
        throw ValidationError("arrival amount must be nonnegative");
    ArrivalSplit s;
    s.to_sc = std::clamp(storage.sc_capacity - sc_level, 0.0, amount);
    const double headroom_b = std::max(0.0, storage.battery_capacity - battery_level) / storage.efficiency;
    s.to_battery = std::min(amount - s.to_sc, headroom_b);
    s.discarded = amount - s.to_sc - s.to_battery;
    return s;
}

namespace {

EpochAction drain_sc_first(const PolicyState& state, double power, double circuit, double duration)
{
    EpochAction a;
    if (power <= 0 || duration <= 0)
        return a;
    a.duration = duration;
    const double used = duration * (power + circuit);
    const double share_sc = std::min(state.sc_level, used) / used;
    a.power_sc = share_sc * power;
    a.power_b = power - a.power_sc;
    a.circuit_sc = share_sc * circuit;
    a.circuit_b = circuit - a.circuit_sc;
    return a;
}

} // namespace

EpochAction policy_ideal(const PolicyState& state, double length, double peak_power)
{
    if (!(state.remaining > 0) || !(length > 0))
        throw ValidationError("online policy needs positive remaining time and epoch length");
    const double drainable = state.sc_level + state.battery_level;
    const double power = std::min(peak_power, drainable / state.remaining);
    const double duration = power > 0 ? std::min(length, drainable / power) : 0.0;
    return drain_sc_first(state, power, 0.0, duration);
}

EpochAction policy_circuit(const RateCurve<double>& curve, const PolicyState& state, double length,
                           double peak_power, double circuit, double p_o)
{
    const SingleEpochSolution s =
        plan_single_epoch(curve, p_o, state.sc_level, state.battery_level, circuit, peak_power, length);
    EpochAction a;
    a.duration = s.duration;
    a.power_sc = s.power_sc;
    a.power_b = s.power_b;
    a.circuit_sc = s.circuit_sc;
    a.circuit_b = s.circuit_b;
    return a;
}

OnlineRun run_online(const BroadcastModel& model, const EpochTimeline& timeline, const StorageParams& storage,
                     const OnlinePolicy& policy)
{
    storage.validate();
    const std::size_t n = timeline.epoch_count();
    if (policy.kind == OnlineKind::General && policy.circuit_sequence.size() != n)
        throw DimensionError("general online policy needs one circuit power per epoch");
    if (policy.kind == OnlineKind::Circuit && !(policy.circuit > 0))
        throw ValidationError("circuit online policy needs a positive circuit power");

    const double fixed_p_o = policy.kind == OnlineKind::Circuit ? solve_p_o(model.curve, policy.circuit) : 0.0;
    HybridStorage store(storage);
    OnlineRun run;
    run.schedule.epochs.resize(n);
    run.trace.push_back({0.0, 0.0});
    double cumulative = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const ArrivalSplit split = store.deposit(timeline.amounts[i]);
        if (split.discarded > 0) {
            std::ostringstream msg;
            msg << "arrival " << i << " at t=" << timeline.arrival_times[i] << ": discarded " << split.discarded
                << " J";
            run.log.push_back(msg.str());
        }
        run.discarded += split.discarded;

        PolicyState state{timeline.arrival_times[i], store.sc_level(), store.battery_level(),
                          timeline.horizon - timeline.arrival_times[i]};
        const double length = timeline.lengths[i];
        EpochAction action;
        double eps = 0;
        switch (policy.kind) {
        case OnlineKind::Ideal:
            action = policy_ideal(state, length, policy.peak_power);
            break;
        case OnlineKind::Circuit:
            eps = policy.circuit;
            action = policy_circuit(model.curve, state, length, policy.peak_power, eps, fixed_p_o);
            break;
        case OnlineKind::General: {
            eps = policy.circuit_sequence[i];
            double p_o = 0;
            if (eps > 0) {
                const auto hit = policy.table ? std::optional(policy.table->lookup(eps)) : std::nullopt;
                p_o = hit && !hit->clamped ? hit->value : solve_p_o(model.curve, eps);
            }
            action = policy_circuit(model.curve, state, length, policy.peak_power, eps, p_o);
            break;
        }
        }
        run.circuit.push_back(eps);
        store.drain(std::min(action.sc_drain(), store.sc_level()), std::min(action.battery_drain(), store.battery_level()));

        EpochPlan& e = run.schedule.epochs[i];
        e.duration = action.duration;
        e.power_sc = action.power_sc;
        e.power_b = action.power_b;
        e.circuit_sc = action.circuit_sc;
        e.circuit_b = action.circuit_b;
        e.deposit_sc = split.to_sc;
        e.deposit_b = split.to_battery;
        e.discarded = split.discarded;
        e.level = model.curve.level_at_power(action.power());
        e.rate = model.curve.rate(action.power());
        e.covariances = model.covariances(action.power());
        cumulative += e.throughput();
        run.schedule.objective += e.throughput();
        run.trace.push_back({timeline.arrival_times[i] + length, cumulative});
    }
    return run;
}

std::vector<TracePoint> schedule_trace(const EpochTimeline& timeline, const Schedule& schedule)
{
    if (schedule.epochs.size() != timeline.epoch_count())
        throw DimensionError("schedule and timeline disagree on epoch count");
    std::vector<TracePoint> trace{{0.0, 0.0}};
    double cumulative = 0;
    for (std::size_t i = 0; i < schedule.epochs.size(); ++i) {
        cumulative += schedule.epochs[i].throughput();
        trace.push_back({timeline.arrival_times[i] + timeline.lengths[i], cumulative});
    }
    return trace;
}

} // namespace ehbc
