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

#include "ehbc/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "ehbc/errors.hpp"

namespace ehbc {

double EpochTimeline::total_energy() const
{
    return std::accumulate(amounts.begin(), amounts.end(), 0.0);
}

EpochTimeline build_timeline(const std::vector<std::pair<double, double>>& arrivals, double horizon)
{
    if (arrivals.empty())
        throw ValidationError("timeline needs at least the arrival at t = 0");
    if (!(horizon > 0) || !std::isfinite(horizon))
        throw ValidationError("horizon must be positive");
    if (arrivals.front().first != 0.0)
        throw ValidationError("first arrival must be at t = 0");

    EpochTimeline tl;
    tl.horizon = horizon;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        const auto [t, e] = arrivals[i];
        if (!std::isfinite(t) || !std::isfinite(e))
            throw ValidationError("arrival " + std::to_string(i) + " is not finite");
        if (i > 0 && !(t > arrivals[i - 1].first))
            throw ValidationError("arrival times must be strictly increasing");
        if (e < 0)
            throw ValidationError("arrival amount must be nonnegative");
        if (t >= horizon)
            throw ValidationError("arrival at t = " + std::to_string(t) + " is not before the horizon");
        tl.arrival_times.push_back(t);
        tl.amounts.push_back(e);
    }
    for (std::size_t i = 0; i < tl.arrival_times.size(); ++i) {
        const double end = i + 1 < tl.arrival_times.size() ? tl.arrival_times[i + 1] : horizon;
        tl.lengths.push_back(end - tl.arrival_times[i]);
    }
    return tl;
}

EpochTimeline generate_compound_poisson(double rate, double mean_amount, double horizon, double initial,
                                        std::uint64_t seed)
{
    if (!(rate > 0) || !(mean_amount > 0))
        throw ValidationError("arrival rate and mean amount must be positive");
    if (initial < 0)
        throw ValidationError("initial energy must be nonnegative");
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(rate);
    std::uniform_real_distribution<double> amount(0.0, 2.0 * mean_amount);

    std::vector<std::pair<double, double>> arrivals{{0.0, initial}};
    double t = 0;
    for (;;) {
        t += gap(rng);
        if (t >= horizon)
            break;
        arrivals.emplace_back(t, amount(rng));
    }
    return build_timeline(arrivals, horizon);
}

void StorageParams::validate() const
{
    if (!(sc_capacity > 0) || !(battery_capacity > 0))
        throw InfeasibleError("storage capacities must be positive");
    if (!(efficiency > 0) || efficiency > 1)
        throw ValidationError("battery efficiency must lie in (0, 1]");
}

HybridStorage::HybridStorage(StorageParams params) : params_(params)
{
    params_.validate();
}

ArrivalSplit HybridStorage::deposit(double amount)
{
    ArrivalSplit s;
    s.to_sc = std::clamp(params_.sc_capacity - sc_level_, 0.0, amount);
    const double headroom_b = std::max(0.0, params_.battery_capacity - battery_level_) / params_.efficiency;
    s.to_battery = std::min(amount - s.to_sc, headroom_b);
    s.discarded = amount - s.to_sc - s.to_battery;
    sc_level_ += s.to_sc;
    battery_level_ += params_.efficiency * s.to_battery;
    sc_in_ += s.to_sc;
    battery_in_ += params_.efficiency * s.to_battery;
    discarded_ += s.discarded;
    return s;
}

void HybridStorage::drain(double from_sc, double from_battery)
{
    constexpr double slop = 1e-9;
    if (from_sc < 0 || from_battery < 0 || from_sc > sc_level_ + slop || from_battery > battery_level_ + slop)
        throw ValidationError("drain exceeds stored energy");
    sc_level_ = std::max(0.0, sc_level_ - from_sc);
    battery_level_ = std::max(0.0, battery_level_ - from_battery);
    sc_out_ += from_sc;
    battery_out_ += from_battery;
}

FeasibilityReport check_feasibility(const EpochTimeline& timeline, const Schedule& schedule,
                                    const FeasibilityLimits& limits, double tol)
{
    const std::size_t n = timeline.epoch_count();
    if (schedule.epochs.size() != n)
        throw DimensionError("schedule has " + std::to_string(schedule.epochs.size()) + " epochs, timeline has " +
                             std::to_string(n));
    if (!limits.circuit.empty() && limits.circuit.size() != n)
        throw DimensionError("circuit sequence length mismatch");
    const double eta = limits.storage.efficiency;

    FeasibilityReport r;
    double dep_sc = 0, dep_b = 0, out_sc = 0, out_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const EpochPlan& e = schedule.epochs[i];
        // Level right after arrival i, before epoch i drains anything.
        dep_sc += e.deposit_sc;
        dep_b += eta * e.deposit_b;
        r.sc_overflow.push_back(limits.storage.sc_capacity - (dep_sc - out_sc));
        r.battery_overflow.push_back(limits.storage.battery_capacity - (dep_b - out_b));
        out_sc += e.sc_drain();
        out_b += e.battery_drain();
        r.sc_causality.push_back(dep_sc - out_sc);
        r.battery_causality.push_back(dep_b - out_b);

        r.peak.push_back(limits.peak_power - e.power());
        r.split.push_back(-std::abs(timeline.amounts[i] - e.deposit_sc - e.deposit_b - e.discarded));
        r.duration.push_back(std::min(e.duration, timeline.lengths[i] - e.duration));
        r.nonnegative.push_back(std::min({e.power_sc, e.power_b, e.circuit_sc, e.circuit_b, e.deposit_sc,
                                          e.deposit_b, e.discarded}));
        if (!limits.circuit.empty()) {
            const bool on = e.duration > 0 && e.power() > 0;
            r.circuit.push_back(-std::abs(e.circuit() - (on ? limits.circuit[i] : 0.0)));
        }
    }

    double m = std::numeric_limits<double>::infinity();
    for (const auto* v : {&r.sc_causality, &r.sc_overflow, &r.battery_causality, &r.battery_overflow, &r.peak,
                          &r.split, &r.duration, &r.nonnegative, &r.circuit})
        for (double x : *v)
            m = std::min(m, x);
    r.min_slack = n == 0 ? 0.0 : m;
    r.feasible = r.min_slack >= -tol;
    return r;
}

} // namespace ehbc
