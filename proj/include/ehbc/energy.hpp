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

// Energy arrivals, the hybrid super-capacitor/battery store and the
// feasibility audit every schedule must pass.
//
// Battery quantities are kept in drainable units: depositing x joules adds
// eta * x to the battery level, and its capacity bounds that drainable level.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ehbc/channel.hpp"

namespace ehbc {

struct EpochTimeline {
    std::vector<double> arrival_times; // t_i, t_0 = 0
    std::vector<double> amounts;       // E_i
    std::vector<double> lengths;       // l_i, last epoch ends at horizon
    double horizon = 0;

    std::size_t epoch_count() const { return arrival_times.size(); }
    double total_energy() const;
};

EpochTimeline build_timeline(const std::vector<std::pair<double, double>>& arrivals, double horizon);

// Exponential inter-arrival times at `rate`, amounts uniform on [0, 2 mean_amount],
// plus a deterministic arrival of `initial` joules at t = 0.
EpochTimeline generate_compound_poisson(double rate, double mean_amount, double horizon, double initial,
                                        std::uint64_t seed);

struct StorageParams {
    double sc_capacity = 5;
    double battery_capacity = 100;
    double efficiency = 1; // eta

    void validate() const;
};

struct ArrivalSplit {
    double to_sc = 0;
    double to_battery = 0; // deposited joules, eta * to_battery becomes drainable
    double discarded = 0;
};

// Mutable store for causal simulation; levels in joules (battery drainable).
class HybridStorage {
public:
    explicit HybridStorage(StorageParams params);

    // SC first up to its headroom, then the battery, then discard.
    ArrivalSplit deposit(double amount);
    void drain(double from_sc, double from_battery);

    double sc_level() const { return sc_level_; }
    double battery_level() const { return battery_level_; }
    double drainable() const { return sc_level_ + battery_level_; }
    const StorageParams& params() const { return params_; }

    double sc_deposited() const { return sc_in_; }
    double sc_drained() const { return sc_out_; }
    double battery_deposited() const { return battery_in_; } // drainable units
    double battery_drained() const { return battery_out_; }
    double discarded() const { return discarded_; }

private:
    StorageParams params_;
    double sc_level_ = 0;
    double battery_level_ = 0;
    double sc_in_ = 0, sc_out_ = 0, battery_in_ = 0, battery_out_ = 0, discarded_ = 0;
};

// One epoch of a schedule. Powers are averages over the transmission time tau.
struct EpochPlan {
    double duration = 0; // tau
    double power_sc = 0;
    double power_b = 0;
    double circuit_sc = 0;
    double circuit_b = 0;
    double deposit_sc = 0;
    double deposit_b = 0;
    double discarded = 0;
    double level = 0; // water level at the transmit power
    double rate = 0;  // weighted rate while transmitting, nats/s
    CovarianceSet<double> covariances;

    double power() const { return power_sc + power_b; }
    double circuit() const { return circuit_sc + circuit_b; }
    double sc_drain() const { return duration * (power_sc + circuit_sc); }
    double battery_drain() const { return duration * (power_b + circuit_b); }
    double throughput() const { return duration * rate; }
};

struct Schedule {
    std::vector<EpochPlan> epochs;
    double objective = 0; // weighted throughput, nats
};

struct FeasibilityLimits {
    StorageParams storage;
    double peak_power = 0;
    std::vector<double> circuit; // per-epoch epsilon(i); empty skips the circuit check
};

// Signed slack per constraint family; negative means violated.
struct FeasibilityReport {
    std::vector<double> sc_causality;
    std::vector<double> sc_overflow;
    std::vector<double> battery_causality;
    std::vector<double> battery_overflow;
    std::vector<double> peak;
    std::vector<double> split;        // -|E_i - deposits - discarded|
    std::vector<double> duration;     // min(tau_i, l_i - tau_i)
    std::vector<double> nonnegative;  // smallest variable per epoch
    std::vector<double> circuit;      // -|eps_sc + eps_b - eps(i) [transmitting]|
    double min_slack = 0;
    bool feasible = true;
};

inline constexpr double kFeasibilityTolerance = 1e-8;

FeasibilityReport check_feasibility(const EpochTimeline& timeline, const Schedule& schedule,
                                    const FeasibilityLimits& limits, double tol = kFeasibilityTolerance);

} // namespace ehbc
