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

// Single-epoch scheduling with circuit power: the energy-efficient transmit
// power p° maximizing W(p) / (p + eps), the piecewise power rule given the
// available energy, and the p°(eps) lookup table.

#include <vector>

#include "ehbc/model.hpp"
#include "ehbc/waterfill.hpp"

namespace ehbc {

struct SingleEpochSolution {
    double power = 0;    // p_sc + p_b
    double duration = 0; // tau
    double power_sc = 0;
    double power_b = 0;
    double circuit_sc = 0;
    double circuit_b = 0;
    double throughput = 0; // nats
    double level = 0;
    CovarianceSet<double> covariances;

    double energy_used() const { return duration * (power + circuit_sc + circuit_b); }
};

// Bits per joule, in nats: W(p) / (p + eps).
double energy_efficiency(const RateCurve<double>& curve, double power, double circuit);

// Throws ValidationError for eps <= 0.
double solve_p_o(const RateCurve<double>& curve, double circuit);
double solve_p_o(const EffectiveChannels<double>& eff, const RVector<double>& weights, double circuit);

// Core rule on drainable energies. `p_o` is the efficient power for `circuit`
// (pass 0 when circuit == 0). Draining is SC first for transmit and circuit alike.
SingleEpochSolution plan_single_epoch(const RateCurve<double>& curve, double p_o, double drainable_sc,
                                      double drainable_b, double circuit, double peak, double length);

// energy_b is in deposited joules; only eta * energy_b can be drained.
SingleEpochSolution solve_single_epoch(const BroadcastModel& model, double energy_sc, double energy_b, double eta,
                                       double circuit, double peak, double length);

class PoTable {
public:
    struct Lookup {
        double value;
        bool clamped; // query fell outside the grid
    };

    PoTable(std::vector<double> grid, std::vector<double> values);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    Lookup lookup(double circuit) const; // linear interpolation

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

PoTable build_po_table(const RateCurve<double>& curve, const std::vector<double>& grid);

} // namespace ehbc
