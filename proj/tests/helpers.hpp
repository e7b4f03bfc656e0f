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

// Shared builders for the unit tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ehbc/energy.hpp"
#include "ehbc/model.hpp"
#include "ehbc/offline.hpp"

namespace ehbc::test {

inline BroadcastModel unit_scalar() { return BroadcastModel::scalar({1.0}, {1.0}); }

// Random timeline with n arrivals on [0, horizon).
inline EpochTimeline random_timeline(std::mt19937_64& rng, int n, double horizon, double max_amount)
{
    std::uniform_real_distribution<double> amount(0.0, max_amount);
    std::vector<double> times{0.0};
    std::uniform_real_distribution<double> t(0.05 * horizon, 0.95 * horizon);
    while (static_cast<int>(times.size()) < n) {
        const double x = t(rng);
        bool far = true;
        for (double y : times)
            far = far && std::abs(x - y) > 0.02 * horizon;
        if (far)
            times.push_back(x);
    }
    std::sort(times.begin(), times.end());
    std::vector<std::pair<double, double>> arrivals;
    for (double x : times)
        arrivals.emplace_back(x, amount(rng));
    return build_timeline(arrivals, horizon);
}

// Scalar users with gains drawn on [0.3, 3] and weights on [0.5, 2].
inline BroadcastModel random_scalar_model(std::mt19937_64& rng, int users)
{
    std::uniform_real_distribution<double> g(0.3, 3.0), w(0.5, 2.0);
    std::vector<double> gains, weights;
    for (int k = 0; k < users; ++k) {
        gains.push_back(g(rng));
        weights.push_back(w(rng));
    }
    return BroadcastModel::scalar(gains, weights);
}

inline StorageParams random_storage(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> sc(1.0, 6.0), b(10.0, 60.0), eta(0.3, 1.0);
    StorageParams s;
    s.sc_capacity = sc(rng);
    s.battery_capacity = b(rng);
    s.efficiency = eta(rng);
    return s;
}

inline OfflineProblem make_problem(const EpochTimeline& tl, const StorageParams& st, double peak,
                                   std::vector<double> circuit = {})
{
    OfflineProblem p;
    p.timeline = tl;
    p.storage = st;
    p.peak_power = peak;
    p.circuit = circuit.empty() ? std::vector<double>(tl.epoch_count(), 0.0) : std::move(circuit);
    return p;
}

} // namespace ehbc::test
