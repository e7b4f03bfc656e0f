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

#include "ehbc/single_epoch.hpp"

#include <algorithm>
#include <cmath>

#include "ehbc/errors.hpp"

namespace ehbc {

double energy_efficiency(const RateCurve<double>& curve, double power, double circuit)
{
    return curve.rate(power) / (power + circuit);
}

double solve_p_o(const RateCurve<double>& curve, double circuit)
{
    if (!(circuit > 0) || !std::isfinite(circuit))
        throw ValidationError("efficient power needs a positive circuit power");
    auto ratio = [&](double p) { return energy_efficiency(curve, p, circuit); };

    double hi = 1.0;
    while (ratio(2 * hi) > ratio(hi) && hi < 1e12)
        hi *= 2;
    double lo = 1e-9;
    hi *= 2;

    // Golden-section on the quasiconcave ratio.
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = ratio(a), fb = ratio(b);
    for (int it = 0; it < 300 && (hi - lo) > 1e-10 * 0.5 * (hi + lo); ++it) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = ratio(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = ratio(a);
        }
    }

    // The ratio is flat at its peak, so finish on the sign of its derivative:
    // W'(p)(p + eps) - W(p) is decreasing and vanishes at p°.
    auto slope = [&](double p) { return curve.marginal(p) * (p + circuit) - curve.rate(p); };
    lo = std::max(1e-12, lo * 0.5);
    hi = hi * 2;
    if (slope(lo) <= 0)
        return lo;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double solve_p_o(const EffectiveChannels<double>& eff, const RVector<double>& weights, double circuit)
{
    return solve_p_o(RateCurve<double>(eff, weights), circuit);
}

SingleEpochSolution plan_single_epoch(const RateCurve<double>& curve, double p_o, double drainable_sc,
                                      double drainable_b, double circuit, double peak, double length)
{
    if (drainable_sc < 0 || drainable_b < 0 || circuit < 0 || peak < 0 || !(length > 0))
        throw ValidationError("single epoch: inputs must be nonnegative and length positive");
    SingleEpochSolution s;
    const double total = drainable_sc + drainable_b;
    if (total <= 0 || peak <= 0)
        return s;

    double power;
    if (p_o < peak) {
        if (total < length * (p_o + circuit))
            power = p_o;
        else if (total > length * (peak + circuit))
            power = peak;
        else
            power = total / length - circuit;
    } else {
        power = peak;
    }
    if (power <= 0)
        return s;

    s.power = power;
    s.duration = std::min(length, total / (power + circuit));
    const double used = s.duration * (power + circuit);
    const double share_sc = std::min(drainable_sc, used) / used;
    s.power_sc = power * share_sc;
    s.power_b = power - s.power_sc;
    s.circuit_sc = circuit * share_sc;
    s.circuit_b = circuit - s.circuit_sc;
    s.level = curve.level_at_power(power);
    s.throughput = s.duration * curve.rate(power);
    return s;
}

SingleEpochSolution solve_single_epoch(const BroadcastModel& model, double energy_sc, double energy_b, double eta,
                                       double circuit, double peak, double length)
{
    if (!(eta > 0) || eta > 1)
        throw ValidationError("battery efficiency must lie in (0, 1]");
    const double p_o = circuit > 0 ? solve_p_o(model.curve, circuit) : 0.0;
    SingleEpochSolution s = plan_single_epoch(model.curve, p_o, energy_sc, eta * energy_b, circuit, peak, length);
    s.covariances = model.covariances(s.power);
    return s;
}

PoTable::PoTable(std::vector<double> grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values))
{
    if (grid_.empty() || grid_.size() != values_.size())
        throw ValidationError("p° table needs a nonempty grid with one value per point");
}

PoTable::Lookup PoTable::lookup(double circuit) const
{
    if (circuit <= grid_.front())
        return {values_.front(), circuit < grid_.front()};
    if (circuit >= grid_.back())
        return {values_.back(), circuit > grid_.back()};
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), circuit);
    const std::size_t j = static_cast<std::size_t>(it - grid_.begin());
    const double w = (circuit - grid_[j - 1]) / (grid_[j] - grid_[j - 1]);
    return {(1 - w) * values_[j - 1] + w * values_[j], false};
}

PoTable build_po_table(const RateCurve<double>& curve, const std::vector<double>& grid)
{
    if (grid.empty())
        throw ValidationError("p° table grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0))
            throw ValidationError("p° table grid entries must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ValidationError("p° table grid must be strictly ascending");
    }
    std::vector<double> values;
    values.reserve(grid.size());
    for (double eps : grid)
        values.push_back(solve_p_o(curve, eps));
    return PoTable(grid, std::move(values));
}

} // namespace ehbc
