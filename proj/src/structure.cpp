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

#include <algorithm>
#include <cmath>

#include "ehbc/offline.hpp"

namespace ehbc {

int StructureReport::violations() const
{
    int total = 0;
    for (const auto& c : checks)
        total += c.violations;
    return total;
}

const LemmaCheck* StructureReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

namespace {

void record(LemmaCheck& check, double excess)
{
    ++check.applicable;
    if (excess > 0) {
        ++check.violations;
        check.worst = std::max(check.worst, excess);
    }
}

struct BufferView {
    std::vector<double> power;    // transmit power drawn from this buffer
    std::vector<double> causal;   // slack after epoch i
    std::vector<double> overflow; // slack right after arrival i
    std::vector<double> causal_dual;
    std::vector<double> overflow_dual;
};

} // namespace

StructureReport verify_structure(const BroadcastModel& model, const OfflineProblem& problem,
                                 const OfflineSolution& solution, const StructureTolerances& tol)
{
    (void)model;
    const auto& tl = problem.timeline;
    const auto& epochs = solution.schedule.epochs;
    const auto& cert = solution.certificate;
    const std::size_t n = tl.epoch_count();
    const double energy_scale = std::max(1.0, tl.total_energy());
    const double tight = tol.tight * energy_scale;

    FeasibilityLimits limits{problem.storage, problem.peak_power, problem.circuit};
    const FeasibilityReport slack = check_feasibility(tl, solution.schedule, limits);

    std::vector<double> power(n);
    std::vector<bool> below_peak(n);
    for (std::size_t i = 0; i < n; ++i) {
        power[i] = epochs[i].power();
        below_peak[i] = power[i] < problem.peak_power - tol.positive;
    }

    StructureReport report;
    if (problem.ideal_circuit()) {
        BufferView buffers[2];
        for (std::size_t i = 0; i < n; ++i) {
            buffers[0].power.push_back(epochs[i].power_sc);
            buffers[1].power.push_back(epochs[i].power_b);
        }
        buffers[0].causal = slack.sc_causality;
        buffers[0].overflow = slack.sc_overflow;
        buffers[0].causal_dual = cert.sc_causality;
        buffers[0].overflow_dual = cert.sc_overflow;
        buffers[1].causal = slack.battery_causality;
        buffers[1].overflow = slack.battery_overflow;
        buffers[1].causal_dual = cert.battery_causality;
        buffers[1].overflow_dual = cert.battery_overflow;

        LemmaCheck terminal{"terminal_drain"};
        if (below_peak[n - 1]) {
            const double left = std::max(slack.sc_causality[n - 1], slack.battery_causality[n - 1]);
            record(terminal, left - 1e-6 * energy_scale);
        }

        LemmaCheck exclusive{"exclusive_multipliers"};
        LemmaCheck constant{"constant_power"};
        LemmaCheck increasing{"increasing_after_depletion"};
        LemmaCheck decreasing{"decreasing_after_overflow"};
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const bool peaks_free = below_peak[i] && below_peak[i + 1];
            for (const BufferView& b : buffers) {
                // Causality at the end of epoch i pairs with overflow right after arrival i + 1.
                const bool empty = b.causal[i] <= tight;
                const bool full = b.overflow[i + 1] <= tight;
                if (empty && full) {
                    ++exclusive.premise_failures;
                } else {
                    record(exclusive, std::min(b.causal_dual[i], b.overflow_dual[i + 1]) - tol.conclusion);
                }
                if (!peaks_free)
                    continue;
                if (b.power[i] > tol.positive && b.power[i + 1] > tol.positive && !empty && !full)
                    record(constant, std::abs(power[i] - power[i + 1]) - tol.conclusion);
                if (b.power[i] > tol.positive && empty) {
                    if (full)
                        ++increasing.premise_failures;
                    else
                        record(increasing, power[i] - power[i + 1] - tol.conclusion);
                }
                if (b.power[i + 1] > tol.positive && full) {
                    if (empty)
                        ++decreasing.premise_failures;
                    else
                        record(decreasing, power[i + 1] - power[i] - tol.conclusion);
                }
            }
        }
        report.checks = {terminal, exclusive, constant, increasing, decreasing};
    }

    LemmaCheck partial{"partial_duration_power"};
    LemmaCheck full_time{"full_duration_power"};
    LemmaCheck shared{"shared_circuit"};
    LemmaCheck single{"single_buffer_circuit"};
    bool any_circuit = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double eps = problem.circuit[i];
        if (!(eps > 0))
            continue;
        any_circuit = true;
        const EpochPlan& e = epochs[i];
        const double q = solution.efficient_power[i];
        const double l = tl.lengths[i];
        if (e.duration > 0 && e.duration < l * (1 - 1e-12))
            record(partial, std::abs(power[i] - q) - tol.conclusion);
        if (e.duration >= l * (1 - 1e-12) && power[i] > 0)
            record(full_time, q - power[i] - tol.conclusion);

        if (!below_peak[i])
            continue;
        const bool sc_on = e.power_sc > tol.positive;
        const bool b_on = e.power_b > tol.positive;
        const double small = tol.conclusion * std::max(1.0, eps);
        if (sc_on && b_on) {
            record(shared, (e.circuit_sc > 0 && e.circuit_b > 0) ? 0.0 : 1.0);
        } else if (sc_on) {
            record(single, e.circuit_sc > 0 ? e.circuit_b - small : 1.0);
        } else if (b_on) {
            record(single, e.circuit_b > 0 ? e.circuit_sc - small : 1.0);
        } else {
            record(single, std::max(e.circuit_sc, e.circuit_b) - small);
        }
    }
    if (any_circuit) {
        report.checks.push_back(partial);
        report.checks.push_back(full_time);
        report.checks.push_back(shared);
        report.checks.push_back(single);
    }
    return report;
}

} // namespace ehbc
