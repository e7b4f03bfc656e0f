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

// Offline scheduling with full knowledge of the arrival sequence.
//
// The ideal-circuit, constant-circuit and per-epoch-circuit programs share
// one solver. Per epoch the best throughput from drained energy D is
//
//   G(D) = D W(q) / (q + eps)   for D <= l (q + eps),  q = min(p°(eps), p_peak)
//   G(D) = l W(D / l - eps)     up to D = l (p_peak + eps),
//
// which is concave, so the horizon problem reduces to choosing drains and
// arrival splits over a polyhedron. It is solved by a log-barrier method,
// and the multipliers of the full program are recovered from the barrier duals.

#include <string>
#include <vector>

#include "ehbc/energy.hpp"
#include "ehbc/model.hpp"

namespace ehbc {

struct OfflineProblem {
    EpochTimeline timeline;
    StorageParams storage;
    double peak_power = 4;
    std::vector<double> circuit; // eps(i) per epoch; all zero is the ideal circuit

    void validate() const;
    bool ideal_circuit() const;
};

// Multipliers of the full program, one entry per epoch. Causality multipliers
// belong to the end of each epoch; overflow multipliers to the instant right
// after each arrival, including the initial one.
struct DualCertificate {
    std::vector<double> sc_causality;      // lambda^sc_1
    std::vector<double> sc_overflow;       // lambda^sc_2
    std::vector<double> battery_causality; // lambda^b_1
    std::vector<double> battery_overflow;  // lambda^b_2
    std::vector<double> power;             // mu
    std::vector<double> peak;              // varpi
    std::vector<double> split;             // nu
    std::vector<double> circuit_split;     // omega
    std::vector<double> rho1_sc, rho2_sc, rho3_sc;
    std::vector<double> rho1_b, rho2_b, rho3_b;
    std::vector<double> duration_lower; // kappa
    std::vector<double> duration_upper; // z
    std::vector<double> level;          // Delta = mu + varpi
    // Power at which the precoder condition is evaluated; differs from the
    // schedule only for idle epochs with circuit power.
    std::vector<double> reference_power;

    std::size_t size() const { return sc_causality.size(); }
};

struct KktResiduals {
    double stationarity = 0;     // largest scaled stationarity residual
    double precoder = 0;         // largest precoder-condition violation
    double dual_feasibility = 0; // most negative sign-constrained multiplier, as a positive number
    double complementarity = 0;  // largest multiplier-slack product
    double scale = 1;            // max(1, largest multiplier magnitude)
    bool pass(double stationarity_tol = 1e-6, double complementarity_tol = 1e-8) const;
};

struct OfflineSolution {
    Schedule schedule;
    DualCertificate certificate;
    std::vector<double> efficient_power; // min(p°(eps_i), p_peak), 0 for eps_i = 0
    int newton_steps = 0;
};

OfflineSolution solve_offline(const BroadcastModel& model, const OfflineProblem& problem);

OfflineSolution solve_offline_ideal(const BroadcastModel& model, const EpochTimeline& timeline,
                                    const StorageParams& storage, double peak_power);
OfflineSolution solve_offline_circuit(const BroadcastModel& model, const EpochTimeline& timeline,
                                      const StorageParams& storage, double peak_power, double circuit);
OfflineSolution solve_offline_general(const BroadcastModel& model, const EpochTimeline& timeline,
                                      const StorageParams& storage, double peak_power,
                                      const std::vector<double>& circuit);

// Independent check of the certificate against the schedule.
KktResiduals check_kkt(const BroadcastModel& model, const OfflineProblem& problem, const Schedule& schedule,
                       const DualCertificate& certificate);

// Objective in transformed coordinates: sum_i tau_i sum_k gamma_k log|I + L_k Theta_k(i) L_k^H / tau_i|,
// with epochs at tau_i = 0 contributing exactly 0.
double perspective_objective(const BroadcastModel& model, const std::vector<CovarianceSet<double>>& theta,
                             const std::vector<double>& tau);
// Same objective in original coordinates: sum_i tau_i sum_k gamma_k log|I + L_k Phi_k(i) L_k^H|.
double duration_objective(const BroadcastModel& model, const Schedule& schedule);
// Theta_k(i) = Phi_k(i) tau_i.
std::vector<CovarianceSet<double>> scaled_covariances(const Schedule& schedule);

struct LemmaCheck {
    std::string name;
    int applicable = 0;       // hypothesis held, conclusion tested
    int violations = 0;       // conclusion failed
    int premise_failures = 0; // statement vacuous because a proof premise fails on this solution
    double worst = 0;         // largest conclusion violation
};

struct StructureReport {
    std::vector<LemmaCheck> checks;

    int violations() const;
    const LemmaCheck* find(const std::string& name) const;
};

struct StructureTolerances {
    double conclusion = 1e-5;
    double positive = 1e-7; // power or multiplier treated as strictly positive
    double tight = 1e-7;    // constraint slack treated as active, relative to max(1, total energy)
};

StructureReport verify_structure(const BroadcastModel& model, const OfflineProblem& problem,
                                 const OfflineSolution& solution, const StructureTolerances& tol = {});

struct OracleOptions {
    int points = 21;      // grid points per free dimension
    int refinements = 10; // zoom levels
};

// Exhaustive grid search over per-epoch drained energies for N <= 3 epochs and
// at most two eigenmodes, with an inner search over durations and the mode split.
// Shares no code with the barrier solver or the water-filling routines.
double brute_force_oracle(const BroadcastModel& model, const OfflineProblem& problem, const OracleOptions& opts = {});

} // namespace ehbc
