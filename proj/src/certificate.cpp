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

#include "ehbc/errors.hpp"
#include "ehbc/offline.hpp"

namespace ehbc {

bool KktResiduals::pass(double stationarity_tol, double complementarity_tol) const
{
    return stationarity <= stationarity_tol && precoder <= stationarity_tol &&
           dual_feasibility <= stationarity_tol && complementarity <= complementarity_tol * scale;
}

namespace {

// sum_k gamma_k tr((I + L Phi L^H)^-1 L Phi L^H), the derivative of the
// perspective term with respect to its scaling.
double trace_term(const BroadcastModel& model, const CovarianceSet<double>& phi)
{
    double total = 0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const CMatrix<double>& l = model.channels.factors[k];
        const CMatrix<double> lpl = l * phi[k] * l.adjoint();
        const CMatrix<double> m = CMatrix<double>::Identity(lpl.rows(), lpl.cols()) + lpl;
        total += model.weights(static_cast<Eigen::Index>(k)) * std::real(m.ldlt().solve(lpl).trace());
    }
    return total;
}

// gamma_k L^H (I + L Phi L^H)^-1 L - level I must vanish on the range of Phi
// and be negative semidefinite elsewhere.
double precoder_violation(const BroadcastModel& model, const CovarianceSet<double>& phi, double level)
{
    double worst = 0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const CMatrix<double>& l = model.channels.factors[k];
        const Eigen::Index n = l.rows();
        const CMatrix<double> m = CMatrix<double>::Identity(n, n) + l * phi[k] * l.adjoint();
        CMatrix<double> g = model.weights(static_cast<Eigen::Index>(k)) * l.adjoint() * m.ldlt().solve(l);
        g -= level * CMatrix<double>::Identity(n, n);
        g = 0.5 * (g + g.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(g);
        worst = std::max(worst, es.eigenvalues().maxCoeff());
        const double norm = std::max(1.0, phi[k].norm());
        worst = std::max(worst, (g * phi[k]).norm() / norm);
    }
    return worst;
}

} // namespace

KktResiduals check_kkt(const BroadcastModel& model, const OfflineProblem& problem, const Schedule& schedule,
                       const DualCertificate& c)
{
    const auto& tl = problem.timeline;
    const std::size_t n = tl.epoch_count();
    if (schedule.epochs.size() != n || c.size() != n)
        throw DimensionError("check_kkt: schedule, certificate and timeline disagree on epoch count");
    const double eta = problem.storage.efficiency;

    KktResiduals r;
    for (const auto* v : {&c.sc_causality, &c.sc_overflow, &c.battery_causality, &c.battery_overflow, &c.power,
                          &c.peak, &c.split, &c.circuit_split, &c.rho1_sc, &c.rho2_sc, &c.rho3_sc, &c.rho1_b,
                          &c.rho2_b, &c.rho3_b, &c.duration_lower, &c.duration_upper})
        for (double x : *v)
            r.scale = std::max(r.scale, std::abs(x));

    for (const auto* v : {&c.sc_causality, &c.sc_overflow, &c.battery_causality, &c.battery_overflow, &c.peak,
                          &c.rho1_sc, &c.rho2_sc, &c.rho3_sc, &c.rho1_b, &c.rho2_b, &c.rho3_b, &c.duration_lower,
                          &c.duration_upper})
        for (double x : *v)
            r.dual_feasibility = std::max(r.dual_feasibility, -x / r.scale);

    FeasibilityLimits limits{problem.storage, problem.peak_power, problem.circuit};
    const FeasibilityReport slack = check_feasibility(tl, schedule, limits);

    auto stationarity = [&](double residual) {
        r.stationarity = std::max(r.stationarity, std::abs(residual) / r.scale);
    };
    auto product = [&](double multiplier, double gap) {
        r.complementarity = std::max(r.complementarity, std::abs(multiplier * gap));
    };

    for (std::size_t i = 0; i < n; ++i) {
        const EpochPlan& e = schedule.epochs[i];
        const double eps = problem.circuit[i];
        double causal_sc = 0, causal_b = 0, overflow_sc = 0, overflow_b = 0;
        for (std::size_t k = i; k < n; ++k) {
            causal_sc += c.sc_causality[k];
            causal_b += c.battery_causality[k];
            overflow_sc += c.sc_overflow[k];
            overflow_b += c.battery_overflow[k];
        }
        // Drains in epoch i count toward overflow only from arrival i + 1 on.
        const double price_sc = causal_sc - (overflow_sc - c.sc_overflow[i]);
        const double price_b = causal_b - (overflow_b - c.battery_overflow[i]);

        stationarity(-price_sc + c.power[i] + c.rho2_sc[i]);
        stationarity(-price_b + c.power[i] + c.rho2_b[i]);
        stationarity(-price_sc + c.circuit_split[i] + c.rho3_sc[i]);
        stationarity(-price_b + c.circuit_split[i] + c.rho3_b[i]);
        stationarity((causal_sc - overflow_sc) + c.split[i] + c.rho1_sc[i]);
        stationarity(eta * (causal_b - overflow_b) + c.split[i] + c.rho1_b[i]);
        stationarity(c.level[i] - c.power[i] - c.peak[i]);

        const bool on = e.duration > 0 && e.power() > 0;
        const double p_ref = on ? e.power() : c.reference_power[i];
        const CovarianceSet<double> phi = on ? e.covariances : model.covariances(p_ref);
        r.precoder = std::max(r.precoder, precoder_violation(model, phi, c.level[i]) / r.scale);
        if (eps > 0 || on) {
            const double w = weighted_rate(model.channels, model.weights, phi);
            stationarity(w - trace_term(model, phi) + c.peak[i] * problem.peak_power - eps * c.circuit_split[i] +
                         c.duration_lower[i] - c.duration_upper[i]);
        }

        product(c.sc_causality[i], slack.sc_causality[i]);
        product(c.battery_causality[i], slack.battery_causality[i]);
        product(c.sc_overflow[i], slack.sc_overflow[i]);
        product(c.battery_overflow[i], slack.battery_overflow[i]);
        product(c.peak[i], (problem.peak_power - e.power()) * (eps > 0 ? e.duration : 1.0));
        product(c.rho1_sc[i], e.deposit_sc);
        product(c.rho1_b[i], e.deposit_b);
        product(c.rho2_sc[i], e.power_sc * e.duration);
        product(c.rho2_b[i], e.power_b * e.duration);
        product(c.rho3_sc[i], e.circuit_sc * e.duration);
        product(c.rho3_b[i], e.circuit_b * e.duration);
        product(c.duration_lower[i], e.duration);
        product(c.duration_upper[i], tl.lengths[i] - e.duration);
    }
    return r;
}

} // namespace ehbc
