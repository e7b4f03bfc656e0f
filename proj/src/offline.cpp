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

#include "ehbc/offline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "barrier.hpp"
#include "ehbc/errors.hpp"
#include "ehbc/single_epoch.hpp"

namespace ehbc {

void OfflineProblem::validate() const
{
    storage.validate();
    if (!(peak_power > 0) || !std::isfinite(peak_power))
        throw ValidationError("peak power must be positive");
    if (timeline.epoch_count() == 0)
        throw ValidationError("timeline has no epochs");
    if (circuit.size() != timeline.epoch_count())
        throw DimensionError("circuit sequence needs one entry per epoch");
    for (double eps : circuit)
        if (!(eps >= 0) || !std::isfinite(eps))
            throw ValidationError("circuit power must be finite and nonnegative");
}

bool OfflineProblem::ideal_circuit() const
{
    return std::all_of(circuit.begin(), circuit.end(), [](double e) { return e == 0; });
}

namespace {

// Best throughput of one epoch as a function of the energy drained in it.
struct EpochValue {
    const RateCurve<double>* curve = nullptr;
    double length = 0, circuit = 0, peak = 0;
    double q = 0;     // transmit power while the epoch is energy limited
    double ratio = 0; // slope of the linear piece
    double knee = 0;  // end of the linear piece
    double cap = 0;   // most energy the epoch can use

    EpochValue(const RateCurve<double>& c, double l, double eps, double p_peak)
        : curve(&c), length(l), circuit(eps), peak(p_peak)
    {
        cap = l * (p_peak + eps);
        if (eps > 0) {
            q = std::min(solve_p_o(c, eps), p_peak);
            ratio = c.rate(q) / (q + eps);
            knee = l * (q + eps);
        } else {
            ratio = c.marginal(0);
        }
    }

    double slope_at_cap() const { return knee >= cap ? ratio : curve->marginal(peak); }

    double value(double d) const
    {
        if (d <= 0)
            return ratio * d;
        if (d <= knee)
            return ratio * d;
        if (d <= cap)
            return length * curve->rate(d / length - circuit);
        return value(cap) + slope_at_cap() * (d - cap);
    }
    double slope(double d) const
    {
        if (d <= knee)
            return ratio;
        if (d <= cap)
            return curve->marginal(d / length - circuit);
        return slope_at_cap();
    }
    double curvature(double d) const
    {
        if (d <= knee || d >= cap)
            return 0;
        return curve->curvature(d / length - circuit) / length;
    }
};

enum class Row { XLower, YLower, ELower, EUpper, Cap, ScCausal, ScOverflow, BCausal, BOverflow };

struct Reduced {
    std::size_t n = 0;
    std::vector<Eigen::Index> x, y, e; // -1 when the variable is absent
    Eigen::Index vars = 0;
    Eigen::MatrixXd a;
    Eigen::VectorXd c;
    std::vector<std::pair<Row, std::size_t>> tags;
    std::size_t locked = 0; // leading epochs with no energy yet
};

Reduced build_reduced(const OfflineProblem& p, const std::vector<EpochValue>& ev)
{
    const auto& tl = p.timeline;
    const double eta = p.storage.efficiency;
    Reduced r;
    r.n = tl.epoch_count();
    r.x.assign(r.n, -1);
    r.y.assign(r.n, -1);
    r.e.assign(r.n, -1);
    double cumulative = 0;
    for (std::size_t i = 0; i < r.n; ++i) {
        cumulative += tl.amounts[i];
        if (cumulative <= 0) {
            ++r.locked;
            continue;
        }
        r.x[i] = r.vars++;
        r.y[i] = r.vars++;
    }
    for (std::size_t i = 0; i < r.n; ++i)
        if (tl.amounts[i] > 0)
            r.e[i] = r.vars++;

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    auto add = [&](Row kind, std::size_t i, Eigen::VectorXd row, double bound) {
        if (row.size() == 0 || row.cwiseAbs().maxCoeff() == 0) {
            if (bound < -1e-12 * std::max(1.0, tl.total_energy()))
                throw InfeasibleError("offline: storage limits cannot hold the arrivals");
            return;
        }
        rows.push_back(std::move(row));
        rhs.push_back(bound);
        r.tags.emplace_back(kind, i);
    };
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(r.vars);
    for (std::size_t i = 0; i < r.n; ++i) {
        if (r.x[i] >= 0) {
            Eigen::VectorXd v = zero;
            v(r.x[i]) = -1;
            add(Row::XLower, i, v, 0);
            v = zero;
            v(r.y[i]) = -1;
            add(Row::YLower, i, v, 0);
            v = zero;
            v(r.x[i]) = 1;
            v(r.y[i]) = 1;
            add(Row::Cap, i, v, ev[i].cap);
        }
        if (r.e[i] >= 0) {
            Eigen::VectorXd v = zero;
            v(r.e[i]) = -1;
            add(Row::ELower, i, v, 0);
            v = zero;
            v(r.e[i]) = 1;
            add(Row::EUpper, i, v, tl.amounts[i]);
        }
    }
    double arrived = 0;
    for (std::size_t i = 0; i < r.n; ++i) {
        arrived += tl.amounts[i];
        Eigen::VectorXd csc = zero, osc = zero, cb = zero, ob = zero;
        for (std::size_t j = 0; j <= i; ++j) {
            if (r.e[j] >= 0) {
                csc(r.e[j]) -= 1;
                osc(r.e[j]) += 1;
                cb(r.e[j]) += eta;
                ob(r.e[j]) -= eta;
            }
            if (r.x[j] >= 0) {
                csc(r.x[j]) += 1;
                cb(r.y[j]) += 1;
                if (j < i) {
                    osc(r.x[j]) -= 1;
                    ob(r.y[j]) -= 1;
                }
            }
        }
        add(Row::ScCausal, i, csc, 0);
        add(Row::ScOverflow, i, osc, p.storage.sc_capacity);
        add(Row::BCausal, i, cb, eta * arrived);
        add(Row::BOverflow, i, ob, p.storage.battery_capacity - eta * arrived);
    }
    r.a.resize(static_cast<Eigen::Index>(rows.size()), r.vars);
    r.c.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        r.a.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
        r.c(static_cast<Eigen::Index>(k)) = rhs[k];
    }
    return r;
}

struct RowDuals {
    std::vector<double> x_lower, y_lower, e_lower, e_upper, cap, sc_causal, sc_overflow, b_causal, b_overflow;

    explicit RowDuals(std::size_t n)
        : x_lower(n), y_lower(n), e_lower(n), e_upper(n), cap(n), sc_causal(n), sc_overflow(n), b_causal(n),
          b_overflow(n)
    {
    }
    std::vector<double>& of(Row kind)
    {
        switch (kind) {
        case Row::XLower: return x_lower;
        case Row::YLower: return y_lower;
        case Row::ELower: return e_lower;
        case Row::EUpper: return e_upper;
        case Row::Cap: return cap;
        case Row::ScCausal: return sc_causal;
        case Row::ScOverflow: return sc_overflow;
        case Row::BCausal: return b_causal;
        case Row::BOverflow: return b_overflow;
        }
        return cap;
    }
};

Schedule reconstruct(const BroadcastModel& model, const OfflineProblem& p, const std::vector<EpochValue>& ev,
                     const Reduced& r, const Eigen::VectorXd& z, bool snap)
{
    const auto& tl = p.timeline;
    Schedule s;
    s.epochs.resize(r.n);
    for (std::size_t i = 0; i < r.n; ++i) {
        EpochPlan& e = s.epochs[i];
        const double eps = p.circuit[i];
        double x = r.x[i] >= 0 ? std::max(0.0, z(r.x[i])) : 0.0;
        double y = r.y[i] >= 0 ? std::max(0.0, z(r.y[i])) : 0.0;
        double d = std::min(x + y, ev[i].cap);
        if (snap && d < (eps > 0 ? 1e-6 * (ev[i].q + eps) : 1e-12 * std::max(1.0, tl.total_energy())))
            d = 0;
        const double share_sc = x + y > 0 ? x / (x + y) : 0.0;

        e.deposit_sc = r.e[i] >= 0 ? std::clamp(z(r.e[i]), 0.0, tl.amounts[i]) : 0.0;
        e.deposit_b = tl.amounts[i] - e.deposit_sc;

        double power = 0;
        if (eps > 0) {
            if (d > 0) {
                if (d <= ev[i].knee) {
                    power = ev[i].q;
                    e.duration = std::min(tl.lengths[i], d / (power + eps));
                } else {
                    e.duration = tl.lengths[i];
                    power = std::min(p.peak_power, d / tl.lengths[i] - eps);
                }
            }
        } else {
            e.duration = tl.lengths[i];
            power = std::min(p.peak_power, d / tl.lengths[i]);
        }
        if (power > 0 && e.duration > 0) {
            e.power_sc = share_sc * power;
            e.power_b = power - e.power_sc;
            e.circuit_sc = share_sc * eps;
            e.circuit_b = eps - e.circuit_sc;
            e.level = model.curve.level_at_power(power);
            e.rate = model.curve.rate(power);
        } else {
            e.level = eps > 0 ? model.curve.level_at_power(ev[i].q) : model.curve.zero_power_level();
        }
        e.covariances = model.covariances(power);
        s.objective += e.throughput();
    }
    return s;
}

DualCertificate recover_certificate(const BroadcastModel& model, const OfflineProblem& p,
                                    const std::vector<EpochValue>& ev, const Reduced& r, RowDuals duals,
                                    const Schedule& s)
{
    const std::size_t n = r.n;
    const double eta = p.storage.efficiency;
    const auto& curve = model.curve;

    // Energy in the locked prefix cannot move, so its causality multiplier is
    // raised until every idle epoch there prices energy above its first use.
    auto tail = [n](const std::vector<double>& causal, const std::vector<double>& overflow, std::size_t from) {
        double acc = 0;
        for (std::size_t k = from; k < n; ++k)
            acc += causal[k] - overflow[k];
        return acc;
    };
    if (r.locked > 0) {
        const std::size_t last = r.locked - 1;
        double need = 0;
        for (std::size_t i = 0; i < r.locked; ++i)
            need = std::max(need, ev[i].ratio);
        duals.sc_causal[last] = std::max(0.0, need - tail(duals.sc_causal, duals.sc_overflow, r.locked));
        duals.b_causal[last] = std::max(0.0, need - tail(duals.b_causal, duals.b_overflow, r.locked));
    }

    DualCertificate c;
    c.sc_causality = duals.sc_causal;
    c.sc_overflow = duals.sc_overflow;
    c.battery_causality = duals.b_causal;
    c.battery_overflow = duals.b_overflow;
    for (auto* v : {&c.power, &c.peak, &c.split, &c.circuit_split, &c.rho1_sc, &c.rho2_sc, &c.rho3_sc, &c.rho1_b,
                    &c.rho2_b, &c.rho3_b, &c.duration_lower, &c.duration_upper, &c.level, &c.reference_power})
        v->assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const EpochPlan& e = s.epochs[i];
        const double eps = p.circuit[i];
        const double a_sc = tail(c.sc_causality, c.sc_overflow, i);
        const double a_b = tail(c.battery_causality, c.battery_overflow, i);
        const double price_sc = a_sc + c.sc_overflow[i];
        const double price_b = a_b + c.battery_overflow[i];
        const double cheapest = std::min(price_sc, price_b);
        const bool on = e.duration > 0 && e.power() > 0;

        double level, base;
        if (on) {
            c.reference_power[i] = e.power();
            level = curve.level_at_power(e.power());
            base = cheapest;
        } else {
            c.reference_power[i] = eps > 0 ? ev[i].q : 0.0;
            level = curve.level_at_power(c.reference_power[i]);
            base = ev[i].ratio;
        }
        c.level[i] = level;
        c.peak[i] = std::max(0.0, level - base);
        c.power[i] = level - c.peak[i];
        c.rho2_sc[i] = price_sc - c.power[i];
        c.rho2_b[i] = price_b - c.power[i];
        c.circuit_split[i] = (!on && eps > 0) ? ev[i].ratio : cheapest;
        c.rho3_sc[i] = price_sc - c.circuit_split[i];
        c.rho3_b[i] = price_b - c.circuit_split[i];

        if (eps > 0) {
            const double p_ref = c.reference_power[i];
            const double slack_term =
                curve.rate(p_ref) - level * p_ref + c.peak[i] * p.peak_power - eps * c.circuit_split[i];
            if (!on)
                c.duration_lower[i] = std::max(0.0, -slack_term);
            else if (e.duration >= p.timeline.lengths[i])
                c.duration_upper[i] = std::max(0.0, slack_term);
        } else if (on) {
            c.duration_upper[i] = std::max(0.0, curve.rate(e.power()) - level * e.power() + c.peak[i] * p.peak_power);
        }

        if (r.e[i] >= 0) {
            c.rho1_sc[i] = duals.e_lower[i];
            c.rho1_b[i] = duals.e_upper[i];
        } else {
            c.rho1_sc[i] = std::max(0.0, eta * a_b - a_sc);
            c.rho1_b[i] = std::max(0.0, a_sc - eta * a_b);
        }
        c.split[i] = -a_sc - c.rho1_sc[i];
    }
    return c;
}

} // namespace

OfflineSolution solve_offline(const BroadcastModel& model, const OfflineProblem& problem)
{
    problem.validate();
    const auto& tl = problem.timeline;
    const std::size_t n = tl.epoch_count();

    std::vector<EpochValue> ev;
    ev.reserve(n);
    OfflineSolution sol;
    for (std::size_t i = 0; i < n; ++i) {
        ev.emplace_back(model.curve, tl.lengths[i], problem.circuit[i], problem.peak_power);
        sol.efficient_power.push_back(ev.back().q);
    }

    const Reduced r = build_reduced(problem, ev);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(r.vars);
    RowDuals duals(n);
    if (r.vars > 0 && r.a.rows() > 0) {
        const double scale = std::max(1.0, tl.total_energy());
        Eigen::VectorXd z0 = Eigen::VectorXd::Zero(r.vars);
        for (std::size_t i = 0; i < n; ++i)
            if (r.e[i] >= 0)
                z0(r.e[i]) = 0.5 * tl.amounts[i];
        const detail::InteriorPoint start = detail::find_interior(r.a, r.c, z0, scale);
        Eigen::VectorXd c = r.c;
        if (start.margin < -1e-7 * scale)
            throw InfeasibleError("offline: no schedule satisfies the storage limits for these arrivals");
        if (start.margin <= 1e-9 * scale)
            c.array() += 2 * std::max(0.0, -start.margin) + 1e-11 * scale;

        detail::SmoothObjective f;
        f.value = [&](const Eigen::VectorXd& v) {
            double total = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (r.x[i] >= 0)
                    total -= ev[i].value(v(r.x[i]) + v(r.y[i]));
            return total;
        };
        f.derivatives = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
            g.setZero(r.vars);
            h.setZero(r.vars, r.vars);
            for (std::size_t i = 0; i < n; ++i) {
                if (r.x[i] < 0)
                    continue;
                const double d = v(r.x[i]) + v(r.y[i]);
                const double s = -ev[i].slope(d);
                const double k = -ev[i].curvature(d);
                g(r.x[i]) = s;
                g(r.y[i]) = s;
                h(r.x[i], r.x[i]) = k;
                h(r.x[i], r.y[i]) = k;
                h(r.y[i], r.x[i]) = k;
                h(r.y[i], r.y[i]) = k;
            }
        };
        const detail::BarrierResult res = detail::minimize_with_barrier(f, r.a, c, start.z);
        if (!res.converged)
            throw SolverError("offline: barrier method did not converge");
        z = res.z;
        sol.newton_steps = res.newton_steps;
        for (std::size_t k = 0; k < r.tags.size(); ++k)
            duals.of(r.tags[k].first)[r.tags[k].second] = res.duals(static_cast<Eigen::Index>(k));
    }

    FeasibilityLimits limits{problem.storage, problem.peak_power, problem.circuit};
    sol.schedule = reconstruct(model, problem, ev, r, z, true);
    if (!check_feasibility(tl, sol.schedule, limits).feasible)
        sol.schedule = reconstruct(model, problem, ev, r, z, false);
    sol.certificate = recover_certificate(model, problem, ev, r, std::move(duals), sol.schedule);
    return sol;
}

OfflineSolution solve_offline_ideal(const BroadcastModel& model, const EpochTimeline& timeline,
                                    const StorageParams& storage, double peak_power)
{
    return solve_offline(model, {timeline, storage, peak_power, std::vector<double>(timeline.epoch_count(), 0.0)});
}

OfflineSolution solve_offline_circuit(const BroadcastModel& model, const EpochTimeline& timeline,
                                      const StorageParams& storage, double peak_power, double circuit)
{
    if (!(circuit > 0))
        throw ValidationError("constant circuit power must be positive");
    return solve_offline(model,
                         {timeline, storage, peak_power, std::vector<double>(timeline.epoch_count(), circuit)});
}

OfflineSolution solve_offline_general(const BroadcastModel& model, const EpochTimeline& timeline,
                                      const StorageParams& storage, double peak_power,
                                      const std::vector<double>& circuit)
{
    return solve_offline(model, {timeline, storage, peak_power, circuit});
}

std::vector<CovarianceSet<double>> scaled_covariances(const Schedule& schedule)
{
    std::vector<CovarianceSet<double>> theta;
    theta.reserve(schedule.epochs.size());
    for (const auto& e : schedule.epochs) {
        CovarianceSet<double> t;
        for (const auto& phi : e.covariances)
            t.push_back(phi * e.duration);
        theta.push_back(std::move(t));
    }
    return theta;
}

double perspective_objective(const BroadcastModel& model, const std::vector<CovarianceSet<double>>& theta,
                             const std::vector<double>& tau)
{
    if (theta.size() != tau.size())
        throw DimensionError("perspective objective: one duration per epoch");
    double total = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (tau[i] <= 0)
            continue;
        CovarianceSet<double> phi;
        for (const auto& t : theta[i])
            phi.push_back(t / tau[i]);
        total += tau[i] * weighted_rate(model.channels, model.weights, phi);
    }
    return total;
}

double duration_objective(const BroadcastModel& model, const Schedule& schedule)
{
    double total = 0;
    for (const auto& e : schedule.epochs)
        if (e.duration > 0)
            total += e.duration * weighted_rate(model.channels, model.weights, e.covariances);
    return total;
}

} // namespace ehbc
