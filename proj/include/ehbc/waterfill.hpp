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

// Weighted water-filling over the ZF-DPC eigenmodes.
//
// At water level D every eigenmode (gamma, lambda) receives
// (gamma / D - 1 / lambda)^+, so the sum power P(D) is continuous and
// strictly decreasing wherever it is positive. RateCurve holds the flattened
// mode list and evaluates the concave rate-versus-power function W(P) along
// with its first two derivatives in closed form.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ehbc/channel.hpp"
#include "ehbc/errors.hpp"

namespace ehbc {

template <typename Real>
struct Mode {
    Real weight;
    Real gain;
    Real threshold() const { return weight * gain; }
};

template <typename Real>
class RateCurve {
public:
    RateCurve() = default;

    explicit RateCurve(std::vector<Mode<Real>> modes) : modes_(std::move(modes)) { init(); }

    RateCurve(const EffectiveChannels<Real>& eff, const RVector<Real>& weights)
    {
        if (static_cast<std::size_t>(weights.size()) != eff.user_count())
            throw DimensionError("RateCurve: one weight per user required");
        for (std::size_t k = 0; k < eff.user_count(); ++k) {
            const Real w = weights(static_cast<Eigen::Index>(k));
            for (Eigen::Index m = 0; m < eff.gains[k].size(); ++m)
                modes_.push_back({w, eff.gains[k](m)});
        }
        init();
    }

    const std::vector<Mode<Real>>& modes() const { return modes_; }

    // Level at which the first mode switches on; P(level) = 0 from here up.
    Real zero_power_level() const { return modes_.front().threshold(); }

    Real power_at_level(Real level) const
    {
        Real p = 0;
        for (const auto& m : modes_)
            p += std::max(Real(0), m.weight / level - Real(1) / m.gain);
        return p;
    }

    // Exact inverse of power_at_level via the sorted breakpoints.
    Real level_at_power(Real power) const
    {
        if (power <= Real(0))
            return zero_power_level();
        const std::size_t n = modes_.size();
        for (std::size_t m = 1; m <= n; ++m) {
            const Real level = prefix_weight_[m] / (power + prefix_inv_gain_[m]);
            if (m == n || level >= modes_[m].threshold())
                return level;
        }
        return zero_power_level();
    }

    Real rate(Real power) const
    {
        if (power <= Real(0))
            return Real(0);
        const Real level = level_at_power(power);
        Real r = 0;
        for (const auto& m : modes_) {
            if (m.threshold() <= level)
                break;
            r += m.weight * std::log(m.threshold() / level);
        }
        return r;
    }

    // dW/dP equals the water level.
    Real marginal(Real power) const { return level_at_power(std::max(power, Real(0))); }

    // d2W/dP2 = -level^2 / (sum of active weights); right derivative at mode switches.
    Real curvature(Real power) const
    {
        const Real level = level_at_power(power);
        if (power <= Real(0))
            return -level * level / modes_.front().weight;
        Real active = 0;
        for (const auto& m : modes_) {
            if (m.threshold() <= level)
                break;
            active += m.weight;
        }
        return -level * level / active;
    }

    // Per-mode allocation at a given level, in sorted-mode order.
    std::vector<Real> allocation(Real level) const
    {
        std::vector<Real> q;
        q.reserve(modes_.size());
        for (const auto& m : modes_)
            q.push_back(std::max(Real(0), m.weight / level - Real(1) / m.gain));
        return q;
    }

private:
    void init()
    {
        if (modes_.empty())
            throw DimensionError("RateCurve: no eigenmodes");
        for (const auto& m : modes_) {
            if (!(m.weight > Real(0)))
                throw ValidationError("RateCurve: weights must be positive");
            if (!(m.gain > Real(0)))
                throw RankError("RateCurve: eigenmode gains must be positive");
        }
        std::sort(modes_.begin(), modes_.end(),
                  [](const Mode<Real>& a, const Mode<Real>& b) { return a.threshold() > b.threshold(); });
        prefix_weight_.assign(modes_.size() + 1, Real(0));
        prefix_inv_gain_.assign(modes_.size() + 1, Real(0));
        for (std::size_t m = 0; m < modes_.size(); ++m) {
            prefix_weight_[m + 1] = prefix_weight_[m] + modes_[m].weight;
            prefix_inv_gain_[m + 1] = prefix_inv_gain_[m] + Real(1) / modes_[m].gain;
        }
    }

    std::vector<Mode<Real>> modes_;
    std::vector<Real> prefix_weight_;
    std::vector<Real> prefix_inv_gain_;
};

template <typename Real>
struct WaterLevelSolution {
    Real level = 0;
    CovarianceSet<Real> covariances;
    Real sum_power = 0;
    Real rate = 0;
};

template <typename Real>
Real sum_power_for_level(const EffectiveChannels<Real>& eff, const RVector<Real>& weights, Real level)
{
    if (!(level > Real(0)))
        throw ValidationError("water level must be positive");
    return RateCurve<Real>(eff, weights).power_at_level(level);
}

// Phi_k = L^-1 U diag((gamma lambda / level - 1)^+) U^H L^-H with L L^H = U diag(lambda) U^H.
template <typename Real>
WaterLevelSolution<Real> covariances_for_level(const EffectiveChannels<Real>& eff, const RVector<Real>& weights,
                                               Real level)
{
    if (!(level > Real(0)))
        throw ValidationError("water level must be positive");
    if (static_cast<std::size_t>(weights.size()) != eff.user_count())
        throw DimensionError("covariances_for_level: one weight per user required");
    using Mat = CMatrix<Real>;
    WaterLevelSolution<Real> sol;
    sol.level = level;
    for (std::size_t k = 0; k < eff.user_count(); ++k) {
        const Real gamma = weights(static_cast<Eigen::Index>(k));
        const Mat& l = eff.factors[k];
        Eigen::SelfAdjointEigenSolver<Mat> es(l * l.adjoint());
        RVector<Real> fill = (gamma * es.eigenvalues().array() / level - Real(1)).max(Real(0)).matrix();
        Mat inner = es.eigenvectors() * fill.template cast<std::complex<Real>>().asDiagonal() *
                    es.eigenvectors().adjoint();
        // L^-1 inner L^-H via two triangular solves.
        Mat left = l.template triangularView<Eigen::Lower>().solve(inner);
        Mat phi = l.template triangularView<Eigen::Lower>().solve(left.adjoint()).adjoint();
        phi = Real(0.5) * (phi + phi.adjoint());
        sol.sum_power += std::real(phi.trace());
        sol.covariances.push_back(std::move(phi));
    }
    sol.rate = weighted_rate(eff, weights, sol.covariances);
    return sol;
}

// Bisection on the level until |P(level) - target| <= 1e-12 max(1, target).
template <typename Real>
Real level_for_budget(const EffectiveChannels<Real>& eff, const RVector<Real>& weights, Real target)
{
    if (target < Real(0))
        throw ValidationError("power budget must be nonnegative");
    const RateCurve<Real> curve(eff, weights);
    const Real hi0 = curve.zero_power_level();
    if (target == Real(0))
        return hi0;
    Real weight_sum = 0, inv_gain_sum = 0;
    for (const auto& m : curve.modes()) {
        weight_sum += m.weight;
        inv_gain_sum += Real(1) / m.gain;
    }
    // P(lo) >= sum(gamma / lo - 1 / lambda) = target.
    Real lo = weight_sum / (target + inv_gain_sum);
    Real hi = hi0;
    const Real tol = Real(1e-12) * std::max(Real(1), target);
    Real mid = lo;
    for (int it = 0; it < 200; ++it) {
        mid = Real(0.5) * (lo + hi);
        const Real p = curve.power_at_level(mid);
        if (std::abs(p - target) <= tol || (hi - lo) < Real(1e-14) * hi0)
            break;
        if (p > target)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

// W(P): weighted rate at the water-filling optimum for sum power P.
template <typename Real>
Real rate_at_power(const EffectiveChannels<Real>& eff, const RVector<Real>& weights, Real power)
{
    if (power < Real(0))
        throw ValidationError("power must be nonnegative");
    if (power == Real(0))
        return Real(0);
    return covariances_for_level(eff, weights, level_for_budget(eff, weights, power)).rate;
}

} // namespace ehbc
