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

#include <Eigen/Dense>

#include <cmath>
#include <utility>
#include <vector>

#include "ehbc/channel.hpp"
#include "ehbc/waterfill.hpp"

namespace ehbc {

// Decomposed broadcast channel plus the rate curve W(P) the schedulers work with.
struct BroadcastModel {
    EffectiveChannels<double> channels;
    RVector<double> weights;
    RateCurve<double> curve;

    BroadcastModel(EffectiveChannels<double> eff, RVector<double> w)
        : channels(std::move(eff)), weights(std::move(w)), curve(channels, weights)
    {
    }

    static BroadcastModel from_channels(const ChannelSet<double>& set)
    {
        return BroadcastModel(decompose_zf_dpc(set), weights_of(set));
    }

    // Single-antenna users with effective factors L_k = sqrt(gain_k).
    static BroadcastModel scalar(const std::vector<double>& gains, const std::vector<double>& weights)
    {
        EffectiveChannels<double> eff;
        RVector<double> w(static_cast<Eigen::Index>(weights.size()));
        for (std::size_t k = 0; k < gains.size(); ++k) {
            eff.bases.push_back(CMatrix<double>::Identity(1, 1));
            eff.factors.push_back(CMatrix<double>::Constant(1, 1, std::sqrt(gains[k])));
            eff.gains.push_back(RVector<double>::Constant(1, gains[k]));
            w(static_cast<Eigen::Index>(k)) = weights.at(k);
        }
        return BroadcastModel(std::move(eff), std::move(w));
    }

    CovarianceSet<double> covariances(double power) const
    {
        if (power <= 0) {
            CovarianceSet<double> zero;
            for (const auto& l : channels.factors)
                zero.push_back(CMatrix<double>::Zero(l.cols(), l.cols()));
            return zero;
        }
        return covariances_for_level(channels, weights, curve.level_at_power(power)).covariances;
    }
};

} // namespace ehbc
