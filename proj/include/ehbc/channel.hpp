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

// Zero-forcing dirty-paper-coding decomposition of a MIMO broadcast channel.
//
// User k sees interference from users 1..k-1 cancelled by the encoder and
// interference towards users 1..k-1 nulled by a precoder basis B_k drawn
// from the null space of the stacked predecessor channels. What remains is
// a per-user square factor L_k with H_k B_k = [L_k 0].

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "ehbc/errors.hpp"

namespace ehbc {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
struct UserConfig {
    int antennas = 1;
    Real weight = Real(1);
};

template <typename Real>
struct ChannelSet {
    int transmit_antennas = 0;
    std::vector<UserConfig<Real>> users;
    std::vector<CMatrix<Real>> gains; // H_k, antennas_k x transmit_antennas
};

template <typename Real>
struct EffectiveChannels {
    std::vector<CMatrix<Real>> bases;   // B_k, M x (M - sum_{j<k} n_j)
    std::vector<CMatrix<Real>> factors; // L_k, n_k x n_k, lower triangular
    std::vector<RVector<Real>> gains;   // eigenvalues of L_k L_k^H, descending

    std::size_t user_count() const { return factors.size(); }
};

template <typename Real>
using CovarianceSet = std::vector<CMatrix<Real>>;

template <typename Real>
RVector<Real> weights_of(const ChannelSet<Real>& channels)
{
    RVector<Real> w(static_cast<Eigen::Index>(channels.users.size()));
    for (std::size_t k = 0; k < channels.users.size(); ++k)
        w(static_cast<Eigen::Index>(k)) = channels.users[k].weight;
    return w;
}

template <typename Real>
void validate_users(int transmit_antennas, const std::vector<UserConfig<Real>>& users)
{
    if (users.empty())
        throw DimensionError("channel needs at least one user");
    int total = 0;
    for (const auto& u : users) {
        if (u.antennas < 1)
            throw DimensionError("user antenna count must be >= 1");
        if (!(u.weight > Real(0)) || !std::isfinite(static_cast<double>(u.weight)))
            throw ValidationError("user weight must be positive and finite");
        total += u.antennas;
    }
    if (transmit_antennas < total)
        throw DimensionError("transmit antennas (" + std::to_string(transmit_antennas) +
                             ") fewer than total receive antennas (" + std::to_string(total) + ")");
}

// I.i.d. circularly-symmetric complex Gaussian entries with unit variance.
template <typename Real = double>
ChannelSet<Real> generate_channels(int transmit_antennas, const std::vector<UserConfig<Real>>& users,
                                   std::uint64_t seed)
{
    validate_users(transmit_antennas, users);
    std::mt19937_64 rng(seed);
    std::normal_distribution<Real> normal(Real(0), std::sqrt(Real(0.5)));

    ChannelSet<Real> out;
    out.transmit_antennas = transmit_antennas;
    out.users = users;
    for (const auto& u : users) {
        CMatrix<Real> h(u.antennas, transmit_antennas);
        for (Eigen::Index r = 0; r < h.rows(); ++r)
            for (Eigen::Index c = 0; c < h.cols(); ++c) {
                const Real re = normal(rng);
                const Real im = normal(rng);
                h(r, c) = std::complex<Real>(re, im);
            }
        out.gains.push_back(std::move(h));
    }
    return out;
}

template <typename Real>
void validate_channels(const ChannelSet<Real>& channels)
{
    validate_users(channels.transmit_antennas, channels.users);
    if (channels.gains.size() != channels.users.size())
        throw DimensionError("one channel matrix per user required");
    for (std::size_t k = 0; k < channels.users.size(); ++k) {
        const auto& h = channels.gains[k];
        if (h.rows() != channels.users[k].antennas || h.cols() != channels.transmit_antennas)
            throw DimensionError("channel matrix " + std::to_string(k) + " has wrong shape");
    }
}

template <typename Real = double>
EffectiveChannels<Real> decompose_zf_dpc(const ChannelSet<Real>& channels)
{
    validate_channels(channels);
    using Mat = CMatrix<Real>;
    const Eigen::Index m_tx = channels.transmit_antennas;

    EffectiveChannels<Real> eff;
    Eigen::Index preceding = 0;
    for (std::size_t k = 0; k < channels.users.size(); ++k) {
        const Mat& h = channels.gains[k];
        const Eigen::Index n_k = h.rows();

        Mat basis;
        if (preceding == 0) {
            basis = Mat::Identity(m_tx, m_tx);
        } else {
            Mat stacked(preceding, m_tx);
            Eigen::Index row = 0;
            for (std::size_t j = 0; j < k; ++j) {
                stacked.middleRows(row, channels.gains[j].rows()) = channels.gains[j];
                row += channels.gains[j].rows();
            }
            // Trailing columns of the full Q of stacked^H span its null space.
            Eigen::HouseholderQR<Mat> qr(stacked.adjoint());
            Mat q = qr.householderQ() * Mat::Identity(m_tx, m_tx);
            basis = q.rightCols(m_tx - preceding);
        }

        // LQ of the projected channel: (H_k B)^H = Q R, so H_k (B Q) = [R^H 0].
        const Mat projected = h * basis;
        Eigen::HouseholderQR<Mat> lq(projected.adjoint());
        const Eigen::Index n_bar = basis.cols();
        Mat rotation = lq.householderQ() * Mat::Identity(n_bar, n_bar);
        basis = basis * rotation;
        Mat upper = lq.matrixQR().topRows(n_k).template triangularView<Eigen::Upper>();
        Mat factor = upper.adjoint();

        Eigen::SelfAdjointEigenSolver<Mat> es(factor * factor.adjoint(), Eigen::EigenvaluesOnly);
        RVector<Real> lambda = es.eigenvalues().reverse();
        if (lambda.size() == 0 || lambda.minCoeff() < Real(1e-12))
            throw RankError("effective channel of user " + std::to_string(k) + " is rank deficient");

        eff.bases.push_back(std::move(basis));
        eff.factors.push_back(std::move(factor));
        eff.gains.push_back(std::move(lambda));
        preceding += n_k;
    }
    return eff;
}

// Hermitian and min eigenvalue >= -tol * max(1, ||A||).
template <typename Real>
bool is_psd(const CMatrix<Real>& a, Real tol = Real(1e-10))
{
    if (a.rows() != a.cols())
        return false;
    if (a.size() == 0)
        return true;
    const Real scale = std::max(Real(1), a.norm());
    if ((a - a.adjoint()).norm() > tol * scale)
        return false;
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol * scale;
}

template <typename Real>
Real min_eigenvalue(const CMatrix<Real>& a)
{
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// sum_k w_k log det(I + L_k Phi_k L_k^H), natural log.
template <typename Real>
Real weighted_rate(const EffectiveChannels<Real>& eff, const RVector<Real>& weights,
                   const CovarianceSet<Real>& covs)
{
    if (covs.size() != eff.user_count() || static_cast<std::size_t>(weights.size()) != eff.user_count())
        throw DimensionError("weighted_rate: user count mismatch");
    Real total = 0;
    for (std::size_t k = 0; k < covs.size(); ++k) {
        const auto& l = eff.factors[k];
        if (covs[k].rows() != l.cols() || covs[k].cols() != l.cols())
            throw DimensionError("weighted_rate: covariance shape mismatch");
        if (!is_psd(covs[k]))
            throw ValidationError("weighted_rate: covariance is not positive semidefinite");
        const Eigen::Index n = l.rows();
        CMatrix<Real> m = CMatrix<Real>::Identity(n, n) + l * covs[k] * l.adjoint();
        Eigen::LLT<CMatrix<Real>> llt(m.template selfadjointView<Eigen::Lower>());
        Real logdet = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            logdet += Real(2) * std::log(std::real(llt.matrixL()(i, i)));
        total += weights(static_cast<Eigen::Index>(k)) * logdet;
    }
    return total;
}

} // namespace ehbc
