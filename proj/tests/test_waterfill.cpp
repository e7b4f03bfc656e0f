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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ehbc/channel.hpp"
#include "ehbc/errors.hpp"
#include "ehbc/waterfill.hpp"

using namespace ehbc;
using Catch::Approx;
using Mat = CMatrix<double>;

namespace {

// One user whose L L^H has the given eigenvalues (L diagonal).
EffectiveChannels<double> diagonal_user(const std::vector<double>& lambdas)
{
    const Eigen::Index n = static_cast<Eigen::Index>(lambdas.size());
    EffectiveChannels<double> eff;
    Mat l = Mat::Zero(n, n);
    RVector<double> g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        l(i, i) = std::sqrt(lambdas[static_cast<std::size_t>(i)]);
        g(i) = lambdas[static_cast<std::size_t>(i)];
    }
    std::sort(g.data(), g.data() + n, std::greater<>());
    eff.bases.push_back(Mat::Identity(n, n));
    eff.factors.push_back(l);
    eff.gains.push_back(g);
    return eff;
}

RVector<double> ones(Eigen::Index n) { return RVector<double>::Ones(n); }

// Golden-section maximization of a unimodal function on [a, b].
template <typename F>
double golden_max(F f, double a, double b, int iters = 80)
{
    const double r = (std::sqrt(5.0) - 1) / 2;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        }
    }
    return std::max(fc, fd);
}

// Best weighted rate over 2x2 covariances of trace p for one user, by a
// search over eigenvalue split and eigenvector orientation.
double direct_single_user(const EffectiveChannels<double>& eff, const RVector<double>& w, double p)
{
    double best = 0;
    const int n = 24;
    double bt = 0, bp = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double theta = M_PI / 2 * i / n, phi = 2 * M_PI * j / n;
            auto value = [&](double c) {
                Mat v(2, 2);
                v << std::cos(theta), -std::sin(theta) * std::polar(1.0, -phi), std::sin(theta) * std::polar(1.0, phi),
                    std::cos(theta);
                Mat d = Mat::Zero(2, 2);
                d(0, 0) = c * p;
                d(1, 1) = (1 - c) * p;
                return weighted_rate(eff, w, {v * d * v.adjoint()});
            };
            const double r = golden_max(value, 0, 1, 40);
            if (r > best) {
                best = r;
                bt = theta;
                bp = phi;
            }
        }
    // Local refinement around the best orientation.
    double step_t = M_PI / 2 / n, step_p = 2 * M_PI / n;
    for (int round = 0; round < 30; ++round) {
        bool improved = false;
        for (int dt = -1; dt <= 1; ++dt)
            for (int dp = -1; dp <= 1; ++dp) {
                const double theta = bt + dt * step_t, phi = bp + dp * step_p;
                auto value = [&](double c) {
                    Mat v(2, 2);
                    v << std::cos(theta), -std::sin(theta) * std::polar(1.0, -phi),
                        std::sin(theta) * std::polar(1.0, phi), std::cos(theta);
                    Mat d = Mat::Zero(2, 2);
                    d(0, 0) = c * p;
                    d(1, 1) = (1 - c) * p;
                    return weighted_rate(eff, w, {v * d * v.adjoint()});
                };
                const double r = golden_max(value, 0, 1, 60);
                if (r > best + 1e-15) {
                    best = r;
                    bt = theta;
                    bp = phi;
                    improved = true;
                }
            }
        if (!improved) {
            step_t /= 2;
            step_p /= 2;
        }
    }
    return best;
}

} // namespace

TEST_CASE("covariances_for_level on hand-evaluated cases")
{
    const auto scalar = diagonal_user({1.0});
    auto s = covariances_for_level(scalar, ones(1), 0.5);
    CHECK(std::real(s.covariances[0](0, 0)) == Approx(1.0));
    CHECK(s.sum_power == Approx(1.0));
    for (double level : {1.0, 1.5, 10.0}) {
        s = covariances_for_level(scalar, ones(1), level);
        CHECK(s.sum_power == 0.0);
        CHECK(std::abs(s.covariances[0](0, 0)) == 0.0);
    }
    const auto two = diagonal_user({1.0, 4.0});
    s = covariances_for_level(two, ones(1), 0.25);
    CHECK(s.sum_power == Approx(6.75).epsilon(1e-12));
    CHECK(is_psd(s.covariances[0]));
    CHECK(sum_power_for_level(two, ones(1), 0.25) == Approx(6.75).epsilon(1e-12));
    CHECK(sum_power_for_level(scalar, ones(1), 0.5) == Approx(1.0));
    CHECK_THROWS_AS(covariances_for_level(scalar, ones(1), 0.0), ValidationError);
    CHECK_THROWS_AS(sum_power_for_level(scalar, ones(1), -1.0), ValidationError);
}

TEST_CASE("level_for_budget inverts the sum power")
{
    const auto scalar = diagonal_user({1.0});
    const auto two = diagonal_user({1.0, 4.0});
    CHECK(level_for_budget(two, ones(1), 0.0) == 4.0);
    CHECK(level_for_budget(scalar, ones(1), 1.0) == Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(level_for_budget(two, ones(1), 6.75) - 0.25) <= 1e-8);
    CHECK_THROWS_AS(level_for_budget(two, ones(1), -0.1), ValidationError);
}

TEST_CASE("rate_at_power on hand-evaluated cases")
{
    const auto scalar = diagonal_user({1.0});
    const auto two = diagonal_user({1.0, 4.0});
    CHECK(rate_at_power(scalar, ones(1), 0.0) == 0.0);
    CHECK(rate_at_power(scalar, ones(1), 1.0) == Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(rate_at_power(two, ones(1), 6.75) == Approx(std::log(4.0) + std::log(16.0)).epsilon(1e-9));
    CHECK(rate_at_power(two, ones(1), 6.75) == Approx(4.1589).margin(1e-4));
}

TEST_CASE("sum power is strictly decreasing and round-trips through the level")
{
    const std::vector<UserConfig<double>> users{{2, 0.6}, {1, 1.4}, {1, 1.0}};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto set = generate_channels(5, users, s);
        const auto eff = decompose_zf_dpc(set);
        const auto w = weights_of(set);
        const RateCurve<double> curve(eff, w);
        const double top = curve.zero_power_level();
        const double d1 = top * (0.05 + 0.9 * u(rng)), d2 = top * (0.05 + 0.9 * u(rng));
        const double lo = std::min(d1, d2), hi = std::max(d1, d2);
        const double p_lo = sum_power_for_level(eff, w, lo), p_hi = sum_power_for_level(eff, w, hi);
        if (p_hi > 0 && hi > lo)
            CHECK(p_lo > p_hi);
        if (p_lo > 0)
            CHECK(level_for_budget(eff, w, p_lo) == Approx(lo).epsilon(1e-7));
        // Closed-form power per mode agrees with the covariance traces.
        double expect = 0;
        for (std::size_t k = 0; k < eff.user_count(); ++k)
            for (Eigen::Index m = 0; m < eff.gains[k].size(); ++m)
                expect += std::max(0.0, w(static_cast<Eigen::Index>(k)) / lo - 1 / eff.gains[k](m));
        CHECK(covariances_for_level(eff, w, lo).sum_power == Approx(expect).epsilon(1e-9).margin(1e-12));
    }
}

TEST_CASE("water-filling covariances satisfy the per-user stationarity condition")
{
    const std::vector<UserConfig<double>> users{{2, 0.8}, {2, 1.2}};
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto set = generate_channels(4, users, 50 + s);
        const auto eff = decompose_zf_dpc(set);
        const auto w = weights_of(set);
        const double level = RateCurve<double>(eff, w).zero_power_level() * (0.1 + 0.008 * static_cast<double>(s));
        const auto sol = covariances_for_level(eff, w, level);
        for (std::size_t k = 0; k < 2; ++k) {
            const Mat& l = eff.factors[k];
            const Mat& phi = sol.covariances[k];
            CHECK(is_psd(phi));
            CHECK(min_eigenvalue(phi) >= -1e-10);
            const Mat inner = (Mat::Identity(2, 2) + l * phi * l.adjoint()).inverse();
            const Mat grad = w(static_cast<Eigen::Index>(k)) * l.adjoint() * inner * l;
            Eigen::SelfAdjointEigenSolver<Mat> es(grad);
            CHECK(es.eigenvalues().maxCoeff() <= level + 1e-7);
            CHECK((grad * phi - level * phi).norm() <= 1e-7 * std::max(1.0, phi.norm()));
        }
    }
}

TEST_CASE("rate_at_power matches direct maximization over covariances")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> gain(0.2, 3.0), weight(0.5, 2.0), power(0.1, 6.0);
    for (int trial = 0; trial < 10; ++trial) {
        // Two scalar users: search the power split.
        const double g1 = gain(rng), g2 = gain(rng), w1 = weight(rng), w2 = weight(rng), p = power(rng);
        EffectiveChannels<double> eff;
        for (double g : {g1, g2}) {
            eff.bases.push_back(Mat::Identity(1, 1));
            eff.factors.push_back(Mat::Constant(1, 1, std::sqrt(g)));
            eff.gains.push_back(RVector<double>::Constant(1, g));
        }
        RVector<double> w(2);
        w << w1, w2;
        const double direct = golden_max(
            [&](double c) { return w1 * std::log1p(g1 * c * p) + w2 * std::log1p(g2 * (1 - c) * p); }, 0, 1, 200);
        CHECK(rate_at_power(eff, w, p) == Approx(direct).epsilon(1e-5));
    }
    for (int trial = 0; trial < 4; ++trial) {
        // One two-antenna user: search eigenvalue split and orientation.
        const auto set = generate_channels(3, std::vector<UserConfig<double>>{{2, weight(rng)}}, 900 + trial);
        const auto eff = decompose_zf_dpc(set);
        const auto w = weights_of(set);
        const double p = power(rng);
        CHECK(rate_at_power(eff, w, p) == Approx(direct_single_user(eff, w, p)).epsilon(1e-5));
    }
}

TEST_CASE("W is concave and its closed-form derivatives agree with differences")
{
    const std::vector<UserConfig<double>> users{{2, 0.5}, {2, 1.5}};
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 8.0);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto set = generate_channels(4, users, 300 + s);
        const auto eff = decompose_zf_dpc(set);
        const auto w = weights_of(set);
        const RateCurve<double> curve(eff, w);
        const double a = u(rng), b = u(rng);
        const double mid = rate_at_power(eff, w, 0.5 * (a + b));
        CHECK(mid >= 0.5 * (rate_at_power(eff, w, a) + rate_at_power(eff, w, b)) - 1e-9);
        CHECK(curve.rate(a) == Approx(rate_at_power(eff, w, a)).epsilon(1e-9).margin(1e-12));
        const double h = 1e-5, x = 0.5 + a;
        const double fd = (curve.rate(x + h) - curve.rate(x - h)) / (2 * h);
        CHECK(curve.marginal(x) == Approx(fd).epsilon(1e-6));
    }
}
