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

#include "barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ehbc/errors.hpp"

namespace ehbc::detail {

namespace {

double barrier_value(const SmoothObjective& f, double t, const Eigen::VectorXd& z, const Eigen::VectorXd& s)
{
    return t * f.value(z) - s.array().log().sum();
}

} // namespace

BarrierResult minimize_with_barrier(const SmoothObjective& f, const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                    Eigen::VectorXd z0, const BarrierOptions& opts)
{
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    BarrierResult out;
    out.z = std::move(z0);
    Eigen::VectorXd s = c - a * out.z;
    if ((s.array() <= 0).any())
        throw SolverError("barrier: starting point is not strictly feasible");

    Eigen::VectorXd g(n), step(n), ds(m);
    Eigen::MatrixXd h(n, n);
    double t = opts.initial_t;
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        double last_decrement = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opts.max_newton; ++it) {
            f.derivatives(out.z, g, h);
            const Eigen::VectorXd inv_s = s.cwiseInverse();
            const Eigen::VectorXd grad = t * g + a.transpose() * inv_s;
            const Eigen::MatrixXd hess = t * h + a.transpose() * inv_s.cwiseAbs2().asDiagonal() * a;
            // Symmetric diagonal scaling keeps the factorization stable when
            // active rows push Hessian entries many orders above the rest.
            const Eigen::VectorXd d = hess.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
            const Eigen::MatrixXd scaled = d.asDiagonal() * hess * d.asDiagonal();
            step = -(d.asDiagonal() * scaled.ldlt().solve(d.asDiagonal() * grad)).eval();
            const double decrement = -grad.dot(step);
            ++out.newton_steps;
            if (!std::isfinite(decrement) || decrement * 0.5 <= opts.newton_tolerance)
                break;
            if (it > 0 && decrement >= last_decrement && decrement * 0.5 <= 1e-12)
                break; // stalled at rounding level
            last_decrement = decrement;

            ds = a * step;
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < m; ++j)
                if (ds(j) > 0)
                    alpha = std::min(alpha, 0.99 * s(j) / ds(j));

            if (decrement < 0.2 && alpha == 1.0) {
                // Quadratic region: the objective difference is below rounding at large t.
                out.z += step;
                s -= ds;
                continue;
            }
            const double f0 = barrier_value(f, t, out.z, s);
            bool moved = false;
            while (alpha > 1e-16) {
                const Eigen::VectorXd zn = out.z + alpha * step;
                const Eigen::VectorXd sn = s - alpha * ds;
                if ((sn.array() > 0).all() && barrier_value(f, t, zn, sn) <= f0 - 1e-4 * alpha * decrement) {
                    out.z = zn;
                    s = sn;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved)
                break;
        }
        // Slacks stay as tracked by the iteration: recomputing c - A z cancels
        // catastrophically for active rows, and the duals 1 / (t s) would lose
        // most of their digits.
        const double fv = f.value(out.z);
        if (static_cast<double>(m) / t <= opts.gap_tolerance * std::max(1.0, std::abs(fv))) {
            out.converged = true;
            break;
        }
        t *= opts.growth;
    }
    out.t = t;
    out.value = f.value(out.z);
    out.duals = (t * s.array()).inverse().matrix();
    return out;
}

InteriorPoint find_interior(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Eigen::VectorXd& z0, double cap)
{
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    // Variables (z, u); minimize -u subject to A z + u <= c and u <= cap.
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(m + 1, n + 1);
    a1.topLeftCorner(m, n) = a;
    a1.col(n).setOnes();
    Eigen::VectorXd c1(m + 1);
    c1.head(m) = c;
    c1(m) = cap;

    Eigen::VectorXd w(n + 1);
    w.head(n) = z0;
    const double worst = (a * z0 - c).maxCoeff();
    w(n) = std::min(-worst, cap) - 1.0 - std::abs(worst);

    SmoothObjective f;
    f.value = [n](const Eigen::VectorXd& v) { return -v(n); };
    f.derivatives = [n](const Eigen::VectorXd&, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
        g.setZero(n + 1);
        g(n) = -1.0;
        h.setZero(n + 1, n + 1);
    };
    BarrierOptions opts;
    opts.gap_tolerance = 1e-12;
    opts.initial_t = 1.0 / std::max(1.0, cap);
    const BarrierResult r = minimize_with_barrier(f, a1, c1, w, opts);

    InteriorPoint p;
    p.z = r.z.head(n);
    p.margin = (c - a * p.z).minCoeff();
    return p;
}

} // namespace ehbc::detail
