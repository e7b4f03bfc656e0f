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

// Log-barrier interior-point minimizer for a smooth convex objective over a
// polyhedron {z : A z <= c}, plus a phase-one search for a strictly interior
// starting point. Internal to the offline solver.

#include <Eigen/Dense>

#include <functional>

namespace ehbc::detail {

struct SmoothObjective {
    std::function<double(const Eigen::VectorXd&)> value;
    // Gradient and Hessian; the Hessian must be positive semidefinite.
    std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)> derivatives;
};

struct BarrierOptions {
    double gap_tolerance = 1e-10;    // stop when m / t <= gap_tolerance * max(1, |f|)
    double newton_tolerance = 1e-18; // half squared Newton decrement
    double initial_t = 1.0;
    double growth = 10.0;
    int max_newton = 200;
    int max_outer = 60;
};

struct BarrierResult {
    Eigen::VectorXd z;
    Eigen::VectorXd duals; // one per row, 1 / (t s)
    double value = 0;
    double t = 0;
    int newton_steps = 0;
    bool converged = false;
};

// `z0` must satisfy A z0 < c strictly.
BarrierResult minimize_with_barrier(const SmoothObjective& f, const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                    Eigen::VectorXd z0, const BarrierOptions& opts = {});

struct InteriorPoint {
    Eigen::VectorXd z;
    double margin = 0; // largest u found with A z + u <= c; positive means strictly interior
};

// Maximizes the uniform slack u subject to A z + u <= c and u <= cap.
InteriorPoint find_interior(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Eigen::VectorXd& z0, double cap);

} // namespace ehbc::detail
