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

#include <stdexcept>
#include <string>

namespace ehbc {

// Bad input: dimensions, parameter ranges, malformed configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Problem data admits no feasible schedule.
class InfeasibleError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Effective channel of some user lost rank.
class RankError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver failed to reach its tolerance.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be opened or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ehbc
