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

// JSON configuration for experiments and single solves.
//
// {
//   "scenario": {"arrivals": [[t, E], ...] | "poisson": {"rate", "E_avg", "initial"},
//                "T", "sc_cap", "b_cap", "eta"},
//   "channels": {"M", "users": [{"n", "gamma"}], "seed", "pinned"} | {"H": ..., "users": ...},
//   "p_peak", "epsilon", "epsilon_sequence", "seed", "trials", "threads",
//   "policies": ["offline-ideal", ...], "sweep": {"axis", "values"}
// }
//
// Every key is optional; missing keys keep default_parameters(). Scenario
// keys are also accepted at the top level.

#include <string>

#include "ehbc/channel.hpp"
#include "ehbc/experiment.hpp"

namespace ehbc {

ExperimentSpec parse_config(const std::string& json_text);
ExperimentSpec load_config(const std::string& path);

// Explicit channel matrices as {"M", "users", "H": [per-user [[re, im], ...] rows]}.
std::string channels_to_json(const ChannelSet<double>& channels);
ChannelSet<double> channels_from_json(const std::string& json_text);

} // namespace ehbc
