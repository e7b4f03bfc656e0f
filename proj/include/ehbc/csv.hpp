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

// CSV emission: header row, 12 significant digits, LF line endings.

#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ehbc/energy.hpp"
#include "ehbc/experiment.hpp"
#include "ehbc/offline.hpp"
#include "ehbc/online.hpp"

namespace ehbc {

std::string format_number(double value);

struct NamedTrace {
    std::string policy;
    std::vector<TracePoint> points;
};

void write_schedule_csv(std::ostream& out, const EpochTimeline& timeline, const Schedule& schedule);
void write_certificate_csv(std::ostream& out, const DualCertificate& certificate);
void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_trace_csv(std::ostream& out, const std::vector<NamedTrace>& traces);

// Writes through `writer` to `path`; "-" means standard output. Open and
// write failures raise IoError carrying the system message.
void emit_csv(const std::string& path, const std::function<void(std::ostream&)>& writer);

} // namespace ehbc
