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

#include "ehbc/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>

#include "ehbc/errors.hpp"

namespace ehbc {

std::string format_number(double value)
{
    if (value == 0)
        return "0"; // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells)
{
    for (std::size_t j = 0; j < cells.size(); ++j) {
        if (j)
            out << ',';
        out << cells[j];
    }
    out << '\n';
}

} // namespace

void write_schedule_csv(std::ostream& out, const EpochTimeline& timeline, const Schedule& schedule)
{
    if (schedule.epochs.size() != timeline.epoch_count())
        throw DimensionError("schedule and timeline disagree on epoch count");
    write_row(out, {"i", "t_i", "l_i", "tau", "p_sc", "p_b", "eps_sc", "eps_b", "E_sc_dep", "E_b_dep", "rate"});
    for (std::size_t i = 0; i < schedule.epochs.size(); ++i) {
        const EpochPlan& e = schedule.epochs[i];
        write_row(out, {std::to_string(i + 1), format_number(timeline.arrival_times[i]),
                        format_number(timeline.lengths[i]), format_number(e.duration), format_number(e.power_sc),
                        format_number(e.power_b), format_number(e.circuit_sc), format_number(e.circuit_b),
                        format_number(e.deposit_sc), format_number(e.deposit_b), format_number(e.rate)});
    }
}

void write_certificate_csv(std::ostream& out, const DualCertificate& c)
{
    const std::vector<std::pair<const char*, const std::vector<double>*>> cols = {
        {"lambda_sc_1", &c.sc_causality}, {"lambda_sc_2", &c.sc_overflow},
        {"lambda_b_1", &c.battery_causality}, {"lambda_b_2", &c.battery_overflow},
        {"mu", &c.power}, {"varpi", &c.peak}, {"nu", &c.split}, {"omega", &c.circuit_split},
        {"rho1_sc", &c.rho1_sc}, {"rho2_sc", &c.rho2_sc}, {"rho3_sc", &c.rho3_sc},
        {"rho1_b", &c.rho1_b}, {"rho2_b", &c.rho2_b}, {"rho3_b", &c.rho3_b},
        {"kappa", &c.duration_lower}, {"z", &c.duration_upper}, {"Delta", &c.level},
        {"reference_power", &c.reference_power},
    };
    std::vector<std::string> header{"i"};
    for (const auto& col : cols)
        header.push_back(col.first);
    write_row(out, header);
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::vector<std::string> row{std::to_string(i + 1)};
        for (const auto& col : cols)
            row.push_back(i < col.second->size() ? format_number((*col.second)[i]) : "");
        write_row(out, row);
    }
}

void write_report_csv(std::ostream& out, const ExperimentReport& report)
{
    const std::string axis = report.axis == SweepAxis::None ? "point" : axis_name(report.axis);
    write_row(out, {axis, "policy", "mean", "stderr", "ratio_to_offline", "discarded"});
    for (const ReportRow& r : report.rows)
        write_row(out, {format_number(r.axis_value), to_string(r.policy), format_number(r.mean),
                        format_number(r.standard_error),
                        r.ratio_to_offline ? format_number(*r.ratio_to_offline) : "", format_number(r.discarded)});
}

void write_trace_csv(std::ostream& out, const std::vector<NamedTrace>& traces)
{
    write_row(out, {"policy", "time", "cumulative_throughput"});
    for (const NamedTrace& t : traces)
        for (const TracePoint& p : t.points)
            write_row(out, {t.policy, format_number(p.time), format_number(p.cumulative)});
}

void emit_csv(const std::string& path, const std::function<void(std::ostream&)>& writer)
{
    if (path == "-") {
        writer(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    writer(file);
    file.flush();
    if (!file)
        throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
}

} // namespace ehbc
