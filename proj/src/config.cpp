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

#include "ehbc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ehbc/errors.hpp"

namespace ehbc {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

double number(const json& obj, const char* key, double fallback)
{
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_number())
        throw ValidationError(std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

std::complex<double> entry(const json& e)
{
    if (e.is_number())
        return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    throw ValidationError("channel entry must be a number or an [re, im] pair");
}

CMatrix<double> matrix(const json& rows, int cols)
{
    if (!rows.is_array() || rows.empty())
        throw ValidationError("channel matrix must be a nonempty array of rows");
    CMatrix<double> h(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != cols)
            throw DimensionError("channel row " + std::to_string(r) + " must have " + std::to_string(cols) +
                                 " entries");
        for (int c = 0; c < cols; ++c)
            h(static_cast<Eigen::Index>(r), c) = entry(rows[r][static_cast<std::size_t>(c)]);
    }
    return h;
}

std::vector<UserConfig<double>> parse_users(const json& arr)
{
    if (!arr.is_array() || arr.empty())
        throw ValidationError("'users' must be a nonempty array");
    std::vector<UserConfig<double>> users;
    for (const json& u : arr) {
        reject_unknown(u, {"n", "gamma"}, "user");
        UserConfig<double> cfg;
        if (u.contains("n")) {
            if (!u["n"].is_number_integer())
                throw ValidationError("user 'n' must be an integer");
            cfg.antennas = u["n"].get<int>();
        }
        cfg.weight = number(u, "gamma", 1.0);
        users.push_back(cfg);
    }
    return users;
}

ChannelSet<double> explicit_channels(const json& c)
{
    const json& h = c["H"];
    if (!h.is_array() || h.empty() || !h[0].is_array() || h[0].empty())
        throw ValidationError("'H' must be a nonempty array");
    const bool stacked = !h[0][0].is_array() || (h[0][0].size() == 2 && h[0][0][0].is_number());
    ChannelSet<double> set;
    if (stacked) {
        const int m = static_cast<int>(h[0].size());
        const CMatrix<double> all = matrix(h, m);
        std::vector<UserConfig<double>> users;
        if (c.contains("users")) {
            users = parse_users(c["users"]);
        } else {
            users.assign(static_cast<std::size_t>(all.rows()), UserConfig<double>{1, 1.0});
        }
        Eigen::Index row = 0;
        for (const auto& u : users) {
            if (row + u.antennas > all.rows())
                throw DimensionError("'users' antenna counts exceed the rows of 'H'");
            set.gains.push_back(all.middleRows(row, u.antennas));
            row += u.antennas;
        }
        if (row != all.rows())
            throw DimensionError("'users' antenna counts do not cover the rows of 'H'");
        set.transmit_antennas = m;
        set.users = users;
    } else {
        const int m = static_cast<int>(h[0][0].size());
        std::vector<UserConfig<double>> users =
            c.contains("users") ? parse_users(c["users"]) : std::vector<UserConfig<double>>(h.size());
        if (users.size() != h.size())
            throw DimensionError("'users' and 'H' list different numbers of users");
        for (std::size_t k = 0; k < h.size(); ++k) {
            set.gains.push_back(matrix(h[k], m));
            users[k].antennas = static_cast<int>(set.gains.back().rows());
        }
        set.transmit_antennas = m;
        set.users = users;
    }
    if (c.contains("M") && c["M"].get<int>() != set.transmit_antennas)
        throw DimensionError("'M' disagrees with the column count of 'H'");
    validate_channels(set);
    return set;
}

void parse_channels(const json& c, ChannelSpec& spec)
{
    if (!c.is_object())
        throw ValidationError("'channels' must be an object");
    reject_unknown(c, {"M", "users", "seed", "pinned", "H"}, "channels");
    if (c.contains("H")) {
        spec.explicit_set = explicit_channels(c);
        spec.transmit_antennas = spec.explicit_set->transmit_antennas;
        spec.users = spec.explicit_set->users;
        return;
    }
    if (c.contains("M")) {
        if (!c["M"].is_number_integer())
            throw ValidationError("'M' must be an integer");
        spec.transmit_antennas = c["M"].get<int>();
    }
    if (c.contains("users"))
        spec.users = parse_users(c["users"]);
    if (c.contains("seed")) {
        spec.seed = c["seed"].get<std::uint64_t>();
        spec.pinned = true;
    }
    if (c.contains("pinned"))
        spec.pinned = c["pinned"].get<bool>();
    validate_users(spec.transmit_antennas, spec.users);
}

const std::set<std::string> kScenarioKeys = {"arrivals", "poisson", "T", "sc_cap", "b_cap", "eta"};

void parse_scenario(const json& s, Parameters& p)
{
    if (s.contains("arrivals") && s.contains("poisson"))
        throw ValidationError("scenario gives both 'arrivals' and 'poisson'");
    if (s.contains("arrivals")) {
        p.scenario.poisson = false;
        p.scenario.arrivals.clear();
        for (const json& a : s["arrivals"]) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                throw ValidationError("each arrival must be a [time, joules] pair");
            p.scenario.arrivals.emplace_back(a[0].get<double>(), a[1].get<double>());
        }
    }
    if (s.contains("poisson")) {
        const json& q = s["poisson"];
        reject_unknown(q, {"rate", "E_avg", "initial"}, "poisson");
        p.scenario.poisson = true;
        p.scenario.arrival_rate = number(q, "rate", p.scenario.arrival_rate);
        p.scenario.mean_amount = number(q, "E_avg", p.scenario.mean_amount);
        p.scenario.initial = number(q, "initial", p.scenario.initial);
    }
    p.scenario.horizon = number(s, "T", p.scenario.horizon);
    p.storage.sc_capacity = number(s, "sc_cap", p.storage.sc_capacity);
    p.storage.battery_capacity = number(s, "b_cap", p.storage.battery_capacity);
    p.storage.efficiency = number(s, "eta", p.storage.efficiency);
}

} // namespace

ExperimentSpec parse_config(const std::string& json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ValidationError("configuration must be a JSON object");

    std::set<std::string> allowed = {"scenario", "channels", "p_peak", "epsilon", "epsilon_sequence",
                                     "seed",     "trials",   "threads", "policies", "sweep"};
    allowed.insert(kScenarioKeys.begin(), kScenarioKeys.end());
    reject_unknown(root, allowed, "configuration");

    ExperimentSpec spec;
    try {
        Parameters& p = spec.params;
        if (root.contains("scenario")) {
            reject_unknown(root["scenario"], kScenarioKeys, "scenario");
            parse_scenario(root["scenario"], p);
        }
        parse_scenario(root, p);
        if (root.contains("channels"))
            parse_channels(root["channels"], p.channel);
        p.peak_power = number(root, "p_peak", p.peak_power);
        p.circuit = number(root, "epsilon", p.circuit);
        if (root.contains("epsilon_sequence"))
            p.circuit_sequence = root["epsilon_sequence"].get<std::vector<double>>();
        if (root.contains("seed"))
            spec.seed = root["seed"].get<std::uint64_t>();
        if (root.contains("trials"))
            spec.trials = root["trials"].get<int>();
        if (root.contains("threads"))
            spec.threads = root["threads"].get<unsigned>();
        if (root.contains("policies"))
            for (const json& name : root["policies"])
                spec.policies.push_back(parse_policy(name.get<std::string>()));
        if (root.contains("sweep")) {
            const json& s = root["sweep"];
            reject_unknown(s, {"axis", "values"}, "sweep");
            if (s.contains("axis"))
                spec.axis = parse_axis(s["axis"].get<std::string>());
            if (s.contains("values"))
                spec.values = s["values"].get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("configuration type error: ") + e.what());
    }
    return spec;
}

ExperimentSpec load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open configuration '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string channels_to_json(const ChannelSet<double>& channels)
{
    json users = json::array();
    json h = json::array();
    for (std::size_t k = 0; k < channels.gains.size(); ++k) {
        users.push_back({{"n", channels.users[k].antennas}, {"gamma", channels.users[k].weight}});
        json rows = json::array();
        const auto& g = channels.gains[k];
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < g.cols(); ++c)
                row.push_back({g(r, c).real(), g(r, c).imag()});
            rows.push_back(row);
        }
        h.push_back(rows);
    }
    return json{{"M", channels.transmit_antennas}, {"users", users}, {"H", h}}.dump();
}

ChannelSet<double> channels_from_json(const std::string& json_text)
{
    try {
        const json c = json::parse(json_text);
        ChannelSpec spec;
        parse_channels(c, spec);
        if (!spec.explicit_set)
            return generate_channels(spec.transmit_antennas, spec.users, spec.seed);
        return *spec.explicit_set;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("channel JSON error: ") + e.what());
    }
}

} // namespace ehbc
