// SPDX-License-Identifier: Apache-2.0
//
// irsim: link-level simulator for IRS-assisted multi-user MISO downlink
// Copyright (C) 2026 The irsim authors
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

#include "irsim/scenario.hpp"
#include "irsim/types.hpp"

#include <cmath>
#include <set>
#include <string>

namespace irsim
{

double distance(const Point2 &a, const Point2 &b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

void ScenarioConfig::validate() const
{
    if (m_bs < 1 || n_irs < 1 || k_users < 1)
        throw ConfigError("m_bs, n_irs and k_users must all be >= 1.");
    if (!(carrier_freq_hz > 0.0))
        throw ConfigError("carrier_freq_hz must be positive.");
    if (!(total_power_w > 0.0) || !(pilot_power_w > 0.0) || !(noise_power_w > 0.0))
        throw ConfigError("total_power_w, pilot_power_w and noise_power_w must be positive.");
    if (!(coherence_s > 0.0))
        throw ConfigError("coherence_s must be positive.");
    if (!(training_s > 0.0) || !(training_s < coherence_s))
        throw ConfigError("training_s must lie in (0, coherence_s).");
    if (static_cast<int>(user_pos.size()) != k_users)
        throw ConfigError("user_pos must list exactly k_users positions.");
    if (!(distance(bs_pos, irs_pos) > 0.0))
        throw ConfigError("bs_pos and irs_pos coincide.");
    for (const Point2 &u : user_pos)
        if (!(distance(u, bs_pos) > 0.0) || !(distance(u, irs_pos) > 0.0))
            throw ConfigError("a user sits on the BS or the IRS.");
}

double ScenarioConfig::subphase_s() const
{
    return training_s / static_cast<double>(n_irs + 1);
}

double path_loss_linear(double d, const PathLossParams &p)
{
    if (!(d > 0.0))
        throw DomainError("path loss requires a positive distance.");
    return std::pow(10.0, -p.c_db / 10.0) * std::pow(d, -p.alpha);
}

namespace
{
struct LinkTerms
{
    double d;
    PathLossParams pl;
    double gain_db;
    double pen_db;
};

LinkTerms link_terms(const Link &link, const ScenarioConfig &cfg)
{
    auto user = [&]() -> const Point2 & {
        if (link.user < 0 || link.user >= static_cast<int>(cfg.user_pos.size()))
            throw ConfigError("user index out of range.");
        return cfg.user_pos[static_cast<std::size_t>(link.user)];
    };

    switch (link.kind)
    {
    case LinkKind::BsIrs:
        return {distance(cfg.bs_pos, cfg.irs_pos), kBsIrsPathLoss, cfg.bs_gain_dbi + cfg.irs_gain_dbi, 0.0};
    case LinkKind::IrsUser:
        return {distance(cfg.irs_pos, user()), kUserPathLoss, cfg.irs_gain_dbi, cfg.pen_irs_user_db};
    case LinkKind::BsUser:
        return {distance(cfg.bs_pos, user()), kUserPathLoss, cfg.bs_gain_dbi, cfg.pen_bs_user_db};
    }
    throw ConfigError("unknown link kind.");
}
} // namespace

double link_budget(double d, const PathLossParams &p, double gain_db, double pen_db)
{
    return path_loss_linear(d, p) * db_to_linear(gain_db - pen_db);
}

double link_gain(const Link &link, const ScenarioConfig &cfg)
{
    const LinkTerms t = link_terms(link, cfg);
    if (!(t.d > 0.0))
        throw DomainError("link endpoints coincide.");
    return link_budget(t.d, t.pl, t.gain_db, t.pen_db);
}

double link_gain_db(const Link &link, const ScenarioConfig &cfg)
{
    const LinkTerms t = link_terms(link, cfg);
    if (!(t.d > 0.0))
        throw DomainError("link endpoints coincide.");
    return -t.pl.c_db - 10.0 * t.pl.alpha * std::log10(t.d) + t.gain_db - t.pen_db;
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

// ---------- JSON ----------

namespace
{
Point2 point_from_json(const nlohmann::json &j, const char *key)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(key) + " must be a [x, y] array of numbers.");
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json point_to_json(const Point2 &p)
{
    return nlohmann::json::array({p.x, p.y});
}

template <typename T>
T number(const nlohmann::json &j, const std::string &key)
{
    if (!j.is_number())
        throw ConfigError(key + " must be a number.");
    if constexpr (std::is_integral_v<T>)
    {
        if (!j.is_number_integer())
            throw ConfigError(key + " must be an integer.");
    }
    return j.get<T>();
}
} // namespace

ScenarioConfig scenario_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigError("scenario must be a JSON object.");

    ScenarioConfig cfg;
    bool users_given = false;
    for (const auto &[key, val] : j.items())
    {
        if (key == "m_bs")
            cfg.m_bs = number<int>(val, key);
        else if (key == "n_irs")
            cfg.n_irs = number<int>(val, key);
        else if (key == "k_users")
            cfg.k_users = number<int>(val, key);
        else if (key == "carrier_freq_hz")
            cfg.carrier_freq_hz = number<double>(val, key);
        else if (key == "total_power_w")
            cfg.total_power_w = number<double>(val, key);
        else if (key == "pilot_power_w")
            cfg.pilot_power_w = number<double>(val, key);
        else if (key == "noise_power_w")
            cfg.noise_power_w = number<double>(val, key);
        else if (key == "coherence_s")
            cfg.coherence_s = number<double>(val, key);
        else if (key == "training_s")
            cfg.training_s = number<double>(val, key);
        else if (key == "bs_pos")
            cfg.bs_pos = point_from_json(val, "bs_pos");
        else if (key == "irs_pos")
            cfg.irs_pos = point_from_json(val, "irs_pos");
        else if (key == "user_pos")
        {
            if (!val.is_array())
                throw ConfigError("user_pos must be an array of [x, y] points.");
            cfg.user_pos.clear();
            for (const auto &p : val)
                cfg.user_pos.push_back(point_from_json(p, "user_pos"));
            users_given = true;
        }
        else if (key == "bs_gain_dbi")
            cfg.bs_gain_dbi = number<double>(val, key);
        else if (key == "irs_gain_dbi")
            cfg.irs_gain_dbi = number<double>(val, key);
        else if (key == "pen_bs_user_db")
            cfg.pen_bs_user_db = number<double>(val, key);
        else if (key == "pen_irs_user_db")
            cfg.pen_irs_user_db = number<double>(val, key);
        else
            throw ConfigError("unknown scenario key: " + key);
    }

    // A document that only changes k_users gets default positions at the
    // single-user location; sweeps that randomize positions overwrite them.
    if (!users_given)
        cfg.user_pos.assign(static_cast<std::size_t>(std::max(cfg.k_users, 0)), Point2{50.0, 0.0});

    cfg.validate();
    return cfg;
}

nlohmann::json scenario_to_json(const ScenarioConfig &cfg)
{
    nlohmann::json users = nlohmann::json::array();
    for (const auto &p : cfg.user_pos)
        users.push_back(point_to_json(p));

    return {{"m_bs", cfg.m_bs},
            {"n_irs", cfg.n_irs},
            {"k_users", cfg.k_users},
            {"carrier_freq_hz", cfg.carrier_freq_hz},
            {"total_power_w", cfg.total_power_w},
            {"pilot_power_w", cfg.pilot_power_w},
            {"noise_power_w", cfg.noise_power_w},
            {"coherence_s", cfg.coherence_s},
            {"training_s", cfg.training_s},
            {"bs_pos", point_to_json(cfg.bs_pos)},
            {"irs_pos", point_to_json(cfg.irs_pos)},
            {"user_pos", users},
            {"bs_gain_dbi", cfg.bs_gain_dbi},
            {"irs_gain_dbi", cfg.irs_gain_dbi},
            {"pen_bs_user_db", cfg.pen_bs_user_db},
            {"pen_irs_user_db", cfg.pen_irs_user_db}};
}

} // namespace irsim
