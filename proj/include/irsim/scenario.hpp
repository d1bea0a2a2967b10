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

#ifndef IRSIM_SCENARIO_HPP
#define IRSIM_SCENARIO_HPP

#include "json.hpp"

#include <vector>

namespace irsim
{

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point2 &a, const Point2 &b);

// Physical and protocol parameters of one simulated system.
// Defaults are the single-user reference setup (M = 4, N = 35, one user).
struct ScenarioConfig
{
    int m_bs = 4;                   // BS antennas
    int n_irs = 35;                 // IRS elements
    int k_users = 1;                // single-antenna users
    double carrier_freq_hz = 2.5e9; //
    double total_power_w = 5.0;     // downlink power budget P_T
    double pilot_power_w = 1.0;     // uplink pilot power p_c
    double noise_power_w = 1e-11;   // -80 dBm
    double coherence_s = 0.01;      // coherence interval tau
    double training_s = 1e-4;       // training window tau_c, 0.01 * tau
    Point2 bs_pos{0.0, 0.0};
    Point2 irs_pos{50.0, 10.0};
    std::vector<Point2> user_pos{{50.0, 0.0}};
    double bs_gain_dbi = 5.0;
    double irs_gain_dbi = 5.0;
    double pen_bs_user_db = 20.0;
    double pen_irs_user_db = 10.0;

    // Throws ConfigError when an invariant is violated.
    void validate() const;

    // Duration of one training sub-phase, training_s / (n_irs + 1).
    double subphase_s() const;
};

// Path loss 10^(-C/10) / d^alpha.
struct PathLossParams
{
    double c_db;
    double alpha;
};

// BS-IRS link (LoS) and user links (NLoS), 3GPP UMi at 2.5 GHz.
inline constexpr PathLossParams kBsIrsPathLoss{26.0, 2.2};
inline constexpr PathLossParams kUserPathLoss{28.0, 3.67};

double path_loss_linear(double d, const PathLossParams &p);

// path_loss_linear(d, p) * 10^((gain_db - pen_db) / 10)
double link_budget(double d, const PathLossParams &p, double gain_db, double pen_db);

enum class LinkKind
{
    BsIrs,
    IrsUser,
    BsUser
};

struct Link
{
    LinkKind kind;
    int user = 0;
};

// Linear power gain of a link including antenna gains and penetration loss.
// BS-IRS carries both 5 dBi end gains; user links carry the single BS or
// IRS end gain and the link's penetration loss. Users have 0 dBi.
double link_gain(const Link &link, const ScenarioConfig &cfg);

// Same quantity expressed in dB, summing the individual terms.
double link_gain_db(const Link &link, const ScenarioConfig &cfg);

inline double db_to_linear(double db);
inline double linear_to_db(double x);
double dbm_to_watt(double dbm);

// Strict JSON mapping; unknown keys are rejected with ConfigError.
ScenarioConfig scenario_from_json(const nlohmann::json &j);
nlohmann::json scenario_to_json(const ScenarioConfig &cfg);

} // namespace irsim

#include <cmath>

inline double irsim::db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

inline double irsim::linear_to_db(double x)
{
    return 10.0 * std::log10(x);
}

#endif
