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

#include <catch2/catch_amalgamated.hpp>

#include "irsim/scenario.hpp"
#include "irsim/types.hpp"

#include <cmath>

using namespace irsim;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

// dB-domain link budget, written out term by term.
static double db_sum_oracle(double d, double c_db, double alpha, double gain_db, double pen_db)
{
    const double db = -c_db - 10.0 * alpha * std::log10(d) + gain_db - pen_db;
    return std::pow(10.0, db / 10.0);
}

TEST_CASE("path_loss_linear - reference values")
{
    CHECK_THAT(path_loss_linear(1.0, {26.0, 2.2}), WithinRel(std::pow(10.0, -2.6), 1e-12));
    CHECK_THAT(path_loss_linear(1.0, {26.0, 2.2}), WithinRel(2.5119e-3, 1e-4));
    CHECK_THAT(path_loss_linear(100.0, {28.0, 3.67}), WithinRel(std::pow(10.0, -10.14), 1e-12));
    CHECK_THAT(path_loss_linear(100.0, {28.0, 3.67}), WithinRel(7.244e-11, 1e-4));
    CHECK_THAT(path_loss_linear(10.0, {0.0, 2.0}), WithinRel(1e-2, 1e-14));
}

TEST_CASE("path_loss_linear - rejects non-positive distance")
{
    CHECK_THROWS_AS(path_loss_linear(0.0, kUserPathLoss), DomainError);
    CHECK_THROWS_AS(path_loss_linear(-3.0, kUserPathLoss), DomainError);
}

TEST_CASE("path_loss_linear - monotone in distance and fixed loss")
{
    double prev = path_loss_linear(1.0, kUserPathLoss);
    for (double d = 1.5; d < 500.0; d *= 1.5)
    {
        const double cur = path_loss_linear(d, kUserPathLoss);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(path_loss_linear(20.0, {27.0, 3.0}) < path_loss_linear(20.0, {26.0, 3.0}));

    // Doubling d costs alpha * 10 log10(2) dB.
    for (double d : {3.0, 40.0, 250.0})
    {
        const double delta = linear_to_db(path_loss_linear(2.0 * d, kBsIrsPathLoss)) -
                             linear_to_db(path_loss_linear(d, kBsIrsPathLoss));
        CHECK_THAT(delta, WithinAbs(-2.2 * 10.0 * std::log10(2.0), 1e-10));
    }
}

TEST_CASE("link_gain - composition against the dB-sum oracle")
{
    ScenarioConfig cfg;
    cfg.bs_pos = {0.0, 0.0};
    cfg.irs_pos = {100.0, 0.0};
    cfg.user_pos = {{1.0, 0.0}};

    // 10^-2.6 * 100^-2.2 * 10^1.0 = 10^-6.0
    const double bs_irs = link_gain({LinkKind::BsIrs, 0}, cfg);
    CHECK_THAT(bs_irs, WithinRel(db_sum_oracle(100.0, 26.0, 2.2, 10.0, 0.0), 1e-12));
    CHECK_THAT(bs_irs, WithinRel(1e-6, 1e-12));

    const double bs_user = link_gain({LinkKind::BsUser, 0}, cfg);
    CHECK_THAT(bs_user, WithinRel(db_sum_oracle(1.0, 28.0, 3.67, 5.0, 20.0), 1e-12));
    CHECK_THAT(bs_user, WithinRel(5.01e-5, 1e-3));

    CHECK_THAT(link_budget(1.0, {0.0, 3.0}, 0.0, 0.0), WithinRel(1.0, 1e-15));
}

TEST_CASE("link_gain - random geometries agree with the dB route")
{
    Rng rng(2024);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    for (int t = 0; t < 200; ++t)
    {
        ScenarioConfig cfg;
        cfg.bs_pos = {u(rng), u(rng)};
        cfg.irs_pos = {u(rng), u(rng)};
        cfg.user_pos = {{u(rng), u(rng)}};
        const double d_bi = distance(cfg.bs_pos, cfg.irs_pos);
        const double d_iu = distance(cfg.irs_pos, cfg.user_pos[0]);
        const double d_bu = distance(cfg.bs_pos, cfg.user_pos[0]);
        CHECK_THAT(link_gain({LinkKind::BsIrs, 0}, cfg), WithinRel(db_sum_oracle(d_bi, 26.0, 2.2, 10.0, 0.0), 1e-10));
        CHECK_THAT(link_gain({LinkKind::IrsUser, 0}, cfg), WithinRel(db_sum_oracle(d_iu, 28.0, 3.67, 5.0, 10.0), 1e-10));
        CHECK_THAT(link_gain({LinkKind::BsUser, 0}, cfg), WithinRel(db_sum_oracle(d_bu, 28.0, 3.67, 5.0, 20.0), 1e-10));
        CHECK_THAT(link_gain_db({LinkKind::BsUser, 0}, cfg),
                   WithinAbs(linear_to_db(link_gain({LinkKind::BsUser, 0}, cfg)), 1e-9));
    }
}

TEST_CASE("link_gain - coincident endpoints")
{
    ScenarioConfig cfg;
    cfg.user_pos = {cfg.bs_pos};
    CHECK_THROWS_AS(link_gain({LinkKind::BsUser, 0}, cfg), DomainError);
}

TEST_CASE("dbm_to_watt")
{
    CHECK_THAT(dbm_to_watt(-80.0), WithinRel(1e-11, 1e-12));
    CHECK_THAT(dbm_to_watt(30.0), WithinRel(1.0, 1e-15));
    CHECK_THAT(dbm_to_watt(0.0), WithinRel(1e-3, 1e-15));
}

TEST_CASE("ScenarioConfig - defaults and sub-phase length")
{
    ScenarioConfig cfg;
    REQUIRE_NOTHROW(cfg.validate());
    CHECK(cfg.m_bs == 4);
    CHECK(cfg.n_irs == 35);
    CHECK(cfg.total_power_w == 5.0);
    CHECK(cfg.noise_power_w == 1e-11);
    CHECK(cfg.training_s == 1e-4);

    for (int n : {1, 7, 35, 54, 64, 1000})
    {
        cfg.n_irs = n;
        CHECK_THAT(cfg.subphase_s() * (n + 1), WithinRel(cfg.training_s, 4e-16));
    }
}

TEST_CASE("ScenarioConfig - invariants")
{
    auto broken = [](auto mutate) {
        ScenarioConfig cfg;
        mutate(cfg);
        return cfg;
    };
    CHECK_THROWS_AS(broken([](ScenarioConfig &c) { c.m_bs = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig &c) { c.n_irs = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig &c) { c.k_users = 2; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig &c) { c.noise_power_w = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig &c) { c.total_power_w = -1.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig &c) { c.training_s = 0.02; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](ScenarioConfig &c) { c.irs_pos = c.bs_pos; }).validate(), ConfigError);
}

TEST_CASE("scenario JSON - round trip and strictness")
{
    ScenarioConfig cfg;
    cfg.k_users = 2;
    cfg.user_pos = {{10.0, 3.0}, {-4.5, 80.0}};
    cfg.n_irs = 12;
    const ScenarioConfig back = scenario_from_json(scenario_to_json(cfg));
    CHECK(scenario_to_json(back) == scenario_to_json(cfg));

    nlohmann::json j = scenario_to_json(cfg);
    j["antenna_spacing"] = 0.5;
    CHECK_THROWS_AS(scenario_from_json(j), ConfigError);

    nlohmann::json bad = scenario_to_json(cfg);
    bad["m_bs"] = "four";
    CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);

    nlohmann::json short_pos = scenario_to_json(cfg);
    short_pos["user_pos"] = nlohmann::json::array({nlohmann::json::array({1.0, 2.0})});
    CHECK_THROWS_AS(scenario_from_json(short_pos), ConfigError);
}
