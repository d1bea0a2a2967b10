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

#include "irsim/channel.hpp"
#include "irsim/linalg.hpp"

#include <cmath>
#include <numbers>

using namespace irsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

static const double pi = std::numbers::pi;

TEST_CASE("steering_vector")
{
    const cvec a = steering_vector(4, 0.0);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(a(i) - cplx(1.0, 0.0)) < 1e-15);

    const cvec e = steering_vector(2, pi / 2);
    CHECK(std::abs(e(0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e(1) - cplx(-1.0, 0.0)) < 1e-15);

    for (int n : {1, 3, 17})
        for (double th : {-1.2, 0.1, 0.9})
            CHECK_THAT(steering_vector(n, th).norm(), WithinRel(std::sqrt(double(n)), 1e-14));
}

TEST_CASE("rank_one_h1 - small cases")
{
    const cmat h = rank_one_h1(1, 1, 1.0, 0.0, 0.0);
    REQUIRE(h.rows() == 1);
    CHECK(std::abs(h(0, 0) - cplx(1.0, 0.0)) < 1e-15);

    const cmat h2 = rank_one_h1(2, 2, 1.0, 0.0, 0.0);
    CHECK((h2 - cmat::Ones(2, 2)).norm() < 1e-15);
    const Eigen::VectorXd s = singular_values(h2);
    CHECK_THAT(s(0), WithinRel(2.0, 1e-14));
    CHECK_THAT(s(1), WithinAbs(0.0, 1e-14));
}

TEST_CASE("rank_one_h1 - rank one for any angles")
{
    Rng rng(5);
    std::uniform_real_distribution<double> ang(-pi / 2, pi / 2);
    std::uniform_int_distribution<int> dim(2, 40);
    for (int t = 0; t < 100; ++t)
    {
        const cmat h = rank_one_h1(dim(rng), dim(rng), 1e-6, ang(rng), ang(rng));
        const Eigen::VectorXd s = singular_values(h);
        CHECK(s(1) < 1e-10 * s(0));
    }
}

TEST_CASE("rank_one_h1 - scenario geometry")
{
    ScenarioConfig cfg;
    const cmat h = rank_one_h1(cfg, bs_to_irs_aod(cfg), bs_to_irs_aoa(cfg));
    CHECK(h.rows() == cfg.m_bs);
    CHECK(h.cols() == cfg.n_irs);
    // |h_ij|^2 = beta_1 for a product of unit-modulus steering vectors.
    const double beta_1 = link_gain({LinkKind::BsIrs, 0}, cfg);
    CHECK_THAT(h.squaredNorm(), WithinRel(beta_1 * cfg.m_bs * cfg.n_irs, 1e-12));
}

TEST_CASE("full_rank_h1 - single path and path count guard")
{
    Rng rng(9);
    const cmat h = full_rank_h1(5, 7, 1.0, 1, 1, rng);
    CHECK(numerical_rank(h) == 1);
    CHECK_THROWS_AS(full_rank_h1(4, 4, 1.0, 3, 4, rng), ConfigError);
}

TEST_CASE("full_rank_h1 - mean Frobenius energy")
{
    Rng rng(10);
    const int m = 4, n = 6, draws = 10000;
    const double beta = 2.5e-7;
    double acc = 0.0;
    for (int t = 0; t < draws; ++t)
        acc += full_rank_h1(m, n, beta, 8, 4, rng).squaredNorm();
    CHECK_THAT(acc / draws, WithinRel(beta * m * n, 0.02));
}

TEST_CASE("full_rank_h1 - full rank with 2K paths")
{
    Rng rng(11);
    int full = 0;
    for (int t = 0; t < 1000; ++t)
        full += numerical_rank(full_rank_h1(4, 4, 1.0, 8, 4, rng)) == 4;
    CHECK(full >= 990);
}

TEST_CASE("exp_correlation")
{
    CHECK((exp_correlation(5, 0.0) - cmat::Identity(5, 5)).norm() == 0.0);

    const cmat r = exp_correlation(2, 0.7);
    CHECK_THAT(r(0, 1).real(), WithinAbs(0.7, 1e-15));
    CHECK_THAT(r(1, 0).real(), WithinAbs(0.7, 1e-15));
    Eigen::SelfAdjointEigenSolver<cmat> es(r);
    CHECK_THAT(es.eigenvalues()(0), WithinAbs(1.0 - 0.7, 1e-14));
    CHECK_THAT(es.eigenvalues()(1), WithinAbs(1.0 + 0.7, 1e-14));

    Rng rng(3);
    std::uniform_real_distribution<double> u(0.0, 0.999);
    for (int t = 0; t < 50; ++t)
    {
        const int n = 1 + t;
        const cmat c = exp_correlation(n, u(rng));
        CHECK(Eigen::SelfAdjointEigenSolver<cmat>(c).eigenvalues().minCoeff() >= -1e-12);
        CHECK(hermitian_defect(c) == 0.0);
    }

    CHECK_THROWS_AS(exp_correlation(3, -0.1), DomainError);
    CHECK_THROWS_AS(exp_correlation(3, 1.0), DomainError);
}

TEST_CASE("hermitian_sqrt - square recovers the matrix")
{
    const cmat r = exp_correlation(6, 0.7);
    const cmat s = hermitian_sqrt(r);
    CHECK((s * s - r).norm() < 1e-12);
    CHECK(hermitian_defect(s) < 1e-14);

    cmat bad = cmat::Identity(2, 2);
    bad(1, 1) = -1e-6;
    CHECK_THROWS_AS(hermitian_sqrt(bad), DomainError);
    // Round-off sized negatives are clamped.
    bad(1, 1) = -1e-12;
    CHECK_NOTHROW(hermitian_sqrt(bad));
}

TEST_CASE("sample_correlated_rayleigh - white, unit power")
{
    Rng rng(21);
    const cmat r = cmat::Identity(2, 2);
    const int draws = 100000;
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (int t = 0; t < draws; ++t)
        acc += sample_correlated_rayleigh(r, 1.0, rng).cwiseAbs2();
    CHECK_THAT(acc(0) / draws, WithinRel(1.0, 0.03));
    CHECK_THAT(acc(1) / draws, WithinRel(1.0, 0.03));
}

TEST_CASE("sample_correlated_rayleigh - zero gain and non-PSD input")
{
    Rng rng(22);
    CHECK(sample_correlated_rayleigh(exp_correlation(4, 0.5), 0.0, rng).norm() == 0.0);
    cmat bad = exp_correlation(3, 0.5);
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(sample_correlated_rayleigh(bad, 1.0, rng), DomainError);
}

TEST_CASE("sample_correlated_rayleigh - empirical covariance")
{
    Rng rng(23);
    const double beta = 2.0;
    const cmat r = exp_correlation(3, 0.7);
    cmat acc = cmat::Zero(3, 3);
    const int draws = 100000;
    for (int t = 0; t < draws; ++t)
    {
        const cvec h = sample_correlated_rayleigh(r, beta, rng);
        acc += h * h.adjoint();
    }
    acc /= draws;
    CHECK((acc - beta * r).norm() < 0.05 * (beta * r).norm());
}

TEST_CASE("cascade")
{
    cmat h1(1, 2);
    h1 << cplx(1, 0), cplx(0, 1);
    cvec h2(2);
    h2 << 2.0, 3.0;
    const cmat h0 = cascade(h1, h2);
    CHECK(std::abs(h0(0, 0) - cplx(2, 0)) < 1e-15);
    CHECK(std::abs(h0(0, 1) - cplx(0, 3)) < 1e-15);

    Rng rng(31);
    cmat g(3, 4);
    for (int j = 0; j < 4; ++j)
        g.col(j) = complex_normal(3, rng);
    CHECK((cascade(g, cvec::Ones(4)) - g).norm() == 0.0);

    const cvec h2k = complex_normal(4, rng);
    cvec v(4);
    for (int j = 0; j < 4; ++j)
        v(j) = std::polar(1.0, 2.0 * pi * std::uniform_real_distribution<double>()(rng));
    const cvec lhs = cascade(g, h2k) * v;
    const cvec rhs = g * v.asDiagonal() * h2k;
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());

    CHECK_THROWS_AS(cascade(g, cvec::Ones(3)), DomainError);
}

static void check_invariants(const ChannelSet &cs, const ScenarioConfig &cfg)
{
    REQUIRE(cs.m() == cfg.m_bs);
    REQUIRE(cs.n() == cfg.n_irs);
    REQUIRE(cs.k() == cfg.k_users);
    REQUIRE(cs.h2.size() == cs.hd.size());
    REQUIRE(cs.h0.size() == cs.hd.size());
    for (int k = 0; k < cs.k(); ++k)
    {
        const auto ku = static_cast<std::size_t>(k);
        CHECK(cs.hd[ku].size() == cs.m());
        CHECK(cs.h2[ku].size() == cs.n());
        CHECK((cs.h0[ku] - cs.h1 * cs.h2[ku].asDiagonal()).norm() <= 1e-14 * (1.0 + cs.h0[ku].norm()));
        CHECK(cs.hd[ku].allFinite());
        CHECK(cs.h0[ku].allFinite());
    }
}

TEST_CASE("draw_channel_set - rank-one single user")
{
    ScenarioConfig cfg;
    const ChannelStatistics stats = make_channel_statistics(cfg);
    Rng rng(41);
    for (int t = 0; t < 20; ++t)
    {
        const ChannelSet cs = draw_channel_set(cfg, stats, H1Mode::RankOne, rng);
        check_invariants(cs, cfg);
        CHECK(numerical_rank(cs.h1) == 1);
    }
}

TEST_CASE("draw_channel_set - multi-user full rank")
{
    ScenarioConfig cfg;
    cfg.k_users = 4;
    cfg.m_bs = 6;
    cfg.n_irs = 10;
    cfg.irs_pos = {0.0, 100.0};
    cfg.user_pos = {{-10, 80}, {5, 90}, {20, 120}, {-25, 100}};
    const ChannelStatistics stats = make_channel_statistics(cfg);
    Rng rng(42);
    for (int t = 0; t < 20; ++t)
    {
        const ChannelSet cs = draw_channel_set(cfg, stats, H1Mode::FullRank, rng);
        check_invariants(cs, cfg);
        CHECK(numerical_rank(cs.h1) == 6);
    }
}

TEST_CASE("draw_channel_set - zero gains give zero channels")
{
    ScenarioConfig cfg;
    ChannelStatistics stats = make_channel_statistics(cfg);
    stats.beta_1 = 0.0;
    stats.beta_2.assign(1, 0.0);
    stats.beta_d.assign(1, 0.0);
    Rng rng(43);
    for (H1Mode mode : {H1Mode::RankOne, H1Mode::FullRank})
    {
        const ChannelSet cs = draw_channel_set(cfg, stats, mode, rng);
        CHECK(cs.h1.norm() == 0.0);
        CHECK(cs.hd[0].norm() == 0.0);
        CHECK(cs.h2[0].norm() == 0.0);
        CHECK(cs.h0[0].norm() == 0.0);
    }
}

TEST_CASE("draw_channel_set - same stream, same draw")
{
    ScenarioConfig cfg;
    const ChannelStatistics stats = make_channel_statistics(cfg);
    Rng a = make_stream(5, 3, 1), b = make_stream(5, 3, 1), c = make_stream(5, 4, 1);
    const ChannelSet x = draw_channel_set(cfg, stats, H1Mode::RankOne, a);
    const ChannelSet y = draw_channel_set(cfg, stats, H1Mode::RankOne, b);
    const ChannelSet z = draw_channel_set(cfg, stats, H1Mode::RankOne, c);
    CHECK((x.hd[0] - y.hd[0]).norm() == 0.0);
    CHECK((x.h0[0] - y.h0[0]).norm() == 0.0);
    CHECK((x.hd[0] - z.hd[0]).norm() > 0.0);
}

TEST_CASE("draw_channel_set - direct link power")
{
    ScenarioConfig cfg;
    const ChannelStatistics stats = make_channel_statistics(cfg);
    Rng rng(44);
    const int draws = 20000;
    double acc = 0.0;
    for (int t = 0; t < draws; ++t)
        acc += draw_channel_set(cfg, stats, H1Mode::RankOne, rng).hd[0].squaredNorm();
    CHECK_THAT(acc / draws, WithinRel(stats.beta_d[0] * cfg.m_bs, 0.02));
}

TEST_CASE("channel statistics follow the link budget")
{
    ScenarioConfig cfg;
    const ChannelStatistics stats = make_channel_statistics(cfg);
    CHECK_THAT(stats.beta_1, WithinRel(link_gain({LinkKind::BsIrs, 0}, cfg), 1e-15));
    CHECK_THAT(stats.beta_2[0], WithinRel(link_gain({LinkKind::IrsUser, 0}, cfg), 1e-15));
    CHECK_THAT(stats.beta_d[0], WithinRel(link_gain({LinkKind::BsUser, 0}, cfg), 1e-15));
    CHECK((stats.r_bs[0] - exp_correlation(cfg.m_bs, 0.5)).norm() == 0.0);
    CHECK((stats.r_irs[0] - exp_correlation(cfg.n_irs, 0.7)).norm() == 0.0);
    CHECK((stats.sqrt_r_bs[0] * stats.sqrt_r_bs[0] - stats.r_bs[0]).norm() < 1e-12);
}

TEST_CASE("channel set JSON round trip")
{
    ScenarioConfig cfg;
    cfg.n_irs = 5;
    const ChannelStatistics stats = make_channel_statistics(cfg);
    Rng rng(45);
    const ChannelSet cs = draw_channel_set(cfg, stats, H1Mode::RankOne, rng);
    const ChannelSet back = channel_set_from_json(nlohmann::json::parse(channel_set_to_json(cs).dump()));
    CHECK((back.h1 - cs.h1).norm() == 0.0);
    CHECK((back.hd[0] - cs.hd[0]).norm() == 0.0);
    CHECK((back.h2[0] - cs.h2[0]).norm() == 0.0);
    CHECK((back.h0[0] - cs.h0[0]).norm() == 0.0);
}
