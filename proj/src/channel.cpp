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

#include "irsim/channel.hpp"
#include "irsim/linalg.hpp"

#include <cmath>
#include <numbers>

namespace irsim
{

void ChannelStatistics::refresh_factors()
{
    sqrt_r_bs.clear();
    sqrt_r_irs.clear();
    for (const auto &r : r_bs)
        sqrt_r_bs.push_back(hermitian_sqrt(r));
    for (const auto &r : r_irs)
        sqrt_r_irs.push_back(hermitian_sqrt(r));
}

ChannelStatistics make_channel_statistics(const ScenarioConfig &cfg, const CorrelationModel &model)
{
    ChannelStatistics s;
    const auto k = static_cast<std::size_t>(cfg.k_users);

    // Every user shares the same array correlation; factor it once.
    const cmat r_bs = exp_correlation(cfg.m_bs, model.rho_bs);
    const cmat r_irs = exp_correlation(cfg.n_irs, model.rho_irs);
    const cmat sq_bs = hermitian_sqrt(r_bs);
    const cmat sq_irs = hermitian_sqrt(r_irs);
    s.r_bs.assign(k, r_bs);
    s.r_irs.assign(k, r_irs);
    s.sqrt_r_bs.assign(k, sq_bs);
    s.sqrt_r_irs.assign(k, sq_irs);

    update_link_gains(s, cfg);
    return s;
}

void update_link_gains(ChannelStatistics &stats, const ScenarioConfig &cfg)
{
    stats.beta_1 = link_gain({LinkKind::BsIrs}, cfg);
    stats.beta_2.resize(static_cast<std::size_t>(cfg.k_users));
    stats.beta_d.resize(static_cast<std::size_t>(cfg.k_users));
    for (int k = 0; k < cfg.k_users; ++k)
    {
        stats.beta_2[static_cast<std::size_t>(k)] = link_gain({LinkKind::IrsUser, k}, cfg);
        stats.beta_d[static_cast<std::size_t>(k)] = link_gain({LinkKind::BsUser, k}, cfg);
    }
}

cvec steering_vector(int n_elem, double angle)
{
    cvec a(n_elem);
    const double phase_step = std::numbers::pi * std::sin(angle);
    for (int m = 0; m < n_elem; ++m)
        a(m) = std::polar(1.0, phase_step * m);
    return a;
}

cmat rank_one_h1(int m, int n, double beta_1, double aod, double aoa)
{
    if (m < 1 || n < 1)
        throw ConfigError("rank_one_h1: array sizes must be >= 1.");
    return std::sqrt(beta_1) * steering_vector(m, aod) * steering_vector(n, aoa).adjoint();
}

double bs_to_irs_aod(const ScenarioConfig &cfg)
{
    const double d = distance(cfg.bs_pos, cfg.irs_pos);
    if (!(d > 0.0))
        throw DomainError("BS and IRS positions coincide.");
    return std::asin((cfg.irs_pos.x - cfg.bs_pos.x) / d);
}

double bs_to_irs_aoa(const ScenarioConfig &cfg)
{
    const double d = distance(cfg.bs_pos, cfg.irs_pos);
    if (!(d > 0.0))
        throw DomainError("BS and IRS positions coincide.");
    return std::asin((cfg.bs_pos.x - cfg.irs_pos.x) / d);
}

cmat rank_one_h1(const ScenarioConfig &cfg, double aod, double aoa)
{
    return rank_one_h1(cfg.m_bs, cfg.n_irs, link_gain({LinkKind::BsIrs}, cfg), aod, aoa);
}

cmat full_rank_h1(int m, int n, double beta_1, int n_paths, int k_users, Rng &rng)
{
    if (n_paths < k_users || n_paths < 1)
        throw ConfigError("full_rank_h1: n_paths must be at least the number of users.");

    std::uniform_real_distribution<double> angle(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    cmat h1 = cmat::Zero(m, n);
    for (int l = 0; l < n_paths; ++l)
    {
        const cplx g = complex_normal(rng);
        const double theta = angle(rng);
        const double phi = angle(rng);
        h1.noalias() += g * steering_vector(m, theta) * steering_vector(n, phi).adjoint();
    }
    return std::sqrt(beta_1 / n_paths) * h1;
}

cmat full_rank_h1(const ScenarioConfig &cfg, int n_paths, Rng &rng)
{
    return full_rank_h1(cfg.m_bs, cfg.n_irs, link_gain({LinkKind::BsIrs}, cfg), n_paths, cfg.k_users, rng);
}

cmat exp_correlation(int n, double rho)
{
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("exp_correlation: rho must lie in [0, 1).");
    cmat r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r(i, j) = std::pow(rho, std::abs(i - j));
    return r;
}

cvec sample_with_factor(const cmat &sqrt_r, double beta, Rng &rng)
{
    const cvec z = complex_normal(sqrt_r.cols(), rng);
    if (beta == 0.0)
        return cvec::Zero(sqrt_r.rows());
    return std::sqrt(beta) * (sqrt_r * z);
}

cvec sample_correlated_rayleigh(const cmat &r, double beta, Rng &rng)
{
    if (beta < 0.0)
        throw DomainError("sample_correlated_rayleigh: beta must be non-negative.");
    return sample_with_factor(hermitian_sqrt(r), beta, rng);
}

cmat cascade(const cmat &h1, const cvec &h2k)
{
    if (h1.cols() != h2k.size())
        throw DomainError("cascade: h1 has " + std::to_string(h1.cols()) + " columns but h2k has " +
                          std::to_string(h2k.size()) + " entries.");
    return h1 * h2k.asDiagonal();
}

namespace
{
void check_stats(const ChannelStatistics &stats, std::size_t k)
{
    if (stats.sqrt_r_bs.size() != k || stats.sqrt_r_irs.size() != k || stats.beta_2.size() != k ||
        stats.beta_d.size() != k)
        throw ConfigError("channel statistics do not match the number of users.");
}
} // namespace

ChannelSet draw_channel_set(const cmat &h1, const ChannelStatistics &stats, Rng &rng)
{
    const std::size_t k = stats.beta_d.size();
    check_stats(stats, k);

    ChannelSet cs;
    cs.h1 = h1;
    for (std::size_t i = 0; i < k; ++i)
    {
        if (stats.sqrt_r_bs[i].rows() != h1.rows())
            throw DomainError("BS correlation does not match the number of BS antennas.");
        cs.hd.push_back(sample_with_factor(stats.sqrt_r_bs[i], stats.beta_d[i], rng));
    }
    for (std::size_t i = 0; i < k; ++i)
    {
        if (stats.sqrt_r_irs[i].rows() != h1.cols())
            throw DomainError("IRS correlation does not match the number of IRS elements.");
        cs.h2.push_back(sample_with_factor(stats.sqrt_r_irs[i], stats.beta_2[i], rng));
        cs.h0.push_back(cascade(h1, cs.h2.back()));
    }
    return cs;
}

ChannelSet draw_channel_set(const ScenarioConfig &cfg, const ChannelStatistics &stats, H1Mode mode, Rng &rng,
                            const DrawOptions &opts)
{
    const std::size_t k = static_cast<std::size_t>(cfg.k_users);
    check_stats(stats, k);

    ChannelSet cs;
    for (std::size_t i = 0; i < k; ++i)
        cs.hd.push_back(sample_with_factor(stats.sqrt_r_bs[i], stats.beta_d[i], rng));

    if (mode == H1Mode::RankOne)
        cs.h1 = rank_one_h1(cfg.m_bs, cfg.n_irs, stats.beta_1, bs_to_irs_aod(cfg), bs_to_irs_aoa(cfg));
    else
    {
        const int n_paths = opts.n_paths > 0 ? opts.n_paths : 2 * cfg.k_users;
        cs.h1 = full_rank_h1(cfg.m_bs, cfg.n_irs, stats.beta_1, n_paths, cfg.k_users, rng);
    }

    for (std::size_t i = 0; i < k; ++i)
    {
        cs.h2.push_back(sample_with_factor(stats.sqrt_r_irs[i], stats.beta_2[i], rng));
        cs.h0.push_back(cascade(cs.h1, cs.h2.back()));
    }
    return cs;
}

// ---------- JSON fixtures ----------

namespace
{
nlohmann::json mat_to_json(const cmat &a)
{
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
    {
        nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j)
        {
            rr.push_back(a(i, j).real());
            ri.push_back(a(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

nlohmann::json vec_to_json(const cvec &v)
{
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return {{"re", re}, {"im", im}};
}

cmat mat_from_json(const nlohmann::json &j)
{
    const auto &re = j.at("re");
    const auto &im = j.at("im");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(re[0].size()) : 0;
    cmat a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        if (static_cast<Eigen::Index>(re[i].size()) != cols || static_cast<Eigen::Index>(im[i].size()) != cols)
            throw ConfigError("ragged matrix in channel fixture.");
        for (Eigen::Index j = 0; j < cols; ++j)
            a(i, j) = cplx(re[i][j].get<double>(), im[i][j].get<double>());
    }
    return a;
}

cvec vec_from_json(const nlohmann::json &j)
{
    const auto &re = j.at("re");
    const auto &im = j.at("im");
    if (re.size() != im.size())
        throw ConfigError("real and imaginary parts differ in length.");
    cvec v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = cplx(re[i].get<double>(), im[i].get<double>());
    return v;
}
} // namespace

nlohmann::json channel_set_to_json(const ChannelSet &cs)
{
    nlohmann::json j;
    j["h1"] = mat_to_json(cs.h1);
    j["h2"] = nlohmann::json::array();
    j["hd"] = nlohmann::json::array();
    for (const auto &v : cs.h2)
        j["h2"].push_back(vec_to_json(v));
    for (const auto &v : cs.hd)
        j["hd"].push_back(vec_to_json(v));
    return j;
}

ChannelSet channel_set_from_json(const nlohmann::json &j)
{
    ChannelSet cs;
    cs.h1 = mat_from_json(j.at("h1"));
    for (const auto &v : j.at("hd"))
        cs.hd.push_back(vec_from_json(v));
    for (const auto &v : j.at("h2"))
    {
        cs.h2.push_back(vec_from_json(v));
        cs.h0.push_back(cascade(cs.h1, cs.h2.back()));
    }
    if (cs.h2.size() != cs.hd.size())
        throw ConfigError("h2 and hd list different numbers of users.");
    return cs;
}

} // namespace irsim
