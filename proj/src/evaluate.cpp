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

#include "irsim/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace irsim
{

cvec effective_channel(const ChannelSet &channels, const IrsPhaseVector &v, int k)
{
    const auto ku = static_cast<std::size_t>(k);
    if (channels.h0[ku].cols() != v.v.size())
        throw DomainError("effective_channel: phase vector does not match the IRS size.");
    return channels.hd[ku] + channels.h0[ku] * v.v;
}

double sinr(const ChannelSet &channels, const IrsPhaseVector &v, const PrecoderSolution &sol, double sigma2, int k)
{
    const cvec h = effective_channel(channels, v, k);
    double interference = sigma2;
    for (std::size_t j = 0; j < sol.g.size(); ++j)
        if (static_cast<int>(j) != k)
            interference += sol.p[j] * std::norm(sol.g[j].dot(h));
    const auto ku = static_cast<std::size_t>(k);
    return sol.p[ku] * std::norm(sol.g[ku].dot(h)) / interference;
}

double received_snr_db(const ChannelSet &channels, const IrsPhaseVector &v, const ScenarioConfig &cfg)
{
    if (cfg.k_users != 1 || channels.k() != 1)
        throw ConfigError("received_snr_db is defined for a single user only.");
    const cvec h = effective_channel(channels, v, 0);
    return linear_to_db(cfg.total_power_w * h.squaredNorm() / cfg.noise_power_w);
}

std::string to_string(SweepKind kind)
{
    switch (kind)
    {
    case SweepKind::UserDistance:
        return "du";
    case SweepKind::TrainingTime:
        return "tau_c";
    case SweepKind::IrsElements:
        return "n_irs";
    }
    return "unknown";
}

std::string to_string(CsiMode csi)
{
    return csi == CsiMode::Perfect ? "perfect" : "estimated";
}

namespace
{

enum StreamId : std::uint64_t
{
    kGeometryStream = 0,
    kChannelStream = 1,
    kNoiseStream = 2,
    kOptimizerStream = 3
};

ScenarioConfig point_config(const SweepRequest &req, double value)
{
    ScenarioConfig cfg = req.base;
    switch (req.kind)
    {
    case SweepKind::UserDistance:
        cfg.k_users = 1;
        cfg.user_pos = {Point2{value, 0.0}};
        break;
    case SweepKind::TrainingTime:
        // tau_c = tau is a legal grid point: training eats the whole block.
        if (!(value > 0.0) || value > cfg.coherence_s)
            throw ConfigError("training time grid values must lie in (0, coherence_s].");
        cfg.training_s = value;
        break;
    case SweepKind::IrsElements:
        if (value < 1.0 || std::round(value) != value)
            throw ConfigError("IRS size grid values must be positive integers.");
        cfg.n_irs = static_cast<int>(value);
        break;
    }
    return cfg;
}

void place_users(ScenarioConfig &cfg, const Region &region, Rng &rng)
{
    std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
    std::uniform_real_distribution<double> uy(region.y_min, region.y_max);
    cfg.user_pos.clear();
    for (int k = 0; k < cfg.k_users; ++k)
    {
        const double x = ux(rng);
        const double y = uy(rng);
        cfg.user_pos.push_back({x, y});
    }
}

MaxMinResult balanced_precoder(const std::vector<cvec> &h, double p_t, double sigma2, const MaxMinOptions &opts)
{
    try
    {
        return maxmin_precoder_detailed(h, p_t, sigma2, opts);
    }
    catch (const ConvergenceError &e)
    {
        return e.last_iterate();
    }
}

SingleTrial trial_impl(const SweepRequest &req, const ScenarioConfig &point_cfg, const ChannelStatistics &stats_tpl,
                       int trial, std::vector<double> *trace = nullptr)
{
    const auto t = static_cast<std::uint64_t>(trial);
    Rng geometry = make_stream(req.seed, t, kGeometryStream);
    Rng chan_rng = make_stream(req.seed, t, kChannelStream);
    Rng noise_rng = make_stream(req.seed, t, kNoiseStream);

    ScenarioConfig cfg = point_cfg;
    if (req.user_region)
        place_users(cfg, *req.user_region, geometry);

    ChannelStatistics stats = stats_tpl;
    update_link_gains(stats, cfg);

    const bool single_user = cfg.k_users == 1;
    const H1Mode mode = single_user ? H1Mode::RankOne : H1Mode::FullRank;
    const ChannelSet truth = draw_channel_set(cfg, stats, mode, chan_rng, {req.model.n_paths});

    LinkChannels design;
    if (req.csi == CsiMode::Perfect)
        design = LinkChannels::from(truth);
    else
    {
        const TrainingModel tm{req.model.tau_ref_s, req.with_irs};
        const TrainingObservations obs = run_training(cfg, truth, noise_rng, tm);
        design = LinkChannels::from(estimate_all(obs, stats, truth.h1));
    }
    if (!req.with_irs)
        design.h0.clear();

    const double p_t = cfg.total_power_w;
    const double sigma2 = cfg.noise_power_w;

    cvec v;
    PrecoderSolution sol;
    if (req.with_irs)
    {
        if (single_user)
        {
            v = irs_phases_single_user(design.h0[0], design.hd[0]).v;
            sol = mrt(design.effective(0, v), p_t);
        }
        else
        {
            PgaOptions opts = req.model.pga;
            opts.seed = make_stream(req.seed, t, kOptimizerStream)();
            const PgaResult r = irs_phases_multiuser_pga(design, p_t, sigma2, opts);
            v = r.v.v;
            sol = r.precoder;
            if (trace)
                *trace = r.trace;
        }
    }
    else
        sol = balanced_precoder(design.hd, p_t, sigma2, req.model.pga.precoder).solution;

    // Evaluate on the true channels.
    LinkChannels actual = LinkChannels::from(truth);
    if (!req.with_irs)
        actual.h0.clear();

    SingleTrial out;
    out.sinr = downlink_sinr(actual.effective(v), sol, sigma2);
    for (double s : out.sinr)
        out.rate.push_back(std::log2(1.0 + s));
    out.min_rate = *std::min_element(out.rate.begin(), out.rate.end());
    const double overhead = std::min(cfg.training_s / cfg.coherence_s, 1.0);
    out.net_min_rate = (1.0 - overhead) * out.min_rate;
    return out;
}

// Placeholder user position for checks made before users are placed.
constexpr Point2 kFarAway{1e9, 1e9};

void check_request(const SweepRequest &req)
{
    if (req.grid.empty())
        throw ConfigError("sweep grid is empty.");
    if (req.trials < 1)
        throw ConfigError("trials must be >= 1.");
    ScenarioConfig probe = req.base;
    if (req.kind == SweepKind::TrainingTime)
        probe.training_s = 0.5 * probe.coherence_s;
    if (req.kind == SweepKind::UserDistance)
    {
        probe.k_users = 1;
        probe.user_pos = {kFarAway};
    }
    if (req.user_region)
        probe.user_pos.assign(static_cast<std::size_t>(std::max(probe.k_users, 0)), kFarAway);
    probe.validate();
}

ChannelStatistics stats_for(const SweepRequest &req, const ScenarioConfig &cfg)
{
    // Gains are refreshed per trial; positions here only need to be valid.
    ScenarioConfig c = cfg;
    if (req.user_region)
        c.user_pos.assign(static_cast<std::size_t>(c.k_users), kFarAway);
    return make_channel_statistics(c, req.model.correlation);
}

} // namespace

SingleTrial run_trial(const SweepRequest &req, double grid_value, int trial)
{
    check_request(req);
    const ScenarioConfig cfg = point_config(req, grid_value);
    return trial_impl(req, cfg, stats_for(req, cfg), trial);
}

std::vector<double> optimizer_trace(const SweepRequest &req, double grid_value, int trial)
{
    check_request(req);
    const ScenarioConfig cfg = point_config(req, grid_value);
    std::vector<double> trace;
    trial_impl(req, cfg, stats_for(req, cfg), trial, &trace);
    return trace;
}

std::vector<TrialResult> run_sweep(const SweepRequest &req)
{
    check_request(req);

    std::vector<ScenarioConfig> cfgs;
    std::vector<ChannelStatistics> stats;
    for (double value : req.grid)
    {
        cfgs.push_back(point_config(req, value));
        stats.push_back(stats_for(req, cfgs.back()));
    }

    const std::size_t n_points = req.grid.size();
    const auto n_trials = static_cast<std::size_t>(req.trials);
    const std::size_t n_tasks = n_points * n_trials;
    std::vector<SingleTrial> results(n_tasks);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;)
        {
            const std::size_t task = next.fetch_add(1);
            if (task >= n_tasks || failed.load())
                return;
            const std::size_t point = task / n_trials;
            const std::size_t trial = task % n_trials;
            try
            {
                results[task] = trial_impl(req, cfgs[point], stats[point], static_cast<int>(trial));
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true);
            }
        }
    };

    const int n_threads = std::max(1, std::min<int>(req.threads, static_cast<int>(n_tasks)));
    if (n_threads == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
    }
    if (error)
        std::rethrow_exception(error);

    // Reduction in fixed trial order.
    std::vector<TrialResult> out;
    for (std::size_t point = 0; point < n_points; ++point)
    {
        TrialResult agg;
        agg.sweep_value = req.grid[point];
        agg.seed = req.seed;
        agg.trials = req.trials;
        const std::size_t k_users = results[point * n_trials].sinr.size();
        agg.sinr.assign(k_users, 0.0);
        agg.rate_bps_hz.assign(k_users, 0.0);
        double sum_min = 0.0, sum_min_sq = 0.0, sum_net = 0.0;
        for (std::size_t trial = 0; trial < n_trials; ++trial)
        {
            const SingleTrial &r = results[point * n_trials + trial];
            for (std::size_t k = 0; k < k_users; ++k)
            {
                agg.sinr[k] += r.sinr[k];
                agg.rate_bps_hz[k] += r.rate[k];
            }
            sum_min += r.min_rate;
            sum_min_sq += r.min_rate * r.min_rate;
            sum_net += r.net_min_rate;
        }
        const double n = static_cast<double>(n_trials);
        for (std::size_t k = 0; k < k_users; ++k)
        {
            agg.sinr[k] /= n;
            agg.rate_bps_hz[k] /= n;
            agg.snr_db.push_back(linear_to_db(agg.sinr[k]));
        }
        agg.min_rate = sum_min / n;
        agg.net_min_rate = sum_net / n;
        if (n_trials > 1)
        {
            const double var = std::max(0.0, (sum_min_sq - n * agg.min_rate * agg.min_rate) / (n - 1.0));
            agg.min_rate_stderr = std::sqrt(var / n);
        }
        out.push_back(std::move(agg));
    }
    return out;
}

} // namespace irsim
