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

#include "irsim/estimation.hpp"

#include <Eigen/QR>

#include <cmath>

namespace irsim
{

double observation_noise_variance(const ScenarioConfig &cfg, const TrainingModel &model)
{
    const double tau_s = model.with_irs ? cfg.subphase_s() : cfg.training_s;
    if (!(tau_s > 0.0) || !(model.tau_ref_s > 0.0))
        throw ConfigError("training and reference durations must be positive.");
    return cfg.noise_power_w * model.tau_ref_s / (cfg.pilot_power_w * tau_s);
}

TrainingObservations run_training(const ChannelSet &channels, double noise_var, Rng &rng, bool with_irs)
{
    if (noise_var < 0.0)
        throw DomainError("run_training: noise variance must be non-negative.");

    const int n_sub = with_irs ? channels.n() + 1 : 1;
    const double scale = std::sqrt(noise_var);

    TrainingObservations obs;
    obs.noise_var_eff = noise_var;
    obs.r.resize(static_cast<std::size_t>(n_sub));
    for (int i = 0; i < n_sub; ++i)
    {
        auto &row = obs.r[static_cast<std::size_t>(i)];
        row.reserve(static_cast<std::size_t>(channels.k()));
        for (int k = 0; k < channels.k(); ++k)
        {
            // The noise is drawn even when noise_var == 0 so that a stream
            // produces the same realization up to scale for every noise level.
            const auto ku = static_cast<std::size_t>(k);
            cvec obs_k = channels.hd[ku] + scale * complex_normal(channels.m(), rng);
            if (i > 0)
                obs_k += channels.h0[ku].col(i - 1);
            row.push_back(std::move(obs_k));
        }
    }
    return obs;
}

TrainingObservations run_training(const ScenarioConfig &cfg, const ChannelSet &channels, Rng &rng,
                                  const TrainingModel &model)
{
    return run_training(channels, observation_noise_variance(cfg, model), rng, model.with_irs);
}

LmmseResult lmmse_direct(const cvec &r0k, const cmat &prior_cov, double noise_var)
{
    if (prior_cov.rows() != r0k.size() || prior_cov.cols() != r0k.size())
        throw DomainError("lmmse_direct: prior covariance does not match the observation.");
    if (noise_var < 0.0)
        throw DomainError("lmmse_direct: noise variance must be non-negative.");

    LmmseResult out;
    const Eigen::Index m = r0k.size();
    if (noise_var > 0.0)
    {
        const cmat a = prior_cov + noise_var * cmat::Identity(m, m);
        const Eigen::LDLT<cmat> ldlt(a);
        // W = C (C + sI)^{-1}; both factors are Hermitian so W^H = (C + sI)^{-1} C.
        const cmat wt = ldlt.solve(prior_cov);
        out.estimate = wt.adjoint() * r0k;
        out.err_cov = prior_cov - prior_cov * wt;
    }
    else
    {
        const Eigen::CompleteOrthogonalDecomposition<cmat> cod(prior_cov);
        const cmat proj = prior_cov * cod.pseudoInverse();
        out.estimate = proj * r0k;
        out.err_cov = prior_cov - proj * prior_cov;
    }
    out.err_cov = 0.5 * (out.err_cov + out.err_cov.adjoint()).eval();
    return out;
}

LmmseResult lmmse_cascaded(const cvec &rtk, const cvec &r0k, const cvec &h1_col, double var_n, double noise_var)
{
    if (rtk.size() != r0k.size() || rtk.size() != h1_col.size())
        throw DomainError("lmmse_cascaded: dimension mismatch.");
    if (var_n < 0.0 || noise_var < 0.0)
        throw DomainError("lmmse_cascaded: variances must be non-negative.");

    const Eigen::Index m = rtk.size();
    const double energy = var_n * h1_col.squaredNorm();
    const double denom = 2.0 * noise_var + energy;

    LmmseResult out;
    if (denom == 0.0)
    {
        out.estimate = cvec::Zero(m);
        out.err_cov = cmat::Zero(m, m);
        return out;
    }

    // Rank-one prior: C (C + 2sI)^{-1} = var_n h h^H / (2s + var_n |h|^2).
    const cplx coeff = var_n * h1_col.dot(rtk - r0k) / denom;
    out.estimate = coeff * h1_col;
    out.err_cov = (var_n * 2.0 * noise_var / denom) * (h1_col * h1_col.adjoint());
    return out;
}

cmat ChannelEstimateSet::h0_matrix(int k) const
{
    const auto &cols = h0_hat.at(static_cast<std::size_t>(k));
    const Eigen::Index m = hd_hat.at(static_cast<std::size_t>(k)).size();
    cmat h0(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t n = 0; n < cols.size(); ++n)
        h0.col(static_cast<Eigen::Index>(n)) = cols[n];
    return h0;
}

ChannelEstimateSet estimate_all(const TrainingObservations &obs, const ChannelStatistics &stats, const cmat &h1)
{
    if (obs.r.empty())
        throw DomainError("estimate_all: no observations.");
    const std::size_t k_users = obs.r[0].size();
    if (stats.beta_d.size() != k_users || stats.r_bs.size() != k_users)
        throw DomainError("estimate_all: statistics do not match the number of users.");
    const bool with_irs = obs.r.size() > 1;
    if (with_irs && static_cast<Eigen::Index>(obs.r.size()) != h1.cols() + 1)
        throw DomainError("estimate_all: expected N + 1 sub-phases.");

    const double s = obs.noise_var_eff;
    ChannelEstimateSet est;
    for (std::size_t k = 0; k < k_users; ++k)
    {
        const cmat prior = stats.beta_d[k] * stats.r_bs[k];
        auto direct = lmmse_direct(obs.r[0][k], prior, s);
        est.hd_hat.push_back(std::move(direct.estimate));
        est.err_cov_d.push_back(std::move(direct.err_cov));

        std::vector<cvec> cols;
        std::vector<cmat> covs;
        if (with_irs)
        {
            for (Eigen::Index n = 0; n < h1.cols(); ++n)
            {
                const double var_n = stats.beta_2[k] * stats.r_irs[k](n, n).real();
                auto casc = lmmse_cascaded(obs.r[static_cast<std::size_t>(n + 1)][k], obs.r[0][k], h1.col(n), var_n, s);
                cols.push_back(std::move(casc.estimate));
                covs.push_back(std::move(casc.err_cov));
            }
        }
        est.h0_hat.push_back(std::move(cols));
        est.err_cov_0.push_back(std::move(covs));
    }
    return est;
}

} // namespace irsim
