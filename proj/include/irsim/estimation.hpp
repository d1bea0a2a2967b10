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

#ifndef IRSIM_ESTIMATION_HPP
#define IRSIM_ESTIMATION_HPP

#include "irsim/channel.hpp"
#include "irsim/scenario.hpp"
#include "irsim/types.hpp"

#include <vector>

namespace irsim
{

// Pilot-matched observations of the on/off training protocol.
// r[0][k]: all elements OFF; r[t][k]: only element t ON (t = 1..N).
struct TrainingObservations
{
    std::vector<std::vector<cvec>> r;
    double noise_var_eff = 0.0; // per-entry noise variance of every r[i][k]

    int subphases() const { return static_cast<int>(r.size()); }
};

// How training time maps to observation quality. The pilot energy of one
// sub-phase is p_c * tau_s, normalized to a reference symbol of tau_ref_s,
// so each observation carries noise sigma^2 * tau_ref / (p_c * tau_s).
struct TrainingModel
{
    double tau_ref_s = 4e-10;
    bool with_irs = true; // false: a single sub-phase spanning tau_c
};

double observation_noise_variance(const ScenarioConfig &cfg, const TrainingModel &model = {});

TrainingObservations run_training(const ChannelSet &channels, double noise_var, Rng &rng, bool with_irs = true);
TrainingObservations run_training(const ScenarioConfig &cfg, const ChannelSet &channels, Rng &rng,
                                  const TrainingModel &model = {});

struct LmmseResult
{
    cvec estimate;
    cmat err_cov;
};

// C (C + sI)^{-1} r with error covariance C - C (C + sI)^{-1} C.
// noise_var = 0 is accepted and yields the noiseless projection.
LmmseResult lmmse_direct(const cvec &r0k, const cmat &prior_cov, double noise_var);

// Estimate of h_0,n,k from the difference rtk - r0k (noise 2 * noise_var per
// entry) under the rank-one prior var_n * h1_col h1_col^H.
LmmseResult lmmse_cascaded(const cvec &rtk, const cvec &r0k, const cvec &h1_col, double var_n, double noise_var);

struct ChannelEstimateSet
{
    std::vector<cvec> hd_hat;              // K x M
    std::vector<std::vector<cvec>> h0_hat; // K x N x M, empty without IRS
    std::vector<cmat> err_cov_d;           // K x (M x M)
    std::vector<std::vector<cmat>> err_cov_0;

    // Column-wise reassembly of the cascaded estimate for user k (M x N).
    cmat h0_matrix(int k) const;
};

ChannelEstimateSet estimate_all(const TrainingObservations &obs, const ChannelStatistics &stats, const cmat &h1);

} // namespace irsim

#endif
