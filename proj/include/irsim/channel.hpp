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

#ifndef IRSIM_CHANNEL_HPP
#define IRSIM_CHANNEL_HPP

#include "irsim/scenario.hpp"
#include "irsim/types.hpp"

#include "json.hpp"

#include <vector>

namespace irsim
{

// Second-order statistics of all user links plus the large-scale gains.
struct ChannelStatistics
{
    std::vector<cmat> r_bs;     // K Hermitian M x M, unit diagonal
    std::vector<cmat> r_irs;    // K Hermitian N x N, unit diagonal
    double beta_1 = 0.0;        // BS-IRS
    std::vector<double> beta_2; // IRS-user k
    std::vector<double> beta_d; // BS-user k

    // PSD square roots of r_bs / r_irs, kept in sync by refresh_factors().
    std::vector<cmat> sqrt_r_bs;
    std::vector<cmat> sqrt_r_irs;

    void refresh_factors();
};

// Exponential spatial correlation rho^|i-j| for the BS and IRS arrays.
struct CorrelationModel
{
    double rho_bs = 0.5;
    double rho_irs = 0.7;
};

// Correlation matrices from `model` and link gains from the geometry in `cfg`.
ChannelStatistics make_channel_statistics(const ScenarioConfig &cfg, const CorrelationModel &model = {});

// Recompute only the large-scale gains (users moved, matrices unchanged).
void update_link_gains(ChannelStatistics &stats, const ScenarioConfig &cfg);

// One realization of every channel in the system.
struct ChannelSet
{
    cmat h1;              // M x N, BS-IRS
    std::vector<cvec> h2; // K x N, IRS-user
    std::vector<cvec> hd; // K x M, BS-user
    std::vector<cmat> h0; // K x (M x N), h1 * diag(h2[k])

    int m() const { return static_cast<int>(h1.rows()); }
    int n() const { return static_cast<int>(h1.cols()); }
    int k() const { return static_cast<int>(hd.size()); }
};

enum class H1Mode
{
    RankOne,
    FullRank
};

// Half-wavelength ULA response, entry m = exp(j pi m sin(angle)).
cvec steering_vector(int n_elem, double angle);

// sqrt(beta_1) a(aod) b(aoa)^H.
cmat rank_one_h1(int m, int n, double beta_1, double aod, double aoa);

// Angles follow from the BS and IRS positions; both arrays lie along the x axis.
cmat rank_one_h1(const ScenarioConfig &cfg, double aod, double aoa);
double bs_to_irs_aod(const ScenarioConfig &cfg);
double bs_to_irs_aoa(const ScenarioConfig &cfg);

// Sum of n_paths scattered plane waves with CN(0,1) gains and uniform angles
// in [-pi/2, pi/2], normalized by sqrt(beta_1 / n_paths). Throws ConfigError
// when n_paths < k_users.
cmat full_rank_h1(int m, int n, double beta_1, int n_paths, int k_users, Rng &rng);
cmat full_rank_h1(const ScenarioConfig &cfg, int n_paths, Rng &rng);

// rho^|i-j|, rho in [0, 1).
cmat exp_correlation(int n, double rho);

// sqrt(beta) r^{1/2} z with z ~ CN(0, I).
cvec sample_correlated_rayleigh(const cmat &r, double beta, Rng &rng);

// Same draw with a precomputed square root of the correlation matrix.
cvec sample_with_factor(const cmat &sqrt_r, double beta, Rng &rng);

// h1 * diag(h2k): column n scaled by h2k[n].
cmat cascade(const cmat &h1, const cvec &h2k);

struct DrawOptions
{
    int n_paths = 0; // full-rank paths, 0 means 2K
};

// Draw order is fixed: all hd, then h1, then all h2. The direct links of a
// trial therefore do not depend on N.
ChannelSet draw_channel_set(const ScenarioConfig &cfg, const ChannelStatistics &stats, H1Mode mode, Rng &rng,
                            const DrawOptions &opts = {});

// Overload for a fixed, externally drawn BS-IRS matrix.
ChannelSet draw_channel_set(const cmat &h1, const ChannelStatistics &stats, Rng &rng);

// Regression fixtures: real/imag arrays.
nlohmann::json channel_set_to_json(const ChannelSet &cs);
ChannelSet channel_set_from_json(const nlohmann::json &j);

} // namespace irsim

#endif
