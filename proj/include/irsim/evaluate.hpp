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

#ifndef IRSIM_EVALUATE_HPP
#define IRSIM_EVALUATE_HPP

#include "irsim/beamforming.hpp"
#include "irsim/channel.hpp"
#include "irsim/estimation.hpp"
#include "irsim/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace irsim
{

// h_d,k + H_0,k v
cvec effective_channel(const ChannelSet &channels, const IrsPhaseVector &v, int k);

// p_k |h_k^H g_k|^2 / (sum_{j != k} p_j |h_k^H g_j|^2 + sigma2)
double sinr(const ChannelSet &channels, const IrsPhaseVector &v, const PrecoderSolution &sol, double sigma2, int k);

// Single-user received SNR under MRT, 10 log10(P_T |h_d + H_0 v|^2 / sigma2).
// Throws ConfigError when the scenario has more than one user.
double received_snr_db(const ChannelSet &channels, const IrsPhaseVector &v, const ScenarioConfig &cfg);

// Averaged outcome at one grid point of a sweep.
struct TrialResult
{
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<double> snr_db;      // per user, dB of the mean linear SNR (single-user sweeps)
    std::vector<double> sinr;        // per user, mean linear SINR
    std::vector<double> rate_bps_hz; // per user, mean rate
    double min_rate = 0.0;           // mean over trials of min_k R_k
    double net_min_rate = 0.0;       // (1 - tau_c / tau) * min_rate
    double min_rate_stderr = 0.0;    // standard error of min_rate
};

enum class SweepKind
{
    UserDistance, // d_u, single user on the x axis
    TrainingTime, // tau_c, seconds
    IrsElements   // N
};

enum class CsiMode
{
    Perfect,
    Estimated
};

struct Region
{
    double x_min, x_max, y_min, y_max;
};

// Model choices that are not part of the physical scenario.
struct SystemModel
{
    CorrelationModel correlation{};
    double tau_ref_s = 4e-10;
    int n_paths = 0;     // full-rank BS-IRS scattering paths, 0 means 2K
    PgaOptions pga{};
};

struct SweepRequest
{
    ScenarioConfig base;
    SweepKind kind = SweepKind::UserDistance;
    std::vector<double> grid;
    int trials = 1;
    CsiMode csi = CsiMode::Perfect;
    bool with_irs = true;
    std::uint64_t seed = 1;
    int threads = 1;
    SystemModel model{};
    // Users are redrawn uniformly in this region every trial (multi-user
    // sweeps). Without it the positions in `base` are used as is.
    std::optional<Region> user_region;
};

// One curve: every grid point averaged over `trials` independent trials.
// Channels are designed on the selected CSI and evaluated on the true
// channels. Output is identical for any thread count.
std::vector<TrialResult> run_sweep(const SweepRequest &req);

// Outcome of a single trial, exposed for tests and validation suites.
struct SingleTrial
{
    std::vector<double> sinr;
    std::vector<double> rate;
    double min_rate = 0.0;
    double net_min_rate = 0.0;
};

SingleTrial run_trial(const SweepRequest &req, double grid_value, int trial);

// Objective trace of the phase optimizer for one trial; empty when the
// trial does not run it (single user or no IRS).
std::vector<double> optimizer_trace(const SweepRequest &req, double grid_value, int trial);

std::string to_string(SweepKind kind);
std::string to_string(CsiMode csi);

} // namespace irsim

#endif
