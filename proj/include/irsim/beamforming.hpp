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

#ifndef IRSIM_BEAMFORMING_HPP
#define IRSIM_BEAMFORMING_HPP

#include "irsim/channel.hpp"
#include "irsim/estimation.hpp"
#include "irsim/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace irsim
{

// Reflect-beamforming vector, one unit-modulus coefficient per element.
struct IrsPhaseVector
{
    cvec v;

    static IrsPhaseVector all_ones(int n);

    // max_n ||v[n]| - 1|
    double modulus_defect() const;
};

// Precoding directions and powers; sum_k p[k] |g[k]|^2 = P_T.
struct PrecoderSolution
{
    std::vector<cvec> g;
    std::vector<double> p;

    double total_power() const;
};

// The channels an optimizer designs on: true channels or their estimates.
struct LinkChannels
{
    std::vector<cvec> hd; // K x M
    std::vector<cmat> h0; // K x (M x N), empty for a system without IRS

    static LinkChannels from(const ChannelSet &cs);
    static LinkChannels from(const ChannelEstimateSet &est);

    int k() const { return static_cast<int>(hd.size()); }
    bool has_irs() const { return !h0.empty(); }

    // hd[k] + h0[k] v, or hd[k] without IRS.
    cvec effective(int k, const cvec &v) const;
    std::vector<cvec> effective(const cvec &v) const;
};

PrecoderSolution mrt(const cvec &h_eff, double p_t);

// v[n] = exp(j angle((h0^H hd)[n])); a zero entry keeps phase 0.
IrsPhaseVector irs_phases_single_user(const cmat &h0, const cvec &hd);

// Phases that add every reflected path coherently along the dominant left
// singular direction of h0. Maximizes |h0 v|^2 when h0 has rank one.
IrsPhaseVector irs_phases_aligned(const cmat &h0);

// ---------- Max-min SINR precoding ----------

struct MaxMinOptions
{
    int max_iter = 500;
    double tol = 1e-8; // relative spread of the uplink SINRs at convergence
};

struct MaxMinResult
{
    PrecoderSolution solution;
    Eigen::VectorXd uplink_power; // dual powers, usable as a warm start
    double balanced_sinr = 0.0;
    // l_k p_k / l^T p with l the left Perron vector of the downlink coupling;
    // the balanced rate moves like sum_k w_k dR_k.
    Eigen::VectorXd rate_weights;
    int iterations = 0;
};

// Raised when the uplink fixed point fails to balance within max_iter; the
// last iterate is carried along.
class ConvergenceError : public std::runtime_error
{
public:
    ConvergenceError(const std::string &what, MaxMinResult last)
        : std::runtime_error(what), last_(std::move(last))
    {
    }
    const MaxMinResult &last_iterate() const { return last_; }

private:
    MaxMinResult last_;
};

// SINR balancing under a total power budget via uplink-downlink duality:
// uplink powers q_k <- q_k / SINR_k (renormalized to p_t) with MMSE
// receivers g_k ~ (sigma2 I + sum_j q_j h_j h_j^H)^{-1} h_k, followed by the
// downlink power vector that balances all users exactly.
MaxMinResult maxmin_precoder_detailed(const std::vector<cvec> &h_eff, double p_t, double sigma2,
                                      const MaxMinOptions &opts = {},
                                      const Eigen::VectorXd *warm_start = nullptr);

PrecoderSolution maxmin_precoder(const std::vector<cvec> &h_eff, double p_t, double sigma2,
                                 const MaxMinOptions &opts = {});

// Downlink SINR of every user for given effective channels.
std::vector<double> downlink_sinr(const std::vector<cvec> &h_eff, const PrecoderSolution &sol, double sigma2);

// ---------- Reflect beamforming for several users ----------

// Soft-min of the user rates, -mu log sum_k exp(-R_k / mu), R_k in bit/s/Hz,
// with the precoder held fixed.
double softmin_rate(const LinkChannels &ch, const cvec &v, const PrecoderSolution &sol, double sigma2, double mu);

// Wirtinger gradient d f / d conj(v) of softmin_rate. The real gradient with
// respect to (Re v, Im v) is (2 Re, 2 Im) of the returned vector.
cvec softmin_rate_gradient(const LinkChannels &ch, const cvec &v, const PrecoderSolution &sol, double sigma2,
                           double mu);

// d R / d conj(v) of the balanced max-min rate R(v) = log2(1 + gamma(v)),
// evaluated at a max-min solution for the channels at v.
cvec balanced_rate_gradient(const LinkChannels &ch, const cvec &v, const MaxMinResult &mm, double sigma2);

enum class PgaDirection
{
    Envelope, // gradient of the re-balanced min rate, soft-min as fallback
    SoftMin   // soft-min gradient with the precoder held fixed
};

struct PgaOptions
{
    double tol = 1e-6;          // relative change of the objective
    int max_outer = 200;        //
    double mu_initial = 0.1;    // soft-min temperature, bits
    double mu_min = 1e-3;       //
    double mu_factor = 0.5;     // annealing factor
    int mu_every = 20;          // outer iterations between annealing steps
    double step_initial = 1.0;  // in units of the largest gradient entry
    double backtrack = 0.5;     //
    int max_halvings = 30;      //
    int restarts = 1;           // starts in total; the first is all-ones
    PgaDirection direction = PgaDirection::Envelope;
    int rotation_probes = 16;   // common phase rotations tried before stopping, <= 1 disables
    std::uint64_t seed = 1;     // random restarts and degenerate projections
    MaxMinOptions precoder{};
};

struct PgaResult
{
    IrsPhaseVector v;
    PrecoderSolution precoder;
    std::vector<double> trace; // min rate at the start, then after every accepted step
    int outer_iterations = 0;
};

// Alternates max-min precoding for fixed v with a projected gradient ascent
// step on the soft-min rate for the fixed precoder. A step is accepted once
// the soft-min does not decrease and the re-optimized min rate does not
// decrease either, so the trace is monotone.
PgaResult irs_phases_multiuser_pga(const LinkChannels &ch, double p_t, double sigma2, const PgaOptions &opts = {});

// Unit-modulus projection; zero entries get a random phase from rng.
void project_unit_modulus(cvec &v, Rng &rng);

} // namespace irsim

#endif
