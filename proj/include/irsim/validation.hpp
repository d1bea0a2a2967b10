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

#ifndef IRSIM_VALIDATION_HPP
#define IRSIM_VALIDATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace irsim
{

// One measured quantity against its limit.
struct Check
{
    std::string metric;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation; // "<", "<=", ">=", "in"
    bool pass = false;
};

struct SuiteReport
{
    std::string name;
    std::vector<Check> checks;

    bool passed() const;
};

// Empirical MSE against the analytic error covariance for the direct and
// the cascaded estimator, plus the orthogonality residual
// |E[h_hat e^H]|_F / |E[h_hat h_hat^H]|_F.
struct MmseSuiteOptions
{
    // Noise variance relative to the per-entry prior variance.
    std::vector<double> noise_levels{0.1, 0.5, 2.0};
    // When set, a single absolute noise variance (0 allowed) replaces the levels.
    std::optional<double> absolute_noise;
    int trials = 10000;
    int m = 4;
    double mse_tol = 0.05;
    double orthogonality_tol = 0.05;
    std::uint64_t seed = 7;
};
SuiteReport mmse_suite(const MmseSuiteOptions &opts = {});

// Analytic soft-min gradient against central finite differences over the
// 2N real coordinates of v. `perturbation` scales the analytic gradient by
// (1 + perturbation) to check that the suite can fail.
struct GradientSuiteOptions
{
    int points = 10;
    int k = 3;
    int m = 4;
    int n = 6;
    double mu = 0.1;
    double fd_step = 1e-6;
    double tol = 1e-5;
    double perturbation = 0.0;
    std::uint64_t seed = 11;
};
SuiteReport gradient_suite(const GradientSuiteOptions &opts = {});

// Exhaustive phase grid against the single-user closed form for rank-one
// BS-IRS channels.
struct PhaseOptimalitySuiteOptions
{
    int instances = 100;
    int levels = 64;
    int max_m = 4;
    int max_n = 3;
    double p_t = 5.0;
    std::uint64_t seed = 13;
};
SuiteReport phase_optimality_suite(const PhaseOptimalitySuiteOptions &opts = {});

// SNR gain from doubling N with the direct link suppressed and all
// reflections aligned.
struct IrsScalingSuiteOptions
{
    std::vector<int> n_values{8, 16, 32};
    int trials = 1000;
    double expected_db = 6.02;
    double tol_db = 0.5;
    std::uint64_t seed = 17;
};
SuiteReport irs_scaling_suite(const IrsScalingSuiteOptions &opts = {});

// Mean received SNR gain from N -> 2N for the single user next to the IRS,
// direct link present, perfect CSI.
struct SnrDoublingSuiteOptions
{
    double du = 50.0;
    int n = 35;
    int trials = 500;
    double expected_db = 6.0;
    double tol_db = 1.5;
    std::uint64_t seed = 19;
    int threads = 1;
};
SuiteReport snr_doubling_suite(const SnrDoublingSuiteOptions &opts = {});

} // namespace irsim

#endif
