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

#include "irsim/types.hpp"

#include <array>
#include <cmath>

namespace irsim
{

Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
{
    std::array<std::uint32_t, 6> words{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

cplx complex_normal(Rng &rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

cvec complex_normal(Eigen::Index n, Rng &rng)
{
    std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
    cvec z(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double re = dist(rng);
        const double im = dist(rng);
        z(i) = cplx(re, im);
    }
    return z;
}

} // namespace irsim
