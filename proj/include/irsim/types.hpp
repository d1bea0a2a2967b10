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

#ifndef IRSIM_TYPES_HPP
#define IRSIM_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace irsim
{

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

// All random draws go through an explicitly passed engine.
using Rng = std::mt19937_64;

// Independent stream for (seed, trial, stream id). Streams do not depend on
// the sweep grid point, so every grid point of a sweep sees the same
// realizations for a given trial (common random numbers).
Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

// Standard circularly-symmetric complex Gaussian, E|z|^2 = 1.
cplx complex_normal(Rng &rng);
cvec complex_normal(Eigen::Index n, Rng &rng);

// ---------- Errors ----------

// Input outside the mathematical domain of an operation (negative distance,
// non-PSD covariance, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Inconsistent or invalid configuration.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A channel is identically zero where a direction is required.
class DegenerateChannelError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Non-finite values inside an optimizer.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace irsim

#endif
