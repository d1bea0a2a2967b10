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

#ifndef IRSIM_LINALG_HPP
#define IRSIM_LINALG_HPP

#include "irsim/types.hpp"

namespace irsim
{

// Eigenvalues below this are treated as a genuinely indefinite matrix.
inline constexpr double kPsdTolerance = 1e-10;

// Hermitian PSD square root via eigendecomposition. Eigenvalues in
// [-kPsdTolerance, 0] are clamped to zero; anything lower throws DomainError.
cmat hermitian_sqrt(const cmat &r);

double min_eigenvalue(const cmat &r);

// max |A - A^H| relative to max |A|.
double hermitian_defect(const cmat &a);

// Singular values in descending order.
Eigen::VectorXd singular_values(const cmat &a);

// Number of singular values above rel_tol times the largest.
int numerical_rank(const cmat &a, double rel_tol = 1e-8);

} // namespace irsim

#endif
