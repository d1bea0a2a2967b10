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

#include "irsim/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace irsim
{

cmat hermitian_sqrt(const cmat &r)
{
    if (r.rows() != r.cols())
        throw DomainError("hermitian_sqrt: matrix must be square.");
    if (r.size() == 0)
        return r;

    Eigen::SelfAdjointEigenSolver<cmat> es(r);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_sqrt: eigendecomposition failed.");

    Eigen::VectorXd lambda = es.eigenvalues();
    if (lambda.minCoeff() < -kPsdTolerance)
        throw DomainError("hermitian_sqrt: matrix is not positive semidefinite.");
    lambda = lambda.cwiseMax(0.0).cwiseSqrt();

    const cmat &u = es.eigenvectors();
    return u * lambda.asDiagonal() * u.adjoint();
}

double min_eigenvalue(const cmat &r)
{
    Eigen::SelfAdjointEigenSolver<cmat> es(r, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double hermitian_defect(const cmat &a)
{
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

Eigen::VectorXd singular_values(const cmat &a)
{
    Eigen::JacobiSVD<cmat> svd(a);
    return svd.singularValues();
}

int numerical_rank(const cmat &a, double rel_tol)
{
    const Eigen::VectorXd s = singular_values(a);
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0))
            ++rank;
    return rank;
}

} // namespace irsim
