// SPDX-License-Identifier: Apache-2.0
//
// oosi - decentralized out-of-system interference suppression for
// cell-free massive MIMO
// Copyright (C) 2026 The oosi authors
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

#ifndef OOSI_NUMERICS_HPP
#define OOSI_NUMERICS_HPP

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace oosi
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd; // dense complex matrix, column-major storage
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Thin SVD M = U diag(sigma) V^H with r = min(rows, cols) columns.
struct Svd
{
    CMatrix U;
    RVector sigma; // nonincreasing, nonnegative
    CMatrix V;
};

struct EigenPairs
{
    CMatrix vectors; // orthonormal columns
    RVector values;  // nonincreasing
};

bool all_finite(const CMatrix &M);

// Throws InputError naming `what` if M has a NaN or Inf entry.
void require_finite(const CMatrix &M, std::string_view what);

// Rotates each column of `cols` so that its largest-magnitude entry is real
// and nonnegative; the same phase is applied to the matching column of
// `partner` (if given), which keeps products cols * partner^H unchanged.
void fix_column_phases(CMatrix &cols, CMatrix *partner = nullptr);

Svd economy_svd(const CMatrix &M);

// Same as economy_svd but V is completed to a full cols x cols unitary
// matrix. sigma still has min(rows, cols) entries.
Svd svd_full_v(const CMatrix &M);

// The k dominant eigenpairs of a Hermitian matrix. A is symmetrized as
// (A + A^H) / 2 after checking ||A - A^H||_F <= 1e-9 * max(1, ||A||_F).
EigenPairs hermitian_top_eigvectors(const CMatrix &A, Index k);

constexpr double default_pinv_rtol = 1e-12;

// Moore-Penrose pseudoinverse; singular values below rtol * sigma_max are
// treated as zero.
CMatrix pseudo_inverse(const CMatrix &M, double rtol = default_pinv_rtol);

// Number of singular values above rtol * sigma_max.
Index numerical_rank(const RVector &sigma, double rtol = default_pinv_rtol);

// Solves Gamma X = B for Hermitian positive definite Gamma. Throws
// DegeneracyError when lambda_min <= min_ratio * lambda_max.
CMatrix hermitian_solve(const CMatrix &Gamma, const CMatrix &B, double min_ratio = 1e-10);

// Principal angles (radians, ascending) between the column spans of A and B.
// Both are orthonormalized internally, so any full-column-rank bases work.
std::vector<double> principal_angles(const CMatrix &A, const CMatrix &B);

double largest_principal_angle(const CMatrix &A, const CMatrix &B);

// Stacks per-AP blocks vertically.
CMatrix vstack(const std::vector<CMatrix> &blocks);

} // namespace oosi

#endif
