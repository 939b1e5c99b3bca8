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

#include "oosi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oosi/errors.hpp"

namespace oosi
{

bool all_finite(const CMatrix &M)
{
    for (Index j = 0; j < M.cols(); ++j)
        for (Index i = 0; i < M.rows(); ++i)
            if (!std::isfinite(M(i, j).real()) || !std::isfinite(M(i, j).imag()))
                return false;
    return true;
}

void require_finite(const CMatrix &M, std::string_view what)
{
    if (!all_finite(M))
        throw InputError(std::string(what) + ": matrix has non-finite entries");
}

void fix_column_phases(CMatrix &cols, CMatrix *partner)
{
    for (Index j = 0; j < cols.cols(); ++j)
    {
        Index best = 0;
        double best_mag = -1.0;
        for (Index i = 0; i < cols.rows(); ++i)
        {
            // Strictly larger (with slack) so near-ties resolve to the first row.
            const double mag = std::abs(cols(i, j));
            if (mag > best_mag * (1.0 + 1e-12))
            {
                best_mag = mag;
                best = i;
            }
        }
        if (best_mag <= 0.0)
            continue;
        const cplx phase = std::conj(cols(best, j)) / best_mag;
        cols.col(j) *= phase;
        cols(best, j) = cplx(best_mag, 0.0);
        if (partner != nullptr && j < partner->cols())
            partner->col(j) *= phase;
    }
}

namespace
{

Svd run_jacobi(const CMatrix &M, unsigned int options, const char *what)
{
    require_finite(M, what);
    Eigen::JacobiSVD<CMatrix> svd(M, options);
    if (svd.info() != Eigen::Success)
        throw NumericalError(std::string(what) + ": SVD did not converge");

    Svd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    if (!all_finite(out.U) || !all_finite(out.V) || !out.sigma.allFinite())
        throw NumericalError(std::string(what) + ": SVD produced non-finite factors");
    fix_column_phases(out.U, &out.V);
    return out;
}

} // namespace

Svd economy_svd(const CMatrix &M)
{
    if (M.size() == 0)
        throw InputError("economy_svd: empty matrix");
    return run_jacobi(M, Eigen::ComputeThinU | Eigen::ComputeThinV, "economy_svd");
}

Svd svd_full_v(const CMatrix &M)
{
    if (M.size() == 0)
        throw InputError("svd_full_v: empty matrix");
    Svd out = run_jacobi(M, Eigen::ComputeThinU | Eigen::ComputeFullV, "svd_full_v");
    // Columns of V past min(rows, cols) span the null space and have no
    // partner in U; give them the same phase convention on their own.
    const Index r = out.sigma.size();
    if (out.V.cols() > r)
    {
        CMatrix tail = out.V.rightCols(out.V.cols() - r);
        fix_column_phases(tail);
        out.V.rightCols(out.V.cols() - r) = tail;
    }
    return out;
}

EigenPairs hermitian_top_eigvectors(const CMatrix &A, Index k)
{
    if (A.rows() != A.cols() || A.rows() == 0)
        throw InputError("hermitian_top_eigvectors: matrix must be square and nonempty");
    if (k <= 0 || k > A.rows())
        throw InputError("hermitian_top_eigvectors: k must lie in [1, dim]");
    require_finite(A, "hermitian_top_eigvectors");

    const double scale = std::max(1.0, A.norm());
    if ((A - A.adjoint()).norm() > 1e-9 * scale)
        throw InputError("hermitian_top_eigvectors: matrix is not Hermitian");

    const CMatrix sym = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_top_eigvectors: eigensolver did not converge");

    // Eigen returns ascending eigenvalues.
    const Index n = A.rows();
    EigenPairs out{CMatrix(n, k), RVector(k)};
    for (Index i = 0; i < k; ++i)
    {
        out.values(i) = es.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    fix_column_phases(out.vectors);
    return out;
}

Index numerical_rank(const RVector &sigma, double rtol)
{
    if (sigma.size() == 0)
        return 0;
    const double cutoff = rtol * sigma.maxCoeff();
    Index r = 0;
    for (Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff)
            ++r;
    return r;
}

CMatrix pseudo_inverse(const CMatrix &M, double rtol)
{
    if (!(rtol > 0.0))
        throw InputError("pseudo_inverse: rtol must be positive");
    if (M.size() == 0)
        return CMatrix::Zero(M.cols(), M.rows());
    const Svd svd = economy_svd(M);
    const Index r = numerical_rank(svd.sigma, rtol);
    if (r == 0)
        return CMatrix::Zero(M.cols(), M.rows());
    RVector inv = svd.sigma.head(r).cwiseInverse();
    return svd.V.leftCols(r) * inv.asDiagonal() * svd.U.leftCols(r).adjoint();
}

CMatrix hermitian_solve(const CMatrix &Gamma, const CMatrix &B, double min_ratio)
{
    if (Gamma.rows() != Gamma.cols() || Gamma.rows() != B.rows())
        throw InputError("hermitian_solve: dimension mismatch");
    require_finite(Gamma, "hermitian_solve");
    const CMatrix sym = 0.5 * (Gamma + Gamma.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_solve: eigensolver did not converge");
    const RVector &lambda = es.eigenvalues();
    const double lmax = lambda(lambda.size() - 1);
    const double lmin = lambda(0);
    if (!(lmax > 0.0) || lmin <= min_ratio * lmax)
        throw DegeneracyError("hermitian_solve: Gramian is singular or ill-conditioned");
    // Eigen-based inverse; these matrices are at most tens of rows.
    return es.eigenvectors() * (es.eigenvectors().adjoint() * B).cwiseQuotient(
                                   lambda.cast<cplx>().replicate(1, B.cols()));
}

namespace
{

CMatrix orthonormal_basis(const CMatrix &A)
{
    if (A.rows() < A.cols())
        throw InputError("principal_angles: basis has more columns than rows");
    Eigen::HouseholderQR<CMatrix> qr(A);
    return qr.householderQ() * CMatrix::Identity(A.rows(), A.cols());
}

} // namespace

std::vector<double> principal_angles(const CMatrix &A, const CMatrix &B)
{
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.cols() == 0)
        throw InputError("principal_angles: shapes must match and be nonempty");
    const CMatrix qa = orthonormal_basis(A);
    const CMatrix qb = orthonormal_basis(B);
    const CMatrix cross = qa.adjoint() * qb;

    // Cosines are inaccurate for small angles, sines for angles near pi/2;
    // combine both via atan2.
    Eigen::JacobiSVD<CMatrix> cos_svd(cross);
    Eigen::JacobiSVD<CMatrix> sin_svd(qb - qa * cross);
    const RVector c = cos_svd.singularValues();  // descending -> ascending angle
    const RVector s = sin_svd.singularValues();  // descending -> descending angle
    const Index k = c.size();
    std::vector<double> angles(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i)
        angles[static_cast<std::size_t>(i)] = std::atan2(s(k - 1 - i), c(i));
    std::sort(angles.begin(), angles.end());
    return angles;
}

double largest_principal_angle(const CMatrix &A, const CMatrix &B)
{
    const auto angles = principal_angles(A, B);
    return angles.back();
}

CMatrix vstack(const std::vector<CMatrix> &blocks)
{
    if (blocks.empty())
        return CMatrix();
    const Index cols = blocks.front().cols();
    Index rows = 0;
    for (const auto &b : blocks)
    {
        if (b.cols() != cols)
            throw InputError("vstack: column counts differ");
        rows += b.rows();
    }
    CMatrix out(rows, cols);
    Index r = 0;
    for (const auto &b : blocks)
    {
        out.middleRows(r, b.rows()) = b;
        r += b.rows();
    }
    return out;
}

} // namespace oosi
