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

#include <doctest.h>

#include <limits>
#include <numbers>

#include "helpers.hpp"
#include "oosi/errors.hpp"
#include "oosi/numerics.hpp"

using namespace oosi;
using testing::randn;
using testing::rng_for;

namespace
{

void check_svd_contract(const CMatrix &M, const Svd &s)
{
    const Index r = std::min(M.rows(), M.cols());
    REQUIRE(s.U.rows() == M.rows());
    REQUIRE(s.U.cols() == r);
    REQUIRE(s.V.rows() == M.cols());
    REQUIRE(s.V.cols() == r);
    REQUIRE(s.sigma.size() == r);
    CHECK((s.U.adjoint() * s.U - CMatrix::Identity(r, r)).norm() < 1e-10);
    CHECK((s.V.adjoint() * s.V - CMatrix::Identity(r, r)).norm() < 1e-10);
    for (Index i = 0; i < r; ++i)
    {
        CHECK(s.sigma(i) >= 0.0);
        if (i > 0)
            CHECK(s.sigma(i) <= s.sigma(i - 1));
    }
    const CMatrix rec = s.U * s.sigma.cast<cplx>().asDiagonal() * s.V.adjoint();
    CHECK((rec - M).norm() <= 1e-10 * std::max(1.0, M.norm()));
}

} // namespace

TEST_CASE("economy_svd: identity and zero")
{
    const Svd id = economy_svd(CMatrix::Identity(2, 2));
    CHECK((id.U - CMatrix::Identity(2, 2)).norm() < 1e-14);
    CHECK((id.V - CMatrix::Identity(2, 2)).norm() < 1e-14);
    CHECK(id.sigma(0) == doctest::Approx(1.0));
    CHECK(id.sigma(1) == doctest::Approx(1.0));

    const Svd z = economy_svd(CMatrix::Zero(3, 2));
    CHECK(z.sigma.size() == 2);
    CHECK(z.sigma.norm() == 0.0);
    check_svd_contract(CMatrix::Zero(3, 2), z);
}

TEST_CASE("economy_svd: random reconstruction and phase convention")
{
    auto rng = rng_for(11);
    for (auto [rows, cols] : {std::pair{4, 3}, std::pair{3, 4}, std::pair{45, 2}, std::pair{4, 45}})
    {
        const CMatrix M = randn(rows, cols, rng);
        const Svd s = economy_svd(M);
        check_svd_contract(M, s);
        for (Index j = 0; j < s.U.cols(); ++j)
        {
            Index imax = 0;
            s.U.col(j).cwiseAbs().maxCoeff(&imax);
            CHECK(std::abs(s.U(imax, j).imag()) < 1e-14);
            CHECK(s.U(imax, j).real() >= 0.0);
        }
    }
}

TEST_CASE("economy_svd: deterministic")
{
    auto rng = rng_for(12);
    const CMatrix M = randn(6, 5, rng);
    const Svd a = economy_svd(M);
    const Svd b = economy_svd(M);
    CHECK(a.U == b.U);
    CHECK(a.V == b.V);
    CHECK(a.sigma == b.sigma);
}

TEST_CASE("economy_svd: non-finite input is rejected")
{
    CMatrix M = CMatrix::Identity(3, 3);
    M(1, 2) = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(economy_svd(M), InputError);
    M(1, 2) = cplx(0.0, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(economy_svd(M), InputError);
    CHECK_THROWS_AS(economy_svd(CMatrix(0, 3)), InputError);
}

TEST_CASE("hermitian_top_eigvectors: diagonal")
{
    CMatrix A = CMatrix::Zero(3, 3);
    A.diagonal() << 3.0, 2.0, 1.0;
    const EigenPairs e = hermitian_top_eigvectors(A, 2);
    CHECK(e.values(0) == doctest::Approx(3.0));
    CHECK(e.values(1) == doctest::Approx(2.0));
    CHECK(largest_principal_angle(e.vectors, CMatrix::Identity(3, 2)) < 1e-12);
    // Phase convention makes the standard basis come out exactly.
    CHECK((e.vectors - CMatrix::Identity(3, 2)).norm() < 1e-12);
}

TEST_CASE("hermitian_top_eigvectors: degenerate spectrum")
{
    const CMatrix A = CMatrix::Identity(3, 3);
    const EigenPairs e = hermitian_top_eigvectors(A, 1);
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.vectors.col(0).norm() == doctest::Approx(1.0));
    CHECK((A * e.vectors - e.vectors * e.values(0)).norm() < 1e-8 * (A.norm() + 1.0));
}

TEST_CASE("hermitian_top_eigvectors: Gramian matches squared singular values")
{
    auto rng = rng_for(13);
    const CMatrix B = randn(5, 3, rng);
    const CMatrix A = B.adjoint() * B;
    const EigenPairs e = hermitian_top_eigvectors(A, 3);
    const Svd s = economy_svd(B);
    for (Index i = 0; i < 3; ++i)
    {
        CHECK(std::abs(e.values(i) - s.sigma(i) * s.sigma(i)) < 1e-9);
        CHECK((A * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() < 1e-8 * (A.norm() + 1.0));
    }
    CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("hermitian_top_eigvectors: agrees with SVD subspace of a wide residual")
{
    auto rng = rng_for(14);
    for (int trial = 0; trial < 20; ++trial)
    {
        const CMatrix Z = randn(16, 45, rng);
        const EigenPairs e = hermitian_top_eigvectors(Z.adjoint() * Z, 2);
        const Svd s = economy_svd(Z);
        CHECK(largest_principal_angle(e.vectors, s.V.leftCols(2)) < 1e-8);
    }
}

TEST_CASE("hermitian_top_eigvectors: input errors")
{
    auto rng = rng_for(15);
    const CMatrix X = randn(4, 4, rng);
    CHECK_THROWS_AS(hermitian_top_eigvectors(X, 2), InputError);
    const CMatrix H = X.adjoint() * X;
    CHECK_THROWS_AS(hermitian_top_eigvectors(H, 5), InputError);
    CHECK_THROWS_AS(hermitian_top_eigvectors(H, 0), InputError);
    CHECK_THROWS_AS(hermitian_top_eigvectors(randn(3, 4, rng), 1), InputError);
    // Small asymmetry within tolerance is symmetrized away.
    CMatrix Hn = H;
    Hn(0, 1) += 1e-12;
    CHECK_NOTHROW(hermitian_top_eigvectors(Hn, 2));
}

TEST_CASE("pseudo_inverse: identity, zero, full column rank")
{
    CHECK((pseudo_inverse(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm() < 1e-14);

    const CMatrix Z = pseudo_inverse(CMatrix::Zero(4, 2));
    CHECK(Z.rows() == 2);
    CHECK(Z.cols() == 4);
    CHECK(Z.norm() == 0.0);

    auto rng = rng_for(16);
    const CMatrix M = randn(6, 3, rng);
    const CMatrix P = pseudo_inverse(M);
    CHECK((P * M - CMatrix::Identity(3, 3)).norm() < 1e-9);
    const CMatrix normal = (M.adjoint() * M).inverse() * M.adjoint();
    CHECK(testing::rel_err(P, normal) < 1e-8);
}

TEST_CASE("pseudo_inverse: Moore-Penrose identities, rank deficient")
{
    auto rng = rng_for(17);
    for (int trial = 0; trial < 10; ++trial)
    {
        // rank 2, 5 x 4
        const CMatrix M = randn(5, 2, rng) * randn(2, 4, rng);
        const CMatrix P = pseudo_inverse(M);
        CHECK((M * P * M - M).norm() < 1e-8);
        CHECK((P * M * P - P).norm() < 1e-8);
        CHECK(((M * P).adjoint() - M * P).norm() < 1e-8);
        CHECK(((P * M).adjoint() - P * M).norm() < 1e-8);
        CHECK(numerical_rank(economy_svd(M).sigma) == 2);
    }
    CHECK_THROWS_AS(pseudo_inverse(CMatrix::Identity(2, 2), 0.0), InputError);
}

TEST_CASE("hermitian_solve: solves and flags singular Gramians")
{
    auto rng = rng_for(18);
    const CMatrix A = randn(8, 3, rng);
    const CMatrix G = A.adjoint() * A;
    const CMatrix B = randn(3, 2, rng);
    CHECK(testing::rel_err(G * hermitian_solve(G, B), B) < 1e-10);

    CMatrix S = CMatrix::Zero(3, 3);
    S.diagonal() << 1.0, 1.0, 0.0;
    CHECK_THROWS_AS(hermitian_solve(S, B), DegeneracyError);
    CHECK_THROWS_AS(hermitian_solve(G, randn(4, 1, rng)), InputError);
}

TEST_CASE("principal_angles: known geometry")
{
    CMatrix a = CMatrix::Zero(3, 1);
    a(0, 0) = 1.0;
    CMatrix b = CMatrix::Zero(3, 1);
    b(0, 0) = std::cos(0.3);
    b(1, 0) = std::sin(0.3);
    CHECK(largest_principal_angle(a, b) == doctest::Approx(0.3).epsilon(1e-12));

    // Invariant under invertible recombination of columns.
    auto rng = rng_for(19);
    const CMatrix X = randn(10, 3, rng);
    const CMatrix Y = X * randn(3, 3, rng);
    CHECK(largest_principal_angle(X, Y) < 1e-10);

    CMatrix e1 = CMatrix::Zero(4, 1), e2 = CMatrix::Zero(4, 1);
    e1(0, 0) = 1.0;
    e2(1, 0) = cplx(0.0, 1.0);
    CHECK(largest_principal_angle(e1, e2) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("vstack")
{
    auto rng = rng_for(20);
    const CMatrix a = randn(2, 3, rng), b = randn(4, 3, rng);
    const CMatrix s = vstack({a, b});
    CHECK(s.rows() == 6);
    CHECK(s.topRows(2) == a);
    CHECK(s.bottomRows(4) == b);
    CHECK_THROWS_AS(vstack({a, randn(2, 2, rng)}), InputError);
}
