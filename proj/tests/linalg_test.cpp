// Copyright 2026 The secswipt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "secswipt/errors.hpp"
#include "secswipt/linalg.hpp"
#include "test_util.hpp"

namespace secswipt::linalg {
namespace {

using testing::Gen;

TEST(HermitianEvd, IdentityHasUnitEigenvaluesAndOrthonormalVectors) {
  const HermitianEvd evd = hermitian_evd(CMatrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(evd.eigenvalues(0), 1.0);
  EXPECT_DOUBLE_EQ(evd.eigenvalues(1), 1.0);
  const CMatrix gram = evd.eigenvectors.adjoint() * evd.eigenvectors;
  EXPECT_LE((gram - CMatrix::Identity(2, 2)).norm(), 1e-12);
  // Repeated calls agree bit for bit.
  const HermitianEvd again = hermitian_evd(CMatrix::Identity(2, 2));
  EXPECT_EQ(evd.eigenvectors, again.eigenvectors);
}

TEST(HermitianEvd, DiagonalSortsDescending) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const HermitianEvd evd = hermitian_evd(a);
  EXPECT_DOUBLE_EQ(evd.eigenvalues(0), 3.0);
  EXPECT_DOUBLE_EQ(evd.eigenvalues(1), 1.0);
  EXPECT_NEAR(std::abs(evd.eigenvectors(0, 0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(evd.eigenvectors(1, 1) - 1.0), 0.0, 1e-14);
}

TEST(HermitianEvd, RejectsNonHermitian) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(hermitian_evd(a), ValidationError);
}

TEST(HermitianEvd, RandomReconstructionAndPhase) {
  Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(1, 8);
    const CMatrix a = gen.hermitian(n) * gen.uniform(1e-6, 1e6);
    const HermitianEvd evd = hermitian_evd(a);
    const CMatrix& v = evd.eigenvectors;
    const CMatrix rebuilt = v * evd.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
    EXPECT_LE((a - rebuilt).norm(), 1e-10 * a.norm());
    EXPECT_LE((v.adjoint() * v - CMatrix::Identity(n, n)).norm(), 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_GE(evd.eigenvalues(i - 1), evd.eigenvalues(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::Index arg = 0;
      v.col(j).cwiseAbs().maxCoeff(&arg);
      EXPECT_EQ(v(arg, j).imag(), 0.0);
      EXPECT_GT(v(arg, j).real(), 0.0);
    }
  }
}

TEST(Nullspace, RankOneProjectorLeavesSecondAxis) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  const NullspaceBasis nb = nullspace(a);
  ASSERT_EQ(nb.nullity(), 1);
  EXPECT_NEAR(std::abs(nb.basis(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(nb.basis(0, 0)), 0.0, 1e-14);
}

TEST(Nullspace, NonsingularGivesEmptyBasis) {
  Gen gen(3);
  const CMatrix a = gen.matrix(4, 4);
  EXPECT_TRUE(nullspace(a).empty());
  EXPECT_EQ((orth_complement_projector(nullspace(a)) - CMatrix::Identity(4, 4)).norm(), 0.0);
}

TEST(Nullspace, OuterProductHasThreeDimensionalComplement) {
  Gen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const CVector g = gen.vector(4);
    const CMatrix a = g * g.adjoint();
    const NullspaceBasis nb = nullspace(a);
    ASSERT_EQ(nb.nullity(), 3);
    EXPECT_LE((g.adjoint() * nb.basis).norm(), 1e-12 * g.norm());
    EXPECT_LE((a * nb.basis).norm(), nb.tolerance * a.norm() * std::sqrt(3.0));
    EXPECT_LE((nb.basis.adjoint() * nb.basis - CMatrix::Identity(3, 3)).norm(), 1e-10);
  }
}

TEST(Nullspace, RejectsBadTolerance) {
  EXPECT_THROW(nullspace(CMatrix::Identity(2, 2), 0.0), ValidationError);
  EXPECT_THROW(nullspace(CMatrix::Identity(2, 2), 1.0), ValidationError);
}

TEST(Projector, EmptyBasisIsIdentity) {
  NullspaceBasis nb;
  nb.basis = CMatrix(3, 0);
  EXPECT_EQ(orth_complement_projector(nb), CMatrix::Identity(3, 3));
}

TEST(Projector, FirstAxisBasis) {
  NullspaceBasis nb;
  nb.basis = CMatrix::Zero(2, 1);
  nb.basis(0, 0) = 1.0;
  CMatrix want = CMatrix::Zero(2, 2);
  want(1, 1) = 1.0;
  EXPECT_EQ(orth_complement_projector(nb), want);
}

TEST(Projector, RandomBasisIdentities) {
  Gen gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(2, 8);
    const int k = gen.integer(1, n - 1);
    NullspaceBasis nb;
    nb.basis = Eigen::HouseholderQR<CMatrix>(gen.matrix(n, k)).householderQ() * CMatrix::Identity(n, k);
    const CMatrix p = orth_complement_projector(nb);
    EXPECT_LE((p - p.adjoint()).norm(), 1e-12);
    EXPECT_LE((p * p - p).norm(), 1e-12);
    EXPECT_LE((p * nb.basis).norm(), 1e-12);
  }
}

TEST(SvdRightNull, SingleRowPicksFirstAxis) {
  CMatrix g = CMatrix::Zero(1, 2);
  g(0, 1) = 1.0;
  const NullspaceBasis nb = svd_right_null(g);
  ASSERT_EQ(nb.nullity(), 1);
  EXPECT_NEAR(std::abs(nb.basis(0, 0)), 1.0, 1e-14);
}

TEST(SvdRightNull, RepeatedRowsMatchIndependentRank) {
  Gen gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix g(2, 4);
    g.row(0) = gen.vector(4).transpose();
    g.row(1) = g.row(0);
    // Rank from a pivoted LU, a different factorization from the SVD.
    Eigen::FullPivLU<CMatrix> lu(g);
    lu.setThreshold(1e-10);
    const auto rank = lu.rank();
    ASSERT_EQ(rank, 1);
    const NullspaceBasis nb = svd_right_null(g);
    EXPECT_EQ(nb.nullity(), 4 - rank);
    EXPECT_LE((g * nb.basis).norm(), 1e-10 * g.norm());
  }
}

TEST(SvdRightNull, FullRankLeavesOneDirection) {
  Gen gen(29);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix g = gen.matrix(3, 4);
    const NullspaceBasis nb = svd_right_null(g);
    ASSERT_EQ(nb.nullity(), 1);
    EXPECT_LE((g * nb.basis).norm(), 1e-10 * g.norm());
    EXPECT_NEAR(nb.basis.col(0).norm(), 1.0, 1e-12);
  }
}

TEST(SvdRightNull, TallOrSquareIsInapplicable) {
  EXPECT_THROW(svd_right_null(CMatrix::Identity(2, 2)), SchemeInapplicable);
  EXPECT_THROW(svd_right_null(CMatrix::Ones(3, 2)), SchemeInapplicable);
}

TEST(TraceProduct, MatchesDenseTrace) {
  Gen gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix a = gen.hermitian(5);
    const CMatrix b = gen.hermitian(5);
    EXPECT_NEAR(trace_product(a, b), (a * b).trace().real(), 1e-12 * a.norm() * b.norm());
  }
}

}  // namespace
}  // namespace secswipt::linalg
