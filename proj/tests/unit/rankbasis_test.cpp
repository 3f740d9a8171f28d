// SPDX-License-Identifier: Apache-2.0
//
// pssml - maximum-likelihood PSS detection and integer frequency offset recovery
// Copyright (C) 2026 The pssml authors
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

#include <gtest/gtest.h>

#include <numeric>

#include "pssml/rankbasis.hpp"
#include "test_util.hpp"

namespace pssml {
namespace {

CirCovariance etu_cov() {
  return build_cir_covariance(etu_profile(), PulseShape{}, kDefaultSampleRate, ThetaPrior::uniform(40), 40);
}

double span_distance(const CMatrix& a, const CMatrix& b) {
  return (projector_of(ExpansionBasis::from_columns(BasisKind::Ammse, a)).G -
          projector_of(ExpansionBasis::from_columns(BasisKind::Ammse, b)).G)
      .norm();
}

TEST(RankBasis, MmseSingleTapGivesAllOnes) {
  const CirCovariance c{[] {
    CMatrix m = CMatrix::Zero(10, 10);
    m(0, 0) = 1.0;
    return m;
  }()};
  const ExpansionBasis b = mmse_basis(c, make_fourier_matrix(10), 1);
  const CVector ones = CVector::Constant(63, 1.0 / std::sqrt(63.0));
  EXPECT_NEAR(std::abs(b.matrix().col(0).dot(ones)), 1.0, 1e-12);
}

TEST(RankBasis, MmseWithIdentityIsAmmse) {
  const FourierMatrix F = make_fourier_matrix(120);
  const ExpansionBasis m = mmse_basis(identity_covariance(120), F, 5);
  const ExpansionBasis a = ammse_basis(5, F);
  EXPECT_LT(span_distance(m.matrix(), a.matrix()), 1e-9);
}

TEST(RankBasis, EigenBasesOrthonormal) {
  const FourierMatrix F = make_fourier_matrix(200);
  const CirCovariance c = etu_cov();
  for (int p : {1, 5, 12, 30}) {
    EXPECT_TRUE((mmse_basis(c, F, p).matrix().adjoint() * mmse_basis(c, F, p).matrix()).isIdentity(1e-10));
    const ExpansionBasis a = ammse_basis(p);
    EXPECT_TRUE((a.matrix().adjoint() * a.matrix()).isIdentity(1e-10));
  }
}

TEST(RankBasis, AmmseSingleTapDesign) {
  const ExpansionBasis b = ammse_basis(1, 1);
  EXPECT_NEAR(std::abs(b.matrix().col(0).sum()), std::sqrt(63.0), 1e-12);
}

TEST(RankBasis, AmmseBetweenMmseAndHeuristics) {
  const FourierMatrix F = make_fourier_matrix(200);
  const CirCovariance c = etu_cov();
  const double mmse = mse_of_basis(mmse_basis(c, F, 5), c, F);
  const double ammse = mse_of_basis(ammse_basis(5), c, F);
  EXPECT_GT(ammse, mmse);
  EXPECT_LT(ammse, mse_of_basis(prr_basis(5), c, F));
  EXPECT_LT(ammse, mse_of_basis(pcrr_basis(5), c, F));
}

TEST(RankBasis, PrrRankOneMatchesPcrrRankOne) {
  EXPECT_TRUE(projector_of(prr_basis(1)).G.isApprox(projector_of(pcrr_basis(1)).G, 1e-12));
}

TEST(RankBasis, PrrReproducesPolynomials) {
  const Projector g2 = projector_of(prr_basis(2));
  CVector affine(63);
  for (int n = -31; n <= 31; ++n) affine(pss_slot(n)) = cplx(2.0 - 0.5 * n, 0.25 * n);
  EXPECT_LT((g2.G * affine - affine).norm(), 1e-10 * affine.norm());

  const Projector g3 = projector_of(prr_basis(3));
  CVector sq(63), cube(63);
  for (int n = -31; n <= 31; ++n) {
    sq(pss_slot(n)) = double(n) * n;
    cube(pss_slot(n)) = double(n) * n * n;
  }
  EXPECT_LT((g3.G * sq - sq).norm(), 1e-10 * sq.norm());
  // least-squares oracle: |n^3 - G n^3|^2 = 1401820992
  EXPECT_NEAR((g3.G * cube - cube).squaredNorm(), 1401820992.0, 1e-3);
}

TEST(RankBasis, PrrCap) {
  EXPECT_NO_THROW(prr_basis(kMaxPrrRank));
  EXPECT_THROW(prr_basis(kMaxPrrRank + 1), DomainError);
  EXPECT_THROW(prr_basis(0), DomainError);
}

TEST(RankBasis, PcrrPartitions) {
  EXPECT_EQ(pcrr_partition(7), std::vector<int>(7, 9));
  EXPECT_EQ(pcrr_partition(5), (std::vector<int>{13, 13, 13, 12, 12}));
  EXPECT_EQ(pcrr_partition(1), std::vector<int>{63});
  for (int p = 1; p <= 63; ++p) {
    const auto part = pcrr_partition(p);
    EXPECT_EQ(std::accumulate(part.begin(), part.end(), 0), 63);
    EXPECT_EQ(static_cast<int>(part.size()), p);
  }
}

TEST(RankBasis, ProjectorProperties) {
  std::mt19937_64 g(9);
  for (int p = 1; p <= 12; ++p) {
    const CMatrix cols = test::random_cmatrix(g, 63, p);
    const ExpansionBasis b = ExpansionBasis::from_columns(BasisKind::Ammse, cols);
    const CMatrix G = projector_of(b).G;
    EXPECT_TRUE((G * G).isApprox(G, 1e-9));
    EXPECT_TRUE(G.isApprox(G.adjoint(), 1e-12));
    const CMatrix T = test::random_cmatrix(g, p, p);
    const CMatrix G2 = projector_of(ExpansionBasis::from_columns(BasisKind::Ammse, cols * T)).G;
    EXPECT_LT((G - G2).norm(), 1e-9);
  }
}

TEST(RankBasis, OrthonormalProjectorIsBBh) {
  const ExpansionBasis b = ammse_basis(6);
  EXPECT_TRUE(projector_of(b).G.isApprox(b.matrix() * b.matrix().adjoint(), 1e-12));
}

TEST(RankBasis, FullRankProjectorIsIdentity) {
  EXPECT_TRUE(projector_of(pcrr_basis(63)).G.isIdentity(1e-10));
  std::mt19937_64 g(1);
  const ExpansionBasis full = ExpansionBasis::from_columns(BasisKind::Ammse, test::random_cmatrix(g, 63, 63));
  EXPECT_TRUE(projector_of(full).G.isIdentity(1e-9));
}

TEST(RankBasis, FullRankMseIsZero) {
  const FourierMatrix F = make_fourier_matrix(200);
  EXPECT_NEAR(mse_of_basis(pcrr_basis(63), etu_cov(), F), 0.0, 1e-9);
}

TEST(RankBasis, MmseBeatsRandomBases) {
  std::mt19937_64 g(33);
  const FourierMatrix F = make_fourier_matrix(200);
  const CirCovariance c = etu_cov();
  const int p = 5;
  const double best = mse_of_basis(mmse_basis(c, F, p), c, F);
  for (int t = 0; t < 100; ++t) {
    const ExpansionBasis r = ExpansionBasis::from_columns(BasisKind::Ammse, test::random_cmatrix(g, 63, p));
    EXPECT_LE(best, mse_of_basis(r, c, F) + 1e-12);
  }
}

TEST(RankBasis, MseNonIncreasingWhenNested) {
  const FourierMatrix F = make_fourier_matrix(200);
  const CirCovariance c = etu_cov();
  const ExpansionBasis big = ammse_basis(12);
  double prev = mse_of_basis(ExpansionBasis::from_columns(BasisKind::Ammse, big.matrix().leftCols(1)), c, F);
  for (int p = 2; p <= 12; ++p) {
    const double cur = mse_of_basis(ExpansionBasis::from_columns(BasisKind::Ammse, big.matrix().leftCols(p)), c, F);
    EXPECT_LE(cur, prev + 1e-12);
    prev = cur;
  }
}

TEST(RankBasis, RejectsBadShapes) {
  EXPECT_THROW(ExpansionBasis::from_columns(BasisKind::Ammse, CMatrix::Zero(62, 2)), DomainError);
  EXPECT_THROW(ExpansionBasis::from_columns(BasisKind::Ammse, CMatrix::Zero(63, 2)), NumericError);
  EXPECT_THROW(ammse_basis(63), DomainError);
  EXPECT_THROW(pcrr_basis(64), DomainError);
}

TEST(RankBasis, ParseKind) {
  EXPECT_EQ(parse_basis_kind("pcrr"), BasisKind::Pcrr);
  EXPECT_EQ(to_string(BasisKind::Mmse), "mmse");
  EXPECT_THROW(parse_basis_kind("dd"), DomainError);
}

}  // namespace
}  // namespace pssml
