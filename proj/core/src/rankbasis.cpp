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

#include "pssml/rankbasis.hpp"

#include <cmath>

#include <Eigen/QR>

#include "pssml/hermitian_eig.hpp"

namespace pssml {
namespace {

void check_rank(int P, int max_rank, std::string_view what) {
  if (P < 1 || P > max_rank) {
    throw DomainError(std::string(what) + ": rank P=" + std::to_string(P) + " outside [1, " +
                      std::to_string(max_rank) + "]");
  }
}

ExpansionBasis top_eigenvectors(BasisKind kind, const CMatrix& hermitian, int P) {
  const EigenDecomposition eig = hermitian_eig(hermitian);
  return ExpansionBasis::from_columns(kind, eig.vectors.leftCols(P));
}

}  // namespace

std::string_view to_string(BasisKind kind) noexcept {
  switch (kind) {
    case BasisKind::Mmse: return "mmse";
    case BasisKind::Ammse: return "ammse";
    case BasisKind::Prr: return "prr";
    case BasisKind::Pcrr: return "pcrr";
  }
  return "?";
}

BasisKind parse_basis_kind(std::string_view text) {
  if (text == "mmse") return BasisKind::Mmse;
  if (text == "ammse") return BasisKind::Ammse;
  if (text == "prr") return BasisKind::Prr;
  if (text == "pcrr") return BasisKind::Pcrr;
  throw DomainError("unknown basis kind '" + std::string(text) + "'");
}

ExpansionBasis ExpansionBasis::from_columns(BasisKind kind, CMatrix columns,
                                            std::vector<int> partition) {
  if (columns.rows() != kPssLength) {
    throw DomainError("expansion basis must have 63 rows (got " + std::to_string(columns.rows()) + ")");
  }
  check_rank(static_cast<int>(columns.cols()), kPssLength, "expansion basis");
  if (!partition.empty()) {
    int total = 0;
    for (int k : partition) {
      if (k < 1) throw DomainError("subband sizes must be positive");
      total += k;
    }
    if (total != kPssLength || static_cast<Eigen::Index>(partition.size()) != columns.cols()) {
      throw DomainError("subband partition must have P entries summing to 63");
    }
  }

  const CMatrix gram = columns.adjoint() * columns;
  const RVector spectrum = hermitian_eig(gram).values;
  const double lmax = spectrum(0);
  const double lmin = spectrum(spectrum.size() - 1);
  if (!(lmin > 0.0) || lmax / lmin > kMaxGramCondition) {
    throw NumericError("B^H B is numerically singular (condition estimate " +
                       std::to_string(lmin > 0.0 ? lmax / lmin : INFINITY) + ")");
  }
  const Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericError("Cholesky factorization of B^H B failed");
  // B^H B = L L^H  =>  (B^H B)^{-1} = L^{-H} L^{-1}, so C = L^{-H} and C^H B^H = L^{-1} B^H.
  CMatrix combiner = llt.matrixL().solve(columns.adjoint());
  return ExpansionBasis(kind, std::move(columns), std::move(combiner), std::move(partition));
}

ExpansionBasis mmse_basis(const CirCovariance& cov, const FourierMatrix& F, int P) {
  check_rank(P, kPssLength - 1, "mmse_basis");
  if (cov.C_eq.rows() != F.F.cols() || cov.C_eq.cols() != F.F.cols()) {
    throw DomainError("covariance size does not match the Fourier matrix");
  }
  const CMatrix r = F.F * cov.C_eq * F.F.adjoint();
  return top_eigenvectors(BasisKind::Mmse, r, P);
}

ExpansionBasis ammse_basis(int P, const FourierMatrix& F) {
  check_rank(P, kPssLength - 1, "ammse_basis");
  const CMatrix r = F.F * F.F.adjoint();
  return top_eigenvectors(BasisKind::Ammse, r, P);
}

ExpansionBasis ammse_basis(int P, int cir_length, int dft_size) {
  return ammse_basis(P, make_fourier_matrix(cir_length, dft_size));
}

ExpansionBasis prr_basis(int P) {
  check_rank(P, kMaxPrrRank, "prr_basis");
  CMatrix b(kPssLength, P);
  for (int n = -kPssHalfWidth; n <= kPssHalfWidth; ++n) {
    const double x = static_cast<double>(n) / kPssHalfWidth;
    double power = 1.0;
    for (int p = 0; p < P; ++p) {
      b(pss_slot(n), p) = power;
      power *= x;
    }
  }
  return ExpansionBasis::from_columns(BasisKind::Prr, std::move(b));
}

std::vector<int> pcrr_partition(int P) {
  check_rank(P, kPssLength, "pcrr_partition");
  const int m = kPssLength / P;
  const int r = kPssLength % P;
  std::vector<int> sizes(static_cast<std::size_t>(P), m);
  for (int p = 0; p < r; ++p) sizes[static_cast<std::size_t>(p)] = m + 1;
  return sizes;
}

ExpansionBasis pcrr_basis(int P) {
  std::vector<int> sizes = pcrr_partition(P);
  CMatrix b = CMatrix::Zero(kPssLength, P);
  int row = 0;
  for (int p = 0; p < P; ++p) {
    const int k = sizes[static_cast<std::size_t>(p)];
    b.block(row, p, k, 1).setOnes();
    row += k;
  }
  return ExpansionBasis::from_columns(BasisKind::Pcrr, std::move(b), std::move(sizes));
}

Projector projector_of(const ExpansionBasis& basis) {
  // orthonormalize the span; W^H W squares the condition number of B
  const Eigen::HouseholderQR<CMatrix> qr(basis.matrix());
  const CMatrix q = qr.householderQ() * CMatrix::Identity(kPssLength, basis.rank());
  return Projector{q * q.adjoint()};
}

double mse_of_basis(const ExpansionBasis& basis, const CirCovariance& cov, const FourierMatrix& F) {
  if (cov.C_eq.rows() != F.F.cols() || cov.C_eq.cols() != F.F.cols()) {
    throw DomainError("covariance size does not match the Fourier matrix");
  }
  const CMatrix r = F.F * cov.C_eq * F.F.adjoint();
  // tr{(I - G) R} = tr{R} - tr{W R W^H}
  const CMatrix wr = basis.combiner() * r;
  const cplx captured = (wr * basis.combiner().adjoint()).trace();
  return r.trace().real() - captured.real();
}

}  // namespace pssml
