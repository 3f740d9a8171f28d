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
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pssml/channel.hpp"
#include "pssml/types.hpp"

namespace pssml {

enum class BasisKind { Mmse, Ammse, Prr, Pcrr };

std::string_view to_string(BasisKind kind) noexcept;
/// Accepts "mmse", "ammse", "prr", "pcrr".
BasisKind parse_basis_kind(std::string_view text);

inline constexpr int kDefaultAmmseCirLength = 120;  // AMMSE design value of L_eq
inline constexpr int kMaxPrrRank = 12;               // cond(B^H B) ~ 5e7 at P = 12
inline constexpr double kMaxGramCondition = 1e12;

/// A 63 x P basis for the reduced-rank CFR model H_eq ~ B xi, with the fast
/// metric combiner W = C^H B^H (C C^H = (B^H B)^{-1}) precomputed, so that
/// Z^H G Z = ||W Z||^2. Immutable once built.
class ExpansionBasis {
 public:
  /// Throws DomainError on a wrong shape or P outside [1, 63]; NumericError if
  /// B^H B is singular to working precision (condition estimate > 1e12).
  static ExpansionBasis from_columns(BasisKind kind, CMatrix columns,
                                     std::vector<int> partition = {});

  BasisKind kind() const noexcept { return kind_; }
  int rank() const noexcept { return static_cast<int>(b_.cols()); }
  const CMatrix& matrix() const noexcept { return b_; }
  /// P x 63 matrix C^H B^H.
  const CMatrix& combiner() const noexcept { return combiner_; }
  /// Subband sizes K_p (PCRR only; empty otherwise).
  const std::vector<int>& partition() const noexcept { return partition_; }

 private:
  ExpansionBasis(BasisKind kind, CMatrix b, CMatrix combiner, std::vector<int> partition)
      : kind_(kind), b_(std::move(b)), combiner_(std::move(combiner)),
        partition_(std::move(partition)) {}

  BasisKind kind_;
  CMatrix b_;
  CMatrix combiner_;
  std::vector<int> partition_;
};

/// G = B (B^H B)^{-1} B^H, formed from a QR factorization of B.
struct Projector {
  CMatrix G;
};

/// Top-P eigenvectors of F C_eq F^H (orthonormal columns, eigenvalues descending).
ExpansionBasis mmse_basis(const CirCovariance& cov, const FourierMatrix& F, int P);

/// Top-P eigenvectors of F F^H, i.e. the MMSE design with C_eq replaced by I.
ExpansionBasis ammse_basis(int P, const FourierMatrix& F);
ExpansionBasis ammse_basis(int P, int cir_length = kDefaultAmmseCirLength,
                           int dft_size = kDefaultDftSize);

/// Polynomial basis of degree P - 1 on n in [-31, 31]. Columns are stored as
/// (n/31)^{p-1}: same span and projector as plain monomials, far better
/// conditioned. 1 <= P <= kMaxPrrRank.
ExpansionBasis prr_basis(int P);

/// Sizes of the P adjacent subbands: with 63 = M P + R, the first R subbands
/// hold M + 1 bins and the rest M.
std::vector<int> pcrr_partition(int P);

/// Block-indicator (piecewise-constant) basis, 1 <= P <= 63.
ExpansionBasis pcrr_basis(int P);

Projector projector_of(const ExpansionBasis& basis);

/// tr{(I - G) F C_eq F^H}.
double mse_of_basis(const ExpansionBasis& basis, const CirCovariance& cov, const FourierMatrix& F);

}  // namespace pssml
