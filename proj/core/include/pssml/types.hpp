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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pssml {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// SCH geometry. Dense storage puts subcarrier n at slot n + offset.
inline constexpr int kPssHalfWidth = 31;                     // PSS bins n in [-31, 31]
inline constexpr int kPssLength = 2 * kPssHalfWidth + 1;     // 63
inline constexpr int kSchHalfWidth = 36;                     // SCH bins n in [-36, 36]
inline constexpr int kSchLength = 2 * kSchHalfWidth + 1;     // 73
inline constexpr int kMaxAbsIfo = kSchHalfWidth - kPssHalfWidth;  // 5

inline constexpr int pss_slot(int n) noexcept { return n + kPssHalfWidth; }
inline constexpr int sch_slot(int n) noexcept { return n + kSchHalfWidth; }

// Invalid argument or parameter outside the model's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Numerical failure: singular Gram matrix, eigensolver non-convergence.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pssml
