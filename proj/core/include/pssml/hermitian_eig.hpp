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

#include "pssml/types.hpp"

namespace pssml {

struct EigenDecomposition {
  RVector values;    // descending
  CMatrix vectors;   // column i pairs with values(i), orthonormal
};

struct JacobiOptions {
  int max_sweeps = 100;
  double tolerance = 1e-14;  // off-diagonal Frobenius norm relative to ||A||_F
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix. The input is
/// symmetrized as (A + A^H)/2 first. Eigenvalue ties keep their diagonal order
/// (stable sort); eigenvector phases are arbitrary.
/// Throws NumericError if the off-diagonal mass has not converged after
/// max_sweeps sweeps.
EigenDecomposition hermitian_eig(const CMatrix& A, const JacobiOptions& opts = {});

}  // namespace pssml
