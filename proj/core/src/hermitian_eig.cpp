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

#include "pssml/hermitian_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pssml {
namespace {

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition hermitian_eig(const CMatrix& A, const JacobiOptions& opts) {
  if (A.rows() != A.cols()) throw DomainError("hermitian_eig: matrix must be square");
  const Eigen::Index n = A.rows();
  CMatrix a = (A + A.adjoint()) / 2.0;
  CMatrix v = CMatrix::Identity(n, n);

  const double scale = a.norm();
  if (scale > 0.0) {
    const double target = opts.tolerance * scale;
    // pivots below this are rounding noise; rotating them cannot reduce the off-diagonal mass
    const double negligible = 1e-17 * scale;
    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
      if (sweep++ >= opts.max_sweeps) {
        throw NumericError("hermitian_eig: Jacobi iteration did not converge");
      }
      int rotations = 0;
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const cplx apq = a(p, q);
          const double g = std::abs(apq);
          if (g <= negligible) continue;
          ++rotations;
          // J = [[c, s e], [-s conj(e), c]] with e the phase of a_pq reduces
          // the 2x2 block to the real symmetric Jacobi problem.
          const cplx e = apq / g;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          const double tau = (aqq - app) / (2.0 * g);
          const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          const cplx se = s * e;
          const cplx sec = s * std::conj(e);

          // A <- A J
          for (Eigen::Index k = 0; k < n; ++k) {
            const cplx akp = a(k, p);
            const cplx akq = a(k, q);
            a(k, p) = c * akp - sec * akq;
            a(k, q) = se * akp + c * akq;
          }
          // A <- J^H A
          for (Eigen::Index k = 0; k < n; ++k) {
            const cplx apk = a(p, k);
            const cplx aqk = a(q, k);
            a(p, k) = c * apk - se * aqk;
            a(q, k) = sec * apk + c * aqk;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = app - t * g;
          a(q, q) = aqq + t * g;
          // V <- V J
          for (Eigen::Index k = 0; k < n; ++k) {
            const cplx vkp = v(k, p);
            const cplx vkq = v(k, q);
            v(k, p) = c * vkp - sec * vkq;
            v(k, q) = se * vkp + c * vkq;
          }
        }
      }
      if (rotations == 0) break;
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace pssml
