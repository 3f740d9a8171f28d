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

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pssml/rankbasis.hpp"
#include "pssml/types.hpp"
#include "pssml/zc.hpp"

namespace pssml {

/// Joint parameter (q, u, nu): PSS symbol position (1-based), ZC root, IFO.
struct Hypothesis {
  int q = 1;
  ZcRoot u = ZcRoot::from_value(25);
  int nu = 0;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

using SchRow = std::array<cplx, kSchLength>;
using SchRowView = std::span<const cplx, kSchLength>;
using DespreadVector = std::array<cplx, kPssLength>;

/// N_Q observed SCH vectors X_1..X_{N_Q}; row k holds X_k(n) at slot n + 36.
class SchWindow {
 public:
  explicit SchWindow(std::vector<SchRow> rows);
  static SchWindow zeros(int n_q);

  int n_q() const noexcept { return static_cast<int>(rows_.size()); }
  /// 1-based symbol index.
  const SchRow& row(int k) const;
  SchRow& row(int k);
  cplx at(int k, int n) const { return row(k)[static_cast<std::size_t>(sch_slot(n))]; }
  const std::vector<SchRow>& rows() const noexcept { return rows_; }

  friend bool operator==(const SchWindow&, const SchWindow&) = default;

 private:
  std::vector<SchRow> rows_;
};

enum class DetectorKind { Mmse, Ammse, Prr, Pcrr, Cfdc, Dd };

std::string_view to_string(DetectorKind kind) noexcept;
DetectorKind parse_detector_kind(std::string_view text);
bool needs_basis(DetectorKind kind) noexcept;

/// {-3, ..., 3}
std::vector<int> default_ifo_set();

struct DetectorConfig {
  DetectorKind kind = DetectorKind::Ammse;
  std::shared_ptr<const ExpansionBasis> basis;  // present iff kind is a reduced-rank kind
  std::vector<int> ifo_set = default_ifo_set();

  /// Throws DomainError on a missing/unexpected basis, an empty IFO set, or
  /// an IFO outside [-5, 5].
  void validate() const;
};

struct MetricEntry {
  Hypothesis hypothesis;
  double metric;
};

struct DetectionResult {
  Hypothesis estimate;
  double metric_value = 0.0;
  std::vector<MetricEntry> metric_table;  // filled only on request
};

/// Z(m) = X_q(m + nu) conj(a_u(m)), m in [-31, 31]. |nu| <= 5.
DespreadVector despread(SchRowView x_q, ZcRoot u, int nu);

/// Z^H G Z / ||X_q||^2, evaluated as ||C^H B^H Z||^2 / ||X_q||^2.
double metric_reduced_rank(SchRowView x_q, const ExpansionBasis& basis, ZcRoot u, int nu);
/// Z^H G Z / ||X_q||^2 with G formed explicitly; reference route for the fast form.
double metric_projector_form(SchRowView x_q, const Projector& G, ZcRoot u, int nu);
/// Partial-correlation form: sum_p |sum_{n in band p} Z(n)|^2 / K_p, over ||X_q||^2.
double metric_pcrr(SchRowView x_q, std::span<const int> partition, ZcRoot u, int nu);
/// |sum_n Z(n)|^2 / (63 ||X_q||^2).
double metric_cfdc(SchRowView x_q, ZcRoot u, int nu);
/// Differential detector: Re{sum_{n=-30}^{31} Z(n) conj(Z(n-1))} / ||X_q||^2.
double metric_dd(SchRowView x_q, ZcRoot u, int nu);

/// Metric of the configured kind for one hypothesis on one row.
double metric_for(const DetectorConfig& config, SchRowView x_q, ZcRoot u, int nu);

/// Exhaustive search over q, u and the IFO set. Ties go to the smallest q,
/// then root order 25 < 29 < 34, then the smallest nu.
DetectionResult detect(const SchWindow& window, const DetectorConfig& config,
                       bool keep_table = false);

/// xi = (B^H B)^{-1} B^H Z.
CVector estimate_expansion_coeffs(SchRowView x_q, const ExpansionBasis& basis, ZcRoot u, int nu);

/// sum_{n=-36}^{36} |X_q(n) - (B xi)(n - nu) a_u(n - nu)|^2 at the fitted xi.
double fit_residual(SchRowView x_q, const ExpansionBasis& basis, ZcRoot u, int nu);

struct NoiseVarianceEstimates {
  std::vector<std::pair<int, double>> data_vars;  // (k, ||X_k||^2 / 73) for k != q
  double noise_var = 0.0;                         // residual / 73
};

NoiseVarianceEstimates estimate_noise_vars(const SchWindow& window, int q_hat, double residual);

double row_energy(SchRowView x) noexcept;

}  // namespace pssml
