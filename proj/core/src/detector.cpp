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

#include "pssml/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pssml {
namespace {

void check_ifo(int nu) {
  if (nu < -kMaxAbsIfo || nu > kMaxAbsIfo) {
    throw DomainError("IFO hypothesis " + std::to_string(nu) + " outside [-5, 5]");
  }
}

double checked_energy(SchRowView x) {
  const double e = row_energy(x);
  if (!(e > 0.0)) throw DomainError("all-zero SCH symbol");
  return e;
}

void despread_into(SchRowView x_q, const PssSequence& a, int nu, DespreadVector& z) noexcept {
  const std::size_t offset = static_cast<std::size_t>(kSchHalfWidth - kPssHalfWidth + nu);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = x_q[offset + i] * std::conj(a.samples[i]);
}

double cfdc_numerator(const DespreadVector& z) noexcept {
  cplx acc{0.0, 0.0};
  for (const cplx& v : z) acc += v;
  return std::norm(acc) / kPssLength;
}

double pcrr_numerator(const DespreadVector& z, std::span<const int> partition) noexcept {
  double acc = 0.0;
  std::size_t i = 0;
  for (int k : partition) {
    cplx band{0.0, 0.0};
    for (int j = 0; j < k; ++j) band += z[i++];
    acc += std::norm(band) / k;
  }
  return acc;
}

double dd_numerator(const DespreadVector& z) noexcept {
  double acc = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) acc += (z[i] * std::conj(z[i - 1])).real();
  return acc;
}

double combiner_numerator(const DespreadVector& z, const CMatrix& w) {
  const Eigen::Map<const CVector> zv(z.data(), kPssLength);
  return (w * zv).squaredNorm();
}

// Numerator of the configured metric; the caller divides by ||X_q||^2.
double numerator_for(const DetectorConfig& config, const DespreadVector& z) {
  switch (config.kind) {
    case DetectorKind::Cfdc: return cfdc_numerator(z);
    case DetectorKind::Dd: return dd_numerator(z);
    case DetectorKind::Pcrr: return pcrr_numerator(z, config.basis->partition());
    default: return combiner_numerator(z, config.basis->combiner());
  }
}

}  // namespace

SchWindow::SchWindow(std::vector<SchRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DomainError("SCH window needs at least one symbol");
}

SchWindow SchWindow::zeros(int n_q) {
  if (n_q < 1) throw DomainError("SCH window needs at least one symbol");
  return SchWindow(std::vector<SchRow>(static_cast<std::size_t>(n_q), SchRow{}));
}

const SchRow& SchWindow::row(int k) const {
  if (k < 1 || k > n_q()) throw DomainError("symbol index " + std::to_string(k) + " outside window");
  return rows_[static_cast<std::size_t>(k - 1)];
}

SchRow& SchWindow::row(int k) {
  if (k < 1 || k > n_q()) throw DomainError("symbol index " + std::to_string(k) + " outside window");
  return rows_[static_cast<std::size_t>(k - 1)];
}

std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::Mmse: return "mmse";
    case DetectorKind::Ammse: return "ammse";
    case DetectorKind::Prr: return "prr";
    case DetectorKind::Pcrr: return "pcrr";
    case DetectorKind::Cfdc: return "cfdc";
    case DetectorKind::Dd: return "dd";
  }
  return "?";
}

DetectorKind parse_detector_kind(std::string_view text) {
  for (auto k : {DetectorKind::Mmse, DetectorKind::Ammse, DetectorKind::Prr, DetectorKind::Pcrr,
                 DetectorKind::Cfdc, DetectorKind::Dd}) {
    if (text == to_string(k)) return k;
  }
  throw DomainError("unknown detector kind '" + std::string(text) + "'");
}

bool needs_basis(DetectorKind kind) noexcept {
  return kind != DetectorKind::Cfdc && kind != DetectorKind::Dd;
}

std::vector<int> default_ifo_set() { return {-3, -2, -1, 0, 1, 2, 3}; }

void DetectorConfig::validate() const {
  if (needs_basis(kind) && !basis) {
    throw DomainError("detector '" + std::string(to_string(kind)) + "' requires an expansion basis");
  }
  if (!needs_basis(kind) && basis) {
    throw DomainError("detector '" + std::string(to_string(kind)) + "' takes no expansion basis");
  }
  if (kind == DetectorKind::Pcrr && basis->partition().empty()) {
    throw DomainError("PCRR detector needs a basis with a subband partition");
  }
  if (ifo_set.empty()) throw DomainError("empty IFO search set");
  for (int nu : ifo_set) check_ifo(nu);
}

double row_energy(SchRowView x) noexcept {
  double e = 0.0;
  for (const cplx& v : x) e += std::norm(v);
  return e;
}

DespreadVector despread(SchRowView x_q, ZcRoot u, int nu) {
  check_ifo(nu);
  DespreadVector z;
  despread_into(x_q, pss_for(u), nu, z);
  return z;
}

double metric_reduced_rank(SchRowView x_q, const ExpansionBasis& basis, ZcRoot u, int nu) {
  const DespreadVector z = despread(x_q, u, nu);
  return combiner_numerator(z, basis.combiner()) / checked_energy(x_q);
}

double metric_projector_form(SchRowView x_q, const Projector& G, ZcRoot u, int nu) {
  const DespreadVector z = despread(x_q, u, nu);
  const Eigen::Map<const CVector> zv(z.data(), kPssLength);
  const cplx quad = zv.dot(G.G * zv);  // Z^H G Z
  return quad.real() / checked_energy(x_q);
}

double metric_pcrr(SchRowView x_q, std::span<const int> partition, ZcRoot u, int nu) {
  int total = 0;
  for (int k : partition) {
    if (k < 1) throw DomainError("subband sizes must be positive");
    total += k;
  }
  if (total != kPssLength) throw DomainError("PCRR partition must sum to 63");
  const DespreadVector z = despread(x_q, u, nu);
  return pcrr_numerator(z, partition) / checked_energy(x_q);
}

double metric_cfdc(SchRowView x_q, ZcRoot u, int nu) {
  return cfdc_numerator(despread(x_q, u, nu)) / checked_energy(x_q);
}

double metric_dd(SchRowView x_q, ZcRoot u, int nu) {
  return dd_numerator(despread(x_q, u, nu)) / checked_energy(x_q);
}

double metric_for(const DetectorConfig& config, SchRowView x_q, ZcRoot u, int nu) {
  return numerator_for(config, despread(x_q, u, nu)) / checked_energy(x_q);
}

DetectionResult detect(const SchWindow& window, const DetectorConfig& config, bool keep_table) {
  config.validate();
  std::vector<int> ifos = config.ifo_set;
  std::sort(ifos.begin(), ifos.end());
  ifos.erase(std::unique(ifos.begin(), ifos.end()), ifos.end());

  std::array<const PssSequence*, 3> seqs{};
  for (std::size_t i = 0; i < 3; ++i) seqs[i] = &pss_for(ZcRoot::from_value(kAllRoots[i]));

  DetectionResult result;
  if (keep_table) result.metric_table.reserve(static_cast<std::size_t>(window.n_q()) * 3 * ifos.size());
  bool have_best = false;
  DespreadVector z;
  // q, then root, then nu ascending; a strict '>' keeps the first maximum.
  for (int q = 1; q <= window.n_q(); ++q) {
    const SchRow& row = window.row(q);
    const double energy = checked_energy(row);
    for (const PssSequence* a : seqs) {
      for (int nu : ifos) {
        despread_into(row, *a, nu, z);
        const double m = numerator_for(config, z) / energy;
        const Hypothesis hyp{q, a->root, nu};
        if (keep_table) result.metric_table.push_back({hyp, m});
        if (!have_best || m > result.metric_value) {
          result.estimate = hyp;
          result.metric_value = m;
          have_best = true;
        }
      }
    }
  }
  return result;
}

CVector estimate_expansion_coeffs(SchRowView x_q, const ExpansionBasis& basis, ZcRoot u, int nu) {
  const DespreadVector z = despread(x_q, u, nu);
  const Eigen::Map<const CVector> zv(z.data(), kPssLength);
  const CMatrix& b = basis.matrix();
  const CMatrix gram = b.adjoint() * b;
  const Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericError("B^H B is not positive definite");
  return llt.solve(b.adjoint() * zv);
}

double fit_residual(SchRowView x_q, const ExpansionBasis& basis, ZcRoot u, int nu) {
  const CVector h_eq = basis.matrix() * estimate_expansion_coeffs(x_q, basis, u, nu);
  const PssSequence& a = pss_for(u);
  double acc = 0.0;
  for (int n = -kSchHalfWidth; n <= kSchHalfWidth; ++n) {
    const int m = n - nu;
    cplx model{0.0, 0.0};
    if (m >= -kPssHalfWidth && m <= kPssHalfWidth) model = h_eq(pss_slot(m)) * a.at(m);
    acc += std::norm(x_q[static_cast<std::size_t>(sch_slot(n))] - model);
  }
  return acc;
}

NoiseVarianceEstimates estimate_noise_vars(const SchWindow& window, int q_hat, double residual) {
  (void)window.row(q_hat);  // range check
  NoiseVarianceEstimates out;
  for (int k = 1; k <= window.n_q(); ++k) {
    if (k == q_hat) continue;
    out.data_vars.emplace_back(k, row_energy(window.row(k)) / kSchLength);
  }
  out.noise_var = residual / kSchLength;
  return out;
}

}  // namespace pssml
