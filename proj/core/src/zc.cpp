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

#include "pssml/zc.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pssml {

ZcRoot ZcRoot::from_value(int value) {
  for (int v : kValues) {
    if (v == value) return ZcRoot(value);
  }
  throw DomainError("ZC root must be one of 25, 29, 34 (got " + std::to_string(value) + ")");
}

int ZcRoot::ordinal() const noexcept {
  switch (value_) {
    case 25: return 0;
    case 29: return 1;
    default: return 2;
  }
}

SectorId SectorId::from_value(int value) {
  if (value < 0 || value > 2) {
    throw DomainError("sector id must be 0, 1 or 2 (got " + std::to_string(value) + ")");
  }
  return SectorId(value);
}

PssSequence generate_pss(ZcRoot root) {
  PssSequence seq{root, {}};
  const long long u = root.value();
  for (int n = -kPssHalfWidth; n <= kPssHalfWidth; ++n) {
    if (n == 0) continue;
    // phase = -pi * r / 63 with r = u (n^2 + 63 n + 110) mod 126 (period 2*pi).
    long long r = (u * (static_cast<long long>(n) * n + 63LL * n + 110LL)) % 126LL;
    if (r < 0) r += 126;
    const double phase = -std::numbers::pi * static_cast<double>(r) / 63.0;
    seq.samples[static_cast<std::size_t>(pss_slot(n))] = std::polar(1.0, phase);
  }
  return seq;
}

const PssSequence& pss_for(ZcRoot root) {
  static const std::array<PssSequence, 3> table{
      generate_pss(ZcRoot::from_value(25)),
      generate_pss(ZcRoot::from_value(29)),
      generate_pss(ZcRoot::from_value(34)),
  };
  return table[static_cast<std::size_t>(root.ordinal())];
}

ZcRoot root_for_sector(SectorId sector) noexcept {
  return ZcRoot::from_value(ZcRoot::kValues[static_cast<std::size_t>(sector.value())]);
}

SectorId sector_for_root(ZcRoot root) noexcept {
  return SectorId::from_value(root.ordinal());
}

int cell_id(int group, SectorId sector) {
  if (group < 0 || group > 167) {
    throw DomainError("cell-ID group must lie in [0, 167] (got " + std::to_string(group) + ")");
  }
  return 3 * group + sector.value();
}

double cross_correlation(const PssSequence& a, const PssSequence& b) noexcept {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.samples.size(); ++i) acc += a.samples[i] * std::conj(b.samples[i]);
  return std::abs(acc);
}

}  // namespace pssml
