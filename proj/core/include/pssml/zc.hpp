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
#include <cstdint>

#include "pssml/types.hpp"

namespace pssml {

/// Zadoff-Chu root index of an LTE primary synchronization sequence.
class ZcRoot {
 public:
  static constexpr std::array<int, 3> kValues{25, 29, 34};

  /// Throws DomainError unless value is 25, 29 or 34.
  static ZcRoot from_value(int value);

  constexpr int value() const noexcept { return value_; }
  /// Position of this root in {25, 29, 34}; also the detector's root order.
  int ordinal() const noexcept;

  friend constexpr bool operator==(ZcRoot, ZcRoot) = default;
  friend constexpr auto operator<=>(ZcRoot a, ZcRoot b) { return a.value_ <=> b.value_; }

 private:
  constexpr explicit ZcRoot(int v) : value_(v) {}
  int value_;
};

inline constexpr std::array<int, 3> kAllRoots = ZcRoot::kValues;

/// Sector identity N_ID^(2).
class SectorId {
 public:
  static SectorId from_value(int value);
  constexpr int value() const noexcept { return value_; }
  friend constexpr bool operator==(SectorId, SectorId) = default;

 private:
  constexpr explicit SectorId(int v) : value_(v) {}
  int value_;
};

/// The 63 frequency-domain PSS values a_u(n), n in [-31, 31], stored at slot n + 31.
struct PssSequence {
  ZcRoot root;
  std::array<cplx, kPssLength> samples{};

  cplx at(int n) const { return samples.at(static_cast<std::size_t>(pss_slot(n))); }
};

/// a_u(n) = exp(-j*pi*u*(n^2 + 63n + 110)/63) for 1 <= |n| <= 31 and a_u(0) = 0.
/// The exponent is reduced mod 126 in integer arithmetic before evaluation, so
/// symmetric indices produce bit-identical samples.
PssSequence generate_pss(ZcRoot root);

/// Cached sequence for one of the three roots.
const PssSequence& pss_for(ZcRoot root);

ZcRoot root_for_sector(SectorId sector) noexcept;
SectorId sector_for_root(ZcRoot root) noexcept;

/// 3 * group + sector; group must lie in [0, 167].
int cell_id(int group, SectorId sector);

/// |sum_n a(n) conj(b(n))|.
double cross_correlation(const PssSequence& a, const PssSequence& b) noexcept;

}  // namespace pssml
