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

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace pssml {

struct Tap {
  double delay_s;     // excess delay, seconds
  double mean_power;  // linear, relative
};

/// Power-delay profile of a tapped-delay-line fading channel.
struct TapProfile {
  std::string name;
  std::vector<Tap> taps;

  double max_delay() const;
  double total_power() const;
  /// Copy with powers scaled to sum to one. Throws DomainError on an empty
  /// or non-increasing profile.
  TapProfile normalized() const;
};

/// Throws DomainError if delays are negative or not strictly increasing, a
/// power is negative, or the profile is empty.
void validate(const TapProfile& profile);

/// Parses lines of "delay_ns power_db"; '#' starts a comment. The result is
/// normalized.
TapProfile parse_tap_profile(std::istream& in, std::string name);

/// Loads a profile file; the profile name is the file stem.
TapProfile load_tap_profile(const std::filesystem::path& path);

// 3GPP LTE propagation profiles, normalized.
TapProfile etu_profile();
TapProfile eva_profile();
TapProfile epa_profile();

/// "etu", "eva", "epa" resolve to the built-ins; anything else is read as a file.
TapProfile resolve_tap_profile(const std::string& name_or_path);

}  // namespace pssml
