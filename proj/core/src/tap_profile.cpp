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

#include "pssml/tap_profile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pssml/types.hpp"

namespace pssml {
namespace {

TapProfile from_db(std::string name, std::initializer_list<std::pair<double, double>> rows) {
  TapProfile p{std::move(name), {}};
  for (auto [delay_ns, power_db] : rows) {
    p.taps.push_back({delay_ns * 1e-9, std::pow(10.0, power_db / 10.0)});
  }
  return p.normalized();
}

}  // namespace

double TapProfile::max_delay() const { return taps.empty() ? 0.0 : taps.back().delay_s; }

double TapProfile::total_power() const {
  double s = 0.0;
  for (const auto& t : taps) s += t.mean_power;
  return s;
}

TapProfile TapProfile::normalized() const {
  validate(*this);
  const double total = total_power();
  if (!(total > 0.0)) throw DomainError("tap profile '" + name + "' has zero total power");
  TapProfile out = *this;
  for (auto& t : out.taps) t.mean_power /= total;
  return out;
}

void validate(const TapProfile& profile) {
  if (profile.taps.empty()) throw DomainError("tap profile '" + profile.name + "' is empty");
  double prev = -1.0;
  for (const auto& t : profile.taps) {
    if (!(t.delay_s >= 0.0)) throw DomainError("negative tap delay in '" + profile.name + "'");
    if (!(t.delay_s > prev)) {
      throw DomainError("tap delays must be strictly increasing in '" + profile.name + "'");
    }
    if (!(t.mean_power >= 0.0) || !std::isfinite(t.mean_power)) {
      throw DomainError("invalid tap power in '" + profile.name + "'");
    }
    prev = t.delay_s;
  }
}

TapProfile parse_tap_profile(std::istream& in, std::string name) {
  TapProfile p{std::move(name), {}};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string probe;
    if (!(fields >> probe)) continue;  // blank line
    fields.clear();
    fields.seekg(0);
    double delay_ns = 0.0;
    double power_db = 0.0;
    std::string extra;
    if (!(fields >> delay_ns >> power_db) || (fields >> extra)) {
      throw DomainError("tap profile '" + p.name + "' line " + std::to_string(lineno) +
                        ": expected 'delay_ns power_db'");
    }
    p.taps.push_back({delay_ns * 1e-9, std::pow(10.0, power_db / 10.0)});
  }
  return p.normalized();
}

TapProfile load_tap_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open tap profile " + path.string());
  return parse_tap_profile(in, path.stem().string());
}

TapProfile etu_profile() {
  return from_db("etu", {{0, -1.0}, {50, -1.0}, {120, -1.0}, {200, 0.0}, {230, 0.0},
                         {500, 0.0}, {1600, -3.0}, {2300, -5.0}, {5000, -7.0}});
}

TapProfile eva_profile() {
  return from_db("eva", {{0, 0.0}, {30, -1.5}, {150, -1.4}, {310, -3.6}, {370, -0.6},
                         {710, -9.1}, {1090, -7.0}, {1730, -12.0}, {2510, -16.9}});
}

TapProfile epa_profile() {
  return from_db("epa", {{0, 0.0}, {30, -1.0}, {70, -2.0}, {90, -3.0}, {110, -8.0},
                         {190, -17.2}, {410, -20.8}});
}

TapProfile resolve_tap_profile(const std::string& name_or_path) {
  if (name_or_path == "etu") return etu_profile();
  if (name_or_path == "eva") return eva_profile();
  if (name_or_path == "epa") return epa_profile();
  return load_tap_profile(name_or_path);
}

}  // namespace pssml
