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

#include "pssml/window_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace pssml {

void write_window_csv(std::ostream& out, const SchWindow& window) {
  const auto old_precision = out.precision(17);
  out << "k,n,re,im\n";
  for (int k = 1; k <= window.n_q(); ++k) {
    for (int n = -kSchHalfWidth; n <= kSchHalfWidth; ++n) {
      const cplx v = window.at(k, n);
      out << k << ',' << n << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  out.precision(old_precision);
}

SchWindow read_window_csv(std::istream& in) {
  std::map<int, std::vector<bool>> seen;
  std::map<int, SchRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("k,", 0) == 0) continue;  // header
    std::istringstream fields(line);
    int k = 0;
    int n = 0;
    double re = 0.0;
    double im = 0.0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> k >> c1 >> n >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw DomainError("window file line " + std::to_string(lineno) + ": expected 'k,n,re,im'");
    }
    if (k < 1) throw DomainError("window file line " + std::to_string(lineno) + ": symbol index must be >= 1");
    if (n < -kSchHalfWidth || n > kSchHalfWidth) {
      throw DomainError("window file line " + std::to_string(lineno) + ": bin index outside [-36, 36]");
    }
    auto& mask = seen.try_emplace(k, std::vector<bool>(kSchLength, false)).first->second;
    const auto slot = static_cast<std::size_t>(sch_slot(n));
    if (mask[slot]) {
      throw DomainError("window file line " + std::to_string(lineno) + ": duplicate entry");
    }
    mask[slot] = true;
    rows[k][slot] = cplx(re, im);
  }
  if (rows.empty()) throw DomainError("window file holds no samples");
  const int n_q = rows.rbegin()->first;
  std::vector<SchRow> ordered;
  ordered.reserve(static_cast<std::size_t>(n_q));
  for (int k = 1; k <= n_q; ++k) {
    auto it = seen.find(k);
    if (it == seen.end()) throw DomainError("window file is missing symbol " + std::to_string(k));
    for (bool present : it->second) {
      if (!present) throw DomainError("window file symbol " + std::to_string(k) + " is incomplete");
    }
    ordered.push_back(rows[k]);
  }
  return SchWindow(std::move(ordered));
}

}  // namespace pssml
