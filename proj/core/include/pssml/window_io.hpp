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

#include <iosfwd>

#include "pssml/detector.hpp"

namespace pssml {

// Window files are CSV with header "k,n,re,im": one line per (symbol k in
// [1, N_Q], bin n in [-36, 36]), values printed with 17 significant digits.

void write_window_csv(std::ostream& out, const SchWindow& window);

/// Throws DomainError on malformed lines, out-of-range indices, duplicate or
/// missing (k, n) entries.
SchWindow read_window_csv(std::istream& in);

}  // namespace pssml
