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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pssml/detector.hpp"
#include "pssml/rankbasis.hpp"
#include "pssml/simulator.hpp"

namespace pssml {

/// Which detector to run; p is ignored by CFDC and DD.
struct DetectorSpec {
  DetectorKind kind = DetectorKind::Ammse;
  int p = 5;

  friend bool operator==(const DetectorSpec&, const DetectorSpec&) = default;
};

/// Settings shared by every basis built for one scenario.
struct BasisDesign {
  int ammse_cir_length = kDefaultAmmseCirLength;  // AMMSE design L_eq
};

/// Builds a detector for the scenario's geometry. The MMSE basis uses the
/// scenario's true profile with a uniform prior on [0, theta_max].
DetectorConfig make_detector(const DetectorSpec& spec, const SimScenario& scenario,
                             const BasisDesign& design = {});

/// "ammse:5", "prr:3", "cfdc", "dd"; bare reduced-rank kinds take P = 5.
DetectorSpec parse_detector_spec(std::string_view text);
std::string label_of(const DetectorSpec& spec);

struct TrialOutcome {
  DetectorSpec detector;
  Hypothesis truth;
  Hypothesis estimate;
  std::uint64_t window_hash = 0;

  bool q_error() const { return estimate.q != truth.q; }
  bool u_error() const { return estimate.u != truth.u; }
  bool nu_error() const { return estimate.nu != truth.nu; }
  bool failure() const { return !(estimate == truth); }
};

/// FNV-1a over the raw sample bytes.
std::uint64_t window_hash(const SchWindow& window);

/// Simulates trial `trial_index` once and scores every detector on that window.
std::vector<TrialOutcome> run_trial(const Simulator& simulator,
                                    const std::vector<std::pair<DetectorSpec, DetectorConfig>>& detectors,
                                    std::uint64_t master_seed, std::uint64_t trial_index);
std::vector<TrialOutcome> run_trial(const SimScenario& scenario, const std::vector<DetectorSpec>& detectors,
                                    std::uint64_t master_seed, std::uint64_t trial_index);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for k successes out of n (95% by default).
Interval wilson_interval(long long k, long long n, double z = 1.959963984540054);

enum class SweepAxis { Snr, Theta, P };
std::string_view to_string(SweepAxis axis) noexcept;
SweepAxis parse_sweep_axis(std::string_view text);

struct ErrorRates {
  SweepAxis axis = SweepAxis::Snr;
  double axis_value = 0.0;
  DetectorSpec detector;
  long long trials = 0;
  long long errors_q = 0;
  long long errors_u = 0;
  long long errors_nu = 0;
  long long failures = 0;
  std::uint64_t seed = 0;

  double p_q() const { return ratio(errors_q); }
  double p_u() const { return ratio(errors_u); }
  double p_nu() const { return ratio(errors_nu); }
  double p_f() const { return ratio(failures); }
  Interval ci_f() const { return wilson_interval(failures, trials); }
  Interval ci_q() const { return wilson_interval(errors_q, trials); }
  /// Half-width of the 95% Wilson interval on p_f.
  double ci95() const;

 private:
  double ratio(long long k) const { return trials > 0 ? static_cast<double>(k) / trials : 0.0; }
};

struct SweepConfig {
  SweepAxis axis = SweepAxis::Snr;
  std::vector<double> values;
  long long trials = 2000;
  std::vector<DetectorSpec> detectors;
  SimScenario base;
  std::uint64_t master_seed = 1;
  int jobs = 0;  // <= 0: hardware concurrency
  BasisDesign design;

  void validate() const;
};

/// One ErrorRates per (axis value, detector), ordered by axis value then by
/// the detector list. Every detector sees the same windows (paired design);
/// results do not depend on `jobs`.
std::vector<ErrorRates> run_sweep(const SweepConfig& config);

/// Comment lines with every scenario parameter, then the header
/// "axis,detector,P,p_q,p_u,p_nu,p_f,ci95,trials,seed" and one row per record.
void write_sweep_csv(std::ostream& out, const SweepConfig& config, const std::vector<ErrorRates>& rates);

/// JSON sweep description; see README for the field list.
SweepConfig parse_sweep_config(std::string_view json_text);

/// Floating-point operations per received OFDM symbol. `p` is ignored for
/// CFDC and DD; MMSE is costed like AMMSE (same dense combiner).
long long flops_estimate(DetectorKind kind, int n_nu, int p);

struct BasisMseSetup {
  TapProfile profile = etu_profile();
  PulseShape pulse{};
  double sample_rate = kDefaultSampleRate;
  int theta_max = kDefaultThetaMax;
  int dft_size = kDefaultDftSize;
  BasisDesign design;
};

struct BasisMsePoint {
  BasisKind kind;
  int p;
  double mse;
};

/// MSE(B) against the exact C_eq of the setup (uniform theta prior).
std::vector<BasisMsePoint> basis_mse_curve(BasisKind kind, int p_first, int p_last,
                                           const BasisMseSetup& setup = {});

}  // namespace pssml
