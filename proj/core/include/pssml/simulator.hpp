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
#include <optional>
#include <vector>

#include "pssml/channel.hpp"
#include "pssml/detector.hpp"
#include "pssml/tap_profile.hpp"

namespace pssml {

inline constexpr int kDefaultWindowLength = 60;  // N_Q, extended CP half frame

/// One synthesis scenario. Unset root / nu / q are drawn uniformly per window
/// (root from {25, 29, 34}, nu from ifo_set, q from [1, n_q]).
struct SimScenario {
  double snr_db = 8.0;  // +infinity gives a noiseless PSS symbol
  int theta = kDefaultThetaMax;
  int theta_max = kDefaultThetaMax;
  std::optional<int> nu;
  std::optional<ZcRoot> root;
  std::optional<int> q;
  int n_q = kDefaultWindowLength;
  TapProfile profile = etu_profile();
  PulseShape pulse{};
  double sample_rate = kDefaultSampleRate;
  int dft_size = kDefaultDftSize;
  std::vector<int> ifo_set = default_ifo_set();

  void validate() const;
};

/// sigma_w^2 = signal_power / 10^(snr_db / 10); 0 at +infinity.
double apply_snr(double signal_power, double snr_db);

struct SimulatedWindow {
  SchWindow window;
  Hypothesis truth;
  ChannelRealization channel;
};

/// Frequency-domain synthesis of the DFT outputs over the SCH:
///   X_q(n) = H_eq(n - nu) a_u(n - nu) + w_q(n),  H_eq = F h_eq (delay theta),
/// with w_q ~ CN(0, sigma_w^2) on all 73 bins and every other row
/// CN(0, 1 + sigma_w^2) i.i.d. The random stream is consumed in the same
/// order whatever the SNR, theta or fixed fields, so sweeps over those axes
/// share their draws.
class Simulator {
 public:
  explicit Simulator(SimScenario scenario);

  const SimScenario& scenario() const noexcept { return scenario_; }
  const ChannelModel& channel_model() const noexcept { return model_; }

  SimulatedWindow simulate(Rng& rng) const;

 private:
  SimScenario scenario_;
  ChannelModel model_;
  FourierMatrix fourier_;
};

SimulatedWindow simulate_window(const SimScenario& scenario, Rng& rng);

/// Generator for trial `trial_index` of a run seeded with `master_seed`.
Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index);

}  // namespace pssml
