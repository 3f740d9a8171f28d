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

#include "pssml/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pssml {

void SimScenario::validate() const {
  if (std::isnan(snr_db)) throw DomainError("SNR must be a number");
  if (theta_max < 0 || theta < 0 || theta > theta_max) {
    throw DomainError("theta=" + std::to_string(theta) + " outside [0, theta_max=" +
                      std::to_string(theta_max) + "]");
  }
  if (n_q < 1) throw DomainError("window length must be positive");
  if (dft_size < kPssLength) throw DomainError("DFT size too small");
  if (ifo_set.empty()) throw DomainError("empty IFO set");
  for (int v : ifo_set) {
    if (std::abs(v) > kMaxAbsIfo) throw DomainError("IFO set entries must lie in [-5, 5]");
  }
  if (nu && std::find(ifo_set.begin(), ifo_set.end(), *nu) == ifo_set.end()) {
    throw DomainError("IFO " + std::to_string(*nu) + " not in the search set");
  }
  if (q && (*q < 1 || *q > n_q)) throw DomainError("PSS position q outside [1, N_Q]");
  pssml::validate(profile);
  pulse.validate();
}

double apply_snr(double signal_power, double snr_db) {
  if (!(signal_power > 0.0)) throw DomainError("signal power must be positive");
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return signal_power / std::pow(10.0, snr_db / 10.0);
}

Simulator::Simulator(SimScenario scenario)
    : scenario_((scenario.validate(), std::move(scenario))),
      model_(scenario_.profile, scenario_.pulse, scenario_.sample_rate),
      fourier_(make_fourier_matrix(model_.length() + scenario_.theta_max, scenario_.dft_size)) {}

SimulatedWindow Simulator::simulate(Rng& rng) const {
  const SimScenario& s = scenario_;
  std::uniform_int_distribution<int> pick_root(0, 2);
  std::uniform_int_distribution<std::size_t> pick_ifo(0, s.ifo_set.size() - 1);
  std::uniform_int_distribution<int> pick_q(1, s.n_q);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Always consume the three hypothesis draws to keep streams aligned.
  const int root_draw = pick_root(rng);
  const std::size_t ifo_draw = pick_ifo(rng);
  const int q_draw = pick_q(rng);
  const Hypothesis truth{s.q.value_or(q_draw),
                         s.root.value_or(ZcRoot::from_value(kAllRoots[static_cast<std::size_t>(root_draw)])),
                         s.nu.value_or(s.ifo_set[ifo_draw])};

  ChannelRealization channel = model_.realize(rng);
  const CVector h_eq = cfr(shift_to_equivalent(channel, s.theta, s.theta_max), fourier_);

  const double noise_var = apply_snr(1.0, s.snr_db);
  const double noise_sigma = std::sqrt(noise_var / 2.0);
  const double data_sigma = std::sqrt((1.0 + noise_var) / 2.0);
  auto draw = [&](double sigma) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    return cplx(sigma * re, sigma * im);
  };

  SchWindow window = SchWindow::zeros(s.n_q);
  const PssSequence& a = pss_for(truth.u);
  for (int k = 1; k <= s.n_q; ++k) {
    SchRow& row = window.row(k);
    if (k != truth.q) {
      for (auto& v : row) v = draw(data_sigma);
      continue;
    }
    for (int n = -kSchHalfWidth; n <= kSchHalfWidth; ++n) {
      cplx value = draw(noise_sigma);
      const int m = n - truth.nu;
      if (m >= -kPssHalfWidth && m <= kPssHalfWidth) value += h_eq(pss_slot(m)) * a.at(m);
      row[static_cast<std::size_t>(sch_slot(n))] = value;
    }
  }
  return SimulatedWindow{std::move(window), truth, std::move(channel)};
}

SimulatedWindow simulate_window(const SimScenario& scenario, Rng& rng) {
  return Simulator(scenario).simulate(rng);
}

Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial_index),
                    static_cast<std::uint32_t>(trial_index >> 32), 0x5053534du};
  return Rng(seq);
}

}  // namespace pssml
