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

#include <random>
#include <utility>
#include <vector>

#include "pssml/tap_profile.hpp"
#include "pssml/types.hpp"

namespace pssml {

using Rng = std::mt19937_64;

inline constexpr double kDefaultSampleRate = 30.72e6;  // Hz, 20 MHz LTE
inline constexpr int kDefaultDftSize = 2048;
inline constexpr int kDefaultThetaMax = 40;

/// Raised-cosine pulse truncated to a window of `support` samples.
struct PulseShape {
  double rolloff = 0.22;
  int support = 6;

  /// Raised-cosine impulse response at t (in sample periods), peak 1 at t = 0.
  double value(double t) const;
  void validate() const;
};

/// Sample-spaced CIR h(0..L-1).
struct ChannelRealization {
  CVector h;
};

/// [0_theta, h, 0_(theta_max - theta)], length L + theta_max.
struct EquivalentCir {
  CVector h_eq;
  int theta = 0;
  int theta_max = 0;
};

/// [F]_{n,l} = exp(-j 2 pi n l / N), n in [-31, 31] (row n + 31), l in [0, L_eq).
struct FourierMatrix {
  CMatrix F;
  int dft_size = kDefaultDftSize;

  int cir_length() const { return static_cast<int>(F.cols()); }
};

/// Covariance E{h_eq h_eq^H} of the equivalent CIR.
struct CirCovariance {
  CMatrix C_eq;
};

/// Discrete prior on the integer timing error.
struct ThetaPrior {
  std::vector<std::pair<int, double>> weights;

  static ThetaPrior uniform(int theta_max);
  static ThetaPrior fixed(int theta);
};

/// CIR length L = ceil(f_s * tau_max) + pulse support (160 for ETU at 30.72 MHz).
int cir_length(const TapProfile& profile, const PulseShape& pulse, double sample_rate);

/// Pulse-shaped tapped-delay-line model. The per-tap sampled pulses are
/// computed once; realize() only draws the Rayleigh gains.
class ChannelModel {
 public:
  ChannelModel(TapProfile profile, PulseShape pulse, double sample_rate);

  int length() const noexcept { return length_; }
  const TapProfile& profile() const noexcept { return profile_; }
  const PulseShape& pulse() const noexcept { return pulse_; }
  double sample_rate() const noexcept { return sample_rate_; }

  /// L x (number of taps); column i is tap i's sampled pulse, unit energy.
  const Eigen::MatrixXd& tap_pulses() const noexcept { return tap_pulses_; }

  /// E{h h^H} = sum_i P_i p_i p_i^T (L x L).
  Eigen::MatrixXd covariance() const;

  ChannelRealization realize(Rng& rng) const;

 private:
  TapProfile profile_;
  PulseShape pulse_;
  double sample_rate_;
  int length_;
  Eigen::MatrixXd tap_pulses_;
};

/// One Rayleigh realization: each tap gain is CN(0, P_i), convolved with the
/// sampled raised cosine at its fractional delay. Expected energy is 1.
ChannelRealization realize_channel(const TapProfile& profile, const PulseShape& pulse,
                                   double sample_rate, Rng& rng);

/// Throws DomainError unless 0 <= theta <= theta_max.
EquivalentCir shift_to_equivalent(const ChannelRealization& h, int theta, int theta_max);

FourierMatrix make_fourier_matrix(int cir_length, int dft_size = kDefaultDftSize);

/// H_eq = F h_eq (63 bins).
CVector cfr(const EquivalentCir& h_eq, const FourierMatrix& F);

/// C_eq = sum_theta w(theta) E{h_eq h_eq^H | theta}, size L + theta_max.
CirCovariance build_cir_covariance(const ChannelModel& model, const ThetaPrior& prior,
                                   int theta_max);
CirCovariance build_cir_covariance(const TapProfile& profile, const PulseShape& pulse,
                                   double sample_rate, const ThetaPrior& prior, int theta_max);

/// The mismatched covariance I_{L_eq}.
CirCovariance identity_covariance(int cir_length);

}  // namespace pssml
