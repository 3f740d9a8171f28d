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

#include "pssml/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pssml {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

double PulseShape::value(double t) const {
  const double denom = 1.0 - 4.0 * rolloff * rolloff * t * t;
  if (std::abs(denom) < 1e-10) {
    // limit at |t| = 1 / (2 rolloff)
    return std::numbers::pi / 4.0 * sinc(1.0 / (2.0 * rolloff));
  }
  return sinc(t) * std::cos(std::numbers::pi * rolloff * t) / denom;
}

void PulseShape::validate() const {
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw DomainError("pulse roll-off must lie in (0, 1]");
  if (support < 1) throw DomainError("pulse support must be at least one sample");
}

ThetaPrior ThetaPrior::uniform(int theta_max) {
  if (theta_max < 0) throw DomainError("theta_max must be non-negative");
  ThetaPrior p;
  const double w = 1.0 / static_cast<double>(theta_max + 1);
  for (int t = 0; t <= theta_max; ++t) p.weights.emplace_back(t, w);
  return p;
}

ThetaPrior ThetaPrior::fixed(int theta) { return ThetaPrior{{{theta, 1.0}}}; }

int cir_length(const TapProfile& profile, const PulseShape& pulse, double sample_rate) {
  validate(profile);
  pulse.validate();
  if (!(sample_rate > 0.0)) throw DomainError("sample rate must be positive");
  // 1e-9 slack keeps exact-integer delays (e.g. 5 us at 30.72 MHz scaled) from rounding up.
  const double span = sample_rate * profile.max_delay();
  return static_cast<int>(std::ceil(span - 1e-9)) + pulse.support;
}

ChannelModel::ChannelModel(TapProfile profile, PulseShape pulse, double sample_rate)
    : profile_(profile.normalized()),
      pulse_(pulse),
      sample_rate_(sample_rate),
      length_(cir_length(profile_, pulse_, sample_rate_)) {
  const auto n_taps = static_cast<Eigen::Index>(profile_.taps.size());
  tap_pulses_ = Eigen::MatrixXd::Zero(length_, n_taps);
  const double half = static_cast<double>(pulse_.support) / 2.0;
  for (Eigen::Index i = 0; i < n_taps; ++i) {
    const double delay = profile_.taps[static_cast<std::size_t>(i)].delay_s * sample_rate_;
    const double center = delay + (pulse_.support - 1) / 2.0;
    // the `support` integer samples closest to the pulse center
    const int first = static_cast<int>(std::ceil(center - half - 1e-9));
    double energy = 0.0;
    for (int k = 0; k < pulse_.support; ++k) {
      const int l = first + k;
      if (l < 0 || l >= length_) continue;
      const double v = pulse_.value(static_cast<double>(l) - center);
      tap_pulses_(l, i) = v;
      energy += v * v;
    }
    if (!(energy > 0.0)) throw NumericError("degenerate sampled pulse for tap " + std::to_string(i));
    tap_pulses_.col(i) /= std::sqrt(energy);
  }
}

Eigen::MatrixXd ChannelModel::covariance() const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(length_, length_);
  for (std::size_t i = 0; i < profile_.taps.size(); ++i) {
    const auto p = tap_pulses_.col(static_cast<Eigen::Index>(i));
    c.noalias() += profile_.taps[i].mean_power * (p * p.transpose());
  }
  return c;
}

ChannelRealization ChannelModel::realize(Rng& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n_taps = static_cast<Eigen::Index>(profile_.taps.size());
  CVector gains(n_taps);
  for (Eigen::Index i = 0; i < n_taps; ++i) {
    const double sigma = std::sqrt(profile_.taps[static_cast<std::size_t>(i)].mean_power / 2.0);
    const double re = gauss(rng);
    const double im = gauss(rng);
    gains(i) = cplx(sigma * re, sigma * im);
  }
  return ChannelRealization{tap_pulses_.cast<cplx>() * gains};
}

ChannelRealization realize_channel(const TapProfile& profile, const PulseShape& pulse,
                                   double sample_rate, Rng& rng) {
  return ChannelModel(profile, pulse, sample_rate).realize(rng);
}

EquivalentCir shift_to_equivalent(const ChannelRealization& h, int theta, int theta_max) {
  if (theta_max < 0 || theta < 0 || theta > theta_max) {
    throw DomainError("timing error theta=" + std::to_string(theta) + " outside [0, " +
                      std::to_string(theta_max) + "]");
  }
  const auto len = h.h.size();
  EquivalentCir out{CVector::Zero(len + theta_max), theta, theta_max};
  out.h_eq.segment(theta, len) = h.h;
  return out;
}

FourierMatrix make_fourier_matrix(int cir_length, int dft_size) {
  if (cir_length < 1) throw DomainError("CIR length must be positive");
  if (dft_size < kPssLength) throw DomainError("DFT size too small for the PSS band");
  FourierMatrix out{CMatrix(kPssLength, cir_length), dft_size};
  const long long N = dft_size;
  for (int n = -kPssHalfWidth; n <= kPssHalfWidth; ++n) {
    for (int l = 0; l < cir_length; ++l) {
      // reduce n*l mod N exactly before evaluating the exponential
      long long r = (static_cast<long long>(n) * l) % N;
      if (r < 0) r += N;
      out.F(pss_slot(n), l) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) /
                                                   static_cast<double>(N));
    }
  }
  return out;
}

CVector cfr(const EquivalentCir& h_eq, const FourierMatrix& F) {
  if (h_eq.h_eq.size() != F.F.cols()) {
    throw DomainError("equivalent CIR length " + std::to_string(h_eq.h_eq.size()) +
                      " does not match Fourier matrix width " + std::to_string(F.F.cols()));
  }
  return F.F * h_eq.h_eq;
}

CirCovariance build_cir_covariance(const ChannelModel& model, const ThetaPrior& prior,
                                   int theta_max) {
  if (prior.weights.empty()) throw DomainError("empty timing-error prior");
  double wsum = 0.0;
  for (auto [theta, w] : prior.weights) {
    if (theta < 0 || theta > theta_max) throw DomainError("prior support outside [0, theta_max]");
    if (!(w >= 0.0)) throw DomainError("negative prior weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw DomainError("timing-error prior weights must sum to 1");

  const int L = model.length();
  const Eigen::MatrixXd c = model.covariance();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(L + theta_max, L + theta_max);
  for (auto [theta, w] : prior.weights) acc.block(theta, theta, L, L) += w * c;
  return CirCovariance{acc.cast<cplx>()};
}

CirCovariance build_cir_covariance(const TapProfile& profile, const PulseShape& pulse,
                                   double sample_rate, const ThetaPrior& prior, int theta_max) {
  return build_cir_covariance(ChannelModel(profile, pulse, sample_rate), prior, theta_max);
}

CirCovariance identity_covariance(int cir_length) {
  if (cir_length < 1) throw DomainError("CIR length must be positive");
  return CirCovariance{CMatrix::Identity(cir_length, cir_length)};
}

}  // namespace pssml
