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

#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "pssml/harness.hpp"

namespace pssml {
namespace {

SweepConfig small_sweep() {
  SweepConfig c;
  c.axis = SweepAxis::Snr;
  c.values = {4.0, 10.0};
  c.trials = 40;
  c.detectors = {{DetectorKind::Ammse, 5}, {DetectorKind::Cfdc, 5}, {DetectorKind::Dd, 5}};
  c.base.n_q = 12;
  c.master_seed = 77;
  return c;
}

std::string csv_of(const SweepConfig& c) {
  std::ostringstream out;
  write_sweep_csv(out, c, run_sweep(c));
  return out.str();
}

TEST(Flops, TableValues) {
  EXPECT_EQ(flops_estimate(DetectorKind::Ammse, 7, 5), 60393);
  EXPECT_EQ(flops_estimate(DetectorKind::Prr, 7, 5), 34353);
  EXPECT_EQ(flops_estimate(DetectorKind::Pcrr, 7, 5), 11001);
  EXPECT_EQ(flops_estimate(DetectorKind::Cfdc, 7, 5), 10749);
  EXPECT_EQ(flops_estimate(DetectorKind::Dd, 7, 5), 13248);
  EXPECT_EQ(flops_estimate(DetectorKind::Cfdc, 7, 1), flops_estimate(DetectorKind::Cfdc, 7, 12));
}

TEST(Wilson, ReferenceValues) {
  const Interval a = wilson_interval(0, 10);
  EXPECT_NEAR(a.lo, 0.0, 1e-12);
  EXPECT_NEAR(a.hi, 0.277532799862889, 1e-12);
  const Interval b = wilson_interval(5, 10);
  EXPECT_NEAR(b.lo, 0.236593090512564, 1e-12);
  EXPECT_NEAR(b.hi, 0.763406909487436, 1e-12);
  const Interval c = wilson_interval(37, 2000);
  EXPECT_NEAR(c.lo, 0.013451349814110, 1e-12);
  EXPECT_NEAR(c.hi, 0.025394766717737, 1e-12);
}

TEST(DetectorSpecText, ParseAndLabel) {
  EXPECT_EQ(parse_detector_spec("ammse:7"), (DetectorSpec{DetectorKind::Ammse, 7}));
  EXPECT_EQ(parse_detector_spec("prr").p, 5);
  EXPECT_EQ(parse_detector_spec("dd").kind, DetectorKind::Dd);
  EXPECT_THROW(parse_detector_spec("ammse:x"), DomainError);
  EXPECT_THROW(parse_detector_spec("foo"), DomainError);
  EXPECT_EQ(label_of({DetectorKind::Pcrr, 3}), "pcrr:3");
}

TEST(RunTrial, PairedWindowsShareHash) {
  const SimScenario s;
  const auto outcomes = run_trial(s, {{DetectorKind::Ammse, 5}, {DetectorKind::Cfdc, 5}}, 5, 3);
  ASSERT_EQ(outcomes.size(), 2u);
  EXPECT_EQ(outcomes[0].window_hash, outcomes[1].window_hash);
  EXPECT_EQ(outcomes[0].truth, outcomes[1].truth);
  const auto again = run_trial(s, {{DetectorKind::Ammse, 5}}, 5, 3);
  EXPECT_EQ(again[0].window_hash, outcomes[0].window_hash);
  EXPECT_EQ(again[0].estimate, outcomes[0].estimate);
}

TEST(RunTrial, NoiselessAmmseCorrect) {
  SimScenario s;
  s.snr_db = std::numeric_limits<double>::infinity();
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto o = run_trial(s, {{DetectorKind::Ammse, 5}}, 1, t);
    EXPECT_FALSE(o[0].failure());
  }
}

TEST(RunSweep, RatesConsistent) {
  const SweepConfig c = small_sweep();
  const auto rates = run_sweep(c);
  ASSERT_EQ(rates.size(), 6u);
  for (const ErrorRates& r : rates) {
    EXPECT_EQ(r.trials, 40);
    EXPECT_GE(r.failures, std::max({r.errors_q, r.errors_u, r.errors_nu}));
    const Interval ci = r.ci_f();
    EXPECT_LE(ci.lo, r.p_f());
    EXPECT_GE(ci.hi, r.p_f());
  }
  EXPECT_EQ(rates[0].axis_value, 4.0);
  EXPECT_EQ(rates[3].axis_value, 10.0);
  EXPECT_EQ(rates[1].detector.kind, DetectorKind::Cfdc);
}

TEST(RunSweep, DeterministicAcrossJobCounts) {
  SweepConfig c = small_sweep();
  c.jobs = 1;
  const std::string one = csv_of(c);
  c.jobs = 3;
  EXPECT_EQ(csv_of(c), one);
  EXPECT_EQ(csv_of(c), one);
}

TEST(RunSweep, CsvLayout) {
  const std::string text = csv_of(small_sweep());
  EXPECT_NE(text.find("\naxis,detector,P,p_q,p_u,p_nu,p_f,ci95,trials,seed\n"), std::string::npos);
  EXPECT_NE(text.find("# profile=etu"), std::string::npos);
  EXPECT_NE(text.find("# axis=snr"), std::string::npos);
  EXPECT_NE(text.find("\n4,dd,-,"), std::string::npos);
  EXPECT_NE(text.find("\n10,cfdc,1,"), std::string::npos);
  EXPECT_NE(text.find("\n4,ammse,5,"), std::string::npos);
}

TEST(RunSweep, PAxisOverridesRank) {
  SweepConfig c = small_sweep();
  c.axis = SweepAxis::P;
  c.values = {1.0, 3.0};
  c.detectors = {{DetectorKind::Pcrr, 5}};
  const auto rates = run_sweep(c);
  ASSERT_EQ(rates.size(), 2u);
  EXPECT_EQ(rates[0].detector.p, 1);
  EXPECT_EQ(rates[1].detector.p, 3);
}

TEST(RunSweep, InvalidConfig) {
  SweepConfig c = small_sweep();
  c.trials = 0;
  EXPECT_THROW(run_sweep(c), DomainError);
  c = small_sweep();
  c.values.clear();
  EXPECT_THROW(run_sweep(c), DomainError);
  c = small_sweep();
  c.axis = SweepAxis::Theta;
  c.values = {50.0};
  EXPECT_THROW(run_sweep(c), DomainError);
}

TEST(SweepConfigJson, Parses) {
  const SweepConfig c = parse_sweep_config(R"({
    "axis": "theta", "values": [0, 20, 40], "trials": 100, "seed": 9,
    "detectors": ["ammse:4", {"kind": "dd"}],
    "scenario": {"snr_db": "inf", "n_q": 10, "profile": "eva", "nu": 1}
  })");
  EXPECT_EQ(c.axis, SweepAxis::Theta);
  EXPECT_EQ(c.values.size(), 3u);
  EXPECT_EQ(c.trials, 100);
  EXPECT_EQ(c.master_seed, 9u);
  ASSERT_EQ(c.detectors.size(), 2u);
  EXPECT_EQ(c.detectors[0], (DetectorSpec{DetectorKind::Ammse, 4}));
  EXPECT_TRUE(std::isinf(c.base.snr_db));
  EXPECT_EQ(c.base.profile.name, "eva");
  EXPECT_EQ(c.base.nu, 1);
}

TEST(SweepConfigJson, RejectsUnknownKeys) {
  EXPECT_THROW(parse_sweep_config(R"({"axis":"snr","values":[1],"detectors":["dd"],"bogus":1})"),
               DomainError);
  EXPECT_THROW(parse_sweep_config(R"({"axis":"snr","values":[1],"detectors":["dd"],"scenario":{"snr":1}})"),
               DomainError);
  EXPECT_THROW(parse_sweep_config("not json"), DomainError);
}

TEST(BasisMse, CurvesNonIncreasing) {
  for (BasisKind k : {BasisKind::Mmse, BasisKind::Ammse, BasisKind::Prr, BasisKind::Pcrr}) {
    const auto curve = basis_mse_curve(k, 1, 8);
    ASSERT_EQ(curve.size(), 8u);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i].mse, curve[i - 1].mse + 1e-12);
  }
}

}  // namespace
}  // namespace pssml
