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

#include <cmath>
#include <memory>
#include <numbers>

#include "pssml/detector.hpp"
#include "test_util.hpp"

namespace pssml {
namespace {

using test::clean_pss_row;
using test::random_row;

const ZcRoot kU25 = ZcRoot::from_value(25);
const ZcRoot kU29 = ZcRoot::from_value(29);
const ZcRoot kU34 = ZcRoot::from_value(34);

DetectorConfig config_for(DetectorKind kind, std::shared_ptr<const ExpansionBasis> basis = nullptr) {
  DetectorConfig c;
  c.kind = kind;
  c.basis = std::move(basis);
  return c;
}

std::shared_ptr<const ExpansionBasis> share(ExpansionBasis b) {
  return std::make_shared<const ExpansionBasis>(std::move(b));
}

TEST(Despread, MatchedCleanRowIsIndicator) {
  const DespreadVector z = despread(clean_pss_row(kU29, 0), kU29, 0);
  for (int m = -31; m <= 31; ++m) {
    const cplx expected = m == 0 ? cplx(0.0) : cplx(1.0);
    EXPECT_NEAR(std::abs(z[pss_slot(m)] - expected), 0.0, 1e-15);
  }
}

TEST(Despread, DcAlwaysZero) {
  std::mt19937_64 g(4);
  const SchRow x = random_row(g);
  for (int u : kAllRoots)
    for (int nu = -5; nu <= 5; ++nu) EXPECT_EQ(despread(x, ZcRoot::from_value(u), nu)[31], cplx(0.0));
}

TEST(Despread, ShiftInvariance) {
  std::mt19937_64 g(5);
  SchRow base{};
  for (int m = -31; m <= 31; ++m) base[sch_slot(m)] = {double(g() % 7), double(g() % 5)};
  for (int nu0 : {-5, -2, 3, 5}) {
    SchRow shifted{};
    for (int m = -31; m <= 31; ++m) shifted[sch_slot(m + nu0)] = base[sch_slot(m)];
    EXPECT_EQ(despread(shifted, kU34, nu0), despread(base, kU34, 0));
  }
}

TEST(Despread, RejectsLargeIfo) {
  EXPECT_THROW(despread(SchRow{}, kU25, 6), DomainError);
  EXPECT_THROW(despread(SchRow{}, kU25, -6), DomainError);
}

TEST(Metric, CleanFlatClosedForms) {
  const SchRow x = clean_pss_row(kU25, 0);
  EXPECT_NEAR(metric_cfdc(x, kU25, 0), 62.0 / 63.0, 1e-12);
  EXPECT_NEAR(metric_dd(x, kU25, 0), 60.0 / 62.0, 1e-12);
  EXPECT_NEAR(metric_reduced_rank(x, ammse_basis(1, 1), kU25, 0), 62.0 / 63.0, 1e-12);
  EXPECT_NEAR(metric_pcrr(x, pcrr_partition(1), kU25, 0), 62.0 / 63.0, 1e-12);
}

TEST(Metric, ScaleInvariance) {
  std::mt19937_64 g(6);
  const SchRow x = random_row(g);
  SchRow y;
  const cplx alpha(-2.5, 0.7);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i];
  const ExpansionBasis b = ammse_basis(5);
  for (int nu = -3; nu <= 3; ++nu) {
    EXPECT_NEAR(metric_reduced_rank(x, b, kU29, nu), metric_reduced_rank(y, b, kU29, nu), 1e-12);
    EXPECT_NEAR(metric_cfdc(x, kU29, nu), metric_cfdc(y, kU29, nu), 1e-12);
    EXPECT_NEAR(metric_dd(x, kU29, nu), metric_dd(y, kU29, nu), 1e-12);
    EXPECT_NEAR(metric_pcrr(x, pcrr_partition(5), kU29, nu), metric_pcrr(y, pcrr_partition(5), kU29, nu), 1e-12);
  }
}

TEST(Metric, FastFormMatchesProjectorForm) {
  std::mt19937_64 g(7);
  for (const ExpansionBasis& b : {ammse_basis(5), prr_basis(9), pcrr_basis(4)}) {
    const Projector G = projector_of(b);
    for (int t = 0; t < 50; ++t) {
      const SchRow x = random_row(g);
      const int nu = static_cast<int>(g() % 7) - 3;
      EXPECT_NEAR(metric_reduced_rank(x, b, kU34, nu), metric_projector_form(x, G, kU34, nu), 1e-12);
    }
  }
}

TEST(Metric, PcrrPartitionFormMatchesProjector) {
  std::mt19937_64 g(8);
  for (int p : {3, 5, 7, 9}) {
    const ExpansionBasis b = pcrr_basis(p);
    const Projector G = projector_of(b);
    for (int t = 0; t < 1000; ++t) {
      const SchRow x = random_row(g);
      const ZcRoot u = ZcRoot::from_value(kAllRoots[g() % 3]);
      const int nu = static_cast<int>(g() % 7) - 3;
      EXPECT_NEAR(metric_pcrr(x, b.partition(), u, nu), metric_projector_form(x, G, u, nu), 1e-12);
    }
  }
}

TEST(Metric, PcrrRankOneIsCfdc) {
  std::mt19937_64 g(9);
  for (int t = 0; t < 100; ++t) {
    const SchRow x = random_row(g);
    EXPECT_NEAR(metric_pcrr(x, pcrr_partition(1), kU25, 1), metric_cfdc(x, kU25, 1), 1e-14);
  }
}

TEST(Metric, SingleTapAmmseEqualsCfdc) {
  std::mt19937_64 g(10);
  const ExpansionBasis b = ammse_basis(1, 1);
  for (int t = 0; t < 100; ++t) {
    const SchRow x = random_row(g);
    for (int nu = -3; nu <= 3; ++nu) {
      EXPECT_NEAR(metric_reduced_rank(x, b, kU29, nu), metric_cfdc(x, kU29, nu), 1e-12);
    }
  }
}

TEST(Metric, FullRankIsRootIndependent) {
  std::mt19937_64 g(11);
  const ExpansionBasis b = pcrr_basis(63);
  for (int t = 0; t < 20; ++t) {
    const SchRow x = random_row(g);
    for (int nu = -3; nu <= 3; ++nu) {
      double in_band = 0.0;
      for (int m = -31; m <= 31; ++m) {
        if (m != 0) in_band += std::norm(x[sch_slot(m + nu)]);
      }
      const double expected = in_band / row_energy(x);
      for (int u : kAllRoots) {
        EXPECT_NEAR(metric_reduced_rank(x, b, ZcRoot::from_value(u), nu), expected, 1e-12);
      }
    }
  }
}

TEST(Metric, CfdcWrongIfoIsSmall) {
  // enumerated worst case over roots and nu: 0.00236
  for (int u : kAllRoots) {
    const ZcRoot r = ZcRoot::from_value(u);
    const SchRow x = clean_pss_row(r, 0);
    const double matched = metric_cfdc(x, r, 0);
    for (int nu = -5; nu <= 5; ++nu) {
      if (nu != 0) {
        EXPECT_LT(metric_cfdc(x, r, nu) / matched, 0.15);
      }
    }
  }
}

TEST(Metric, DdRobustToDelayRamp) {
  for (int theta : {0, 10, 25, 40}) {
    SchRow x{};
    const PssSequence& a = pss_for(kU25);
    for (int m = -31; m <= 31; ++m) {
      x[sch_slot(m)] = std::polar(1.0, 0.9 - 2.0 * std::numbers::pi * m * theta / 2048.0) * a.at(m);
    }
    const double v = metric_dd(x, kU25, 0);
    EXPECT_NEAR(v, 60.0 / 62.0 * std::cos(2.0 * std::numbers::pi * theta / 2048.0), 1e-12);
    EXPECT_GT(v, 0.9 * 60.0 / 62.0);
  }
}

TEST(Metric, ZeroRowThrows) {
  EXPECT_THROW(metric_cfdc(SchRow{}, kU25, 0), DomainError);
  EXPECT_THROW(metric_dd(SchRow{}, kU25, 0), DomainError);
  EXPECT_THROW(metric_reduced_rank(SchRow{}, ammse_basis(2), kU25, 0), DomainError);
}

TEST(Detect, CleanWindowEveryKind) {
  for (int u : kAllRoots) {
    for (int nu : {-3, 0, 2}) {
      for (int q : {1, 17, 60}) {
        SchWindow w = SchWindow::zeros(60);
        for (int k = 1; k <= 60; ++k) w.row(k)[0] = 1e-3;  // keep every row non-zero
        w.row(q) = clean_pss_row(ZcRoot::from_value(u), nu);
        const Hypothesis truth{q, ZcRoot::from_value(u), nu};
        for (const DetectorConfig& c :
             {config_for(DetectorKind::Ammse, share(ammse_basis(5))),
              config_for(DetectorKind::Prr, share(prr_basis(5))),
              config_for(DetectorKind::Pcrr, share(pcrr_basis(5))),
              config_for(DetectorKind::Cfdc), config_for(DetectorKind::Dd)}) {
          EXPECT_EQ(detect(w, c).estimate, truth) << to_string(c.kind);
        }
      }
    }
  }
}

TEST(Detect, TieBreakPrefersSmallestQ) {
  std::vector<SchRow> rows(10, clean_pss_row(kU29, 1));
  const DetectionResult r = detect(SchWindow(rows), config_for(DetectorKind::Cfdc));
  EXPECT_EQ(r.estimate, (Hypothesis{1, kU29, 1}));
}

TEST(Detect, MetricTable) {
  std::mt19937_64 g(12);
  std::vector<SchRow> rows;
  for (int k = 0; k < 4; ++k) rows.push_back(random_row(g));
  const SchWindow w(rows);
  const DetectorConfig c = config_for(DetectorKind::Dd);
  const DetectionResult r = detect(w, c, true);
  ASSERT_EQ(r.metric_table.size(), 4u * 3u * 7u);
  double best = -1e300;
  for (const MetricEntry& e : r.metric_table) best = std::max(best, e.metric);
  EXPECT_EQ(r.metric_value, best);
  EXPECT_TRUE(detect(w, c, false).metric_table.empty());
}

TEST(Detect, ConfigValidation) {
  EXPECT_THROW(config_for(DetectorKind::Ammse).validate(), DomainError);
  EXPECT_THROW(config_for(DetectorKind::Cfdc, share(ammse_basis(2))).validate(), DomainError);
  EXPECT_THROW(config_for(DetectorKind::Pcrr, share(ammse_basis(2))).validate(), DomainError);
  DetectorConfig c = config_for(DetectorKind::Dd);
  c.ifo_set = {};
  EXPECT_THROW(c.validate(), DomainError);
  c.ifo_set = {0, 6};
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_THROW(detect(SchWindow::zeros(3), config_for(DetectorKind::Dd)), DomainError);
}

TEST(Detect, ParseKind) {
  EXPECT_EQ(parse_detector_kind("dd"), DetectorKind::Dd);
  EXPECT_THROW(parse_detector_kind("ml"), DomainError);
}

TEST(Coefficients, InterpolatesSpanMembers) {
  std::mt19937_64 g(13);
  const ExpansionBasis b = prr_basis(4);
  // the PRR row at DC is (1, 0, 0, 0); a zero constant term keeps B xi null there
  CVector xi_true = test::random_cvector(g, 4);
  xi_true(0) = 0.0;
  const CVector h = b.matrix() * xi_true;
  SchRow x{};
  const PssSequence& a = pss_for(kU34);
  for (int m = -31; m <= 31; ++m) x[sch_slot(m - 2)] = h(pss_slot(m)) * a.at(m);
  const CVector xi = estimate_expansion_coeffs(x, b, kU34, -2);
  EXPECT_LT((b.matrix() * xi - h).norm(), 1e-10 * h.norm());
  EXPECT_NEAR(fit_residual(x, b, kU34, -2), 0.0, 1e-18 * row_energy(x) + 1e-20);
}

TEST(Coefficients, OrthonormalBasisIsAdjointProduct) {
  std::mt19937_64 g(14);
  const ExpansionBasis b = ammse_basis(6);
  const SchRow x = random_row(g);
  const DespreadVector z = despread(x, kU25, 1);
  const CVector expected = b.matrix().adjoint() * Eigen::Map<const CVector>(z.data(), 63);
  EXPECT_LT((estimate_expansion_coeffs(x, b, kU25, 1) - expected).norm(), 1e-12);
}

TEST(Coefficients, PcrrBlockAveragesOfCleanRow) {
  const CVector xi = estimate_expansion_coeffs(clean_pss_row(kU29, 0), pcrr_basis(5), kU29, 0);
  const double expected[] = {1.0, 1.0, 12.0 / 13.0, 1.0, 1.0};
  for (int p = 0; p < 5; ++p) EXPECT_NEAR(std::abs(xi(p) - expected[p]), 0.0, 1e-14);
}

TEST(NoiseVars, DataRowEstimates) {
  SchWindow w = SchWindow::zeros(3);
  for (auto& v : w.row(2)) v = std::polar(1.0, 0.3);
  const NoiseVarianceEstimates est = estimate_noise_vars(w, 3, 0.0);
  ASSERT_EQ(est.data_vars.size(), 2u);
  EXPECT_EQ(est.data_vars[0].first, 1);
  EXPECT_EQ(est.data_vars[0].second, 0.0);
  EXPECT_NEAR(est.data_vars[1].second, 1.0, 1e-15);
}

TEST(NoiseVars, GuardBinsOnlyResidual) {
  // full rank fits every PSS bin; only the guard-bin energy is left over
  SchRow x{};
  const PssSequence& a = pss_for(kU25);
  for (int m = -31; m <= 31; ++m) x[sch_slot(m)] = 0.5 * a.at(m);
  x[sch_slot(-36)] = 0.2;
  x[sch_slot(35)] = cplx(0.0, -0.1);
  const double r = fit_residual(x, pcrr_basis(63), kU25, 0);
  EXPECT_NEAR(r, 0.04 + 0.01, 1e-14);
  SchWindow w = SchWindow::zeros(2);
  w.row(1) = x;
  EXPECT_NEAR(estimate_noise_vars(w, 1, r).noise_var, 0.05 / 73.0, 1e-15);
}

}  // namespace
}  // namespace pssml
