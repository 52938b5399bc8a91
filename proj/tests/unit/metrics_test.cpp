// Copyright 2026 The MoRAG Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "expect_error.hpp"
#include "generators.hpp"
#include "morag/metrics/frechet.hpp"
#include "morag/metrics/metrics.hpp"

namespace morag::metrics {
namespace {

FeatureMatrix gaussian_rows(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  FeatureMatrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = testing::normal(rng);
  return m;
}

double row_dist(const FeatureMatrix& a, Eigen::Index i, const FeatureMatrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).norm();
}

TEST(UniformBelow, RangeAndRoughUniformity) {
  std::mt19937_64 rng(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[uniform_below(rng, 7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_ERRC(uniform_below(rng, 0), Errc::invalid_input);
}

TEST(SampleWithoutReplacement, DistinctAndInRange) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {1u, 5u, 100u, 100000u}) {
    const auto picks = sample_without_replacement(rng, n, std::min<std::size_t>(n, 50));
    std::set<std::size_t> s(picks.begin(), picks.end());
    EXPECT_EQ(s.size(), picks.size());
    for (std::size_t p : picks) EXPECT_LT(p, n);
  }
  const auto all = sample_without_replacement(rng, 10, 10);
  EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()).size(), 10u);
  EXPECT_ERRC(sample_without_replacement(rng, 3, 4), Errc::insufficient_data);
}

TEST(SampleDistractors, NeverPicksExcluded) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t exclude = uniform_below(rng, 40);
    for (std::size_t d : sample_distractors(rng, 40, exclude, 31)) {
      EXPECT_NE(d, exclude);
      EXPECT_LT(d, 40u);
    }
  }
  EXPECT_NO_THROW(sample_distractors(rng, 32, 0, 31));
  EXPECT_ERRC(sample_distractors(rng, 31, 0, 31), Errc::insufficient_data);
}

TEST(RPrecision, PerfectAlignmentScoresOne) {
  std::mt19937_64 rng(4);
  const auto f = gaussian_rows(rng, 100, 8);
  const auto r = r_precision(f, f, 32, 0);
  EXPECT_EQ(r.top1, 1.0);
  EXPECT_EQ(r.top2, 1.0);
  EXPECT_EQ(r.top3, 1.0);
}

TEST(RPrecision, IndependentFeaturesSitAtChance) {
  std::mt19937_64 rng(5);
  const auto t = gaussian_rows(rng, 4000, 4);
  const auto m = gaussian_rows(rng, 4000, 4);
  const auto r = r_precision(t, m, 32, 7);
  EXPECT_NEAR(r.top1, 1.0 / 32, 0.012);
  EXPECT_NEAR(r.top2, 2.0 / 32, 0.015);
  EXPECT_NEAR(r.top3, 3.0 / 32, 0.018);
  EXPECT_LE(r.top1, r.top2);
  EXPECT_LE(r.top2, r.top3);
}

TEST(RPrecision, DeterministicPerSeed) {
  std::mt19937_64 rng(6);
  const auto t = gaussian_rows(rng, 300, 6);
  const auto m = gaussian_rows(rng, 300, 6);
  const auto a = r_precision(t, m, 32, 11);
  const auto b = r_precision(t, m, 32, 11);
  EXPECT_EQ(a.top1, b.top1);
  EXPECT_EQ(a.top3, b.top3);
}

TEST(RPrecision, Errors) {
  std::mt19937_64 rng(7);
  const auto t = gaussian_rows(rng, 31, 4);
  EXPECT_ERRC(r_precision(t, t, 32, 0), Errc::insufficient_data);
  EXPECT_ERRC(r_precision(t, gaussian_rows(rng, 30, 4), 16, 0), Errc::shape);
  EXPECT_ERRC(r_precision(t, t, 0, 0), Errc::invalid_config);
  auto bad = t;
  bad(3, 1) = std::nan("");
  EXPECT_ERRC(r_precision(bad, t, 16, 0), Errc::invalid_input);
}

TEST(MmDist, MatchesDirectMean) {
  std::mt19937_64 rng(8);
  const auto t = gaussian_rows(rng, 50, 5);
  const auto m = gaussian_rows(rng, 50, 5);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < 50; ++i) sum += row_dist(t, i, m, i);
  EXPECT_NEAR(mm_dist(t, m), sum / 50, 1e-12);
  EXPECT_EQ(mm_dist(t, t), 0.0);
  EXPECT_ERRC(mm_dist(t, gaussian_rows(rng, 49, 5)), Errc::shape);
}

TEST(Diversity, MatchesSubsetOracle) {
  std::mt19937_64 rng(9);
  const auto f = gaussian_rows(rng, 700, 12);
  const auto [a, b] = diversity_subsets(700, 300, 3);
  ASSERT_EQ(a.size(), 300u);
  std::set<std::size_t> all(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  EXPECT_EQ(all.size(), 600u);
  double sum = 0.0;
  for (std::size_t i = 0; i < 300; ++i) {
    sum += row_dist(f, static_cast<Eigen::Index>(a[i]), f, static_cast<Eigen::Index>(b[i]));
  }
  EXPECT_NEAR(diversity(f, 300, 3), sum / 300, 1e-12);
}

TEST(Diversity, GaussianExpectation) {
  // For standard normal rows, |x - y|^2 / 2 is chi-square with d dof.
  std::mt19937_64 rng(10);
  const Eigen::Index d = 64;
  const auto f = gaussian_rows(rng, 20000, d);
  const double expected = std::sqrt(2.0) * std::sqrt(2.0) *
                          std::exp(std::lgamma((d + 1) / 2.0) - std::lgamma(d / 2.0));
  EXPECT_NEAR(diversity(f, 10000, 1), expected, 0.02 * expected);
}

TEST(Diversity, Errors) {
  std::mt19937_64 rng(11);
  const auto f = gaussian_rows(rng, 599, 3);
  EXPECT_ERRC(diversity(f, 300, 0), Errc::insufficient_data);
  EXPECT_ERRC(diversity(f, 0, 0), Errc::invalid_config);
}

TEST(Multimodality, AveragesPerGroup) {
  std::mt19937_64 rng(12);
  std::vector<FeatureGroup> groups = {{"walk", gaussian_rows(rng, 25, 4)},
                                      {"jump", gaussian_rows(rng, 40, 4)}};
  groups[1].rows *= 3.0;
  const auto pairs = multimodality_pairs({25, 40}, 10, 5);
  double total = 0.0;
  for (std::size_t g = 0; g < 2; ++g) {
    double s = 0.0;
    std::set<std::size_t> used;
    for (const auto& [x, y] : pairs[g]) {
      EXPECT_TRUE(used.insert(x).second);
      EXPECT_TRUE(used.insert(y).second);
      s += row_dist(groups[g].rows, static_cast<Eigen::Index>(x), groups[g].rows,
                    static_cast<Eigen::Index>(y));
    }
    total += s / 10;
  }
  EXPECT_NEAR(multimodality(groups, 10, 5), total / 2, 1e-12);
}

TEST(Multimodality, IdenticalRowsGiveZero) {
  FeatureMatrix same(20, 3);
  same.rowwise() = Eigen::RowVector3d(1, 2, 3);
  EXPECT_EQ(multimodality({{"a", same}}, 10, 0), 0.0);
}

TEST(Multimodality, Errors) {
  std::mt19937_64 rng(13);
  EXPECT_ERRC(multimodality({}, 10, 0), Errc::insufficient_data);
  EXPECT_ERRC(multimodality({{"small", gaussian_rows(rng, 19, 3)}}, 10, 0), Errc::insufficient_data);
  EXPECT_ERRC(multimodality({{"a", gaussian_rows(rng, 20, 3)}}, 0, 0), Errc::invalid_config);
}

TEST(GaussianStats, MatchesTwoPassOracle) {
  std::mt19937_64 rng(14);
  const auto f = gaussian_rows(rng, 30, 4);
  const auto s = gaussian_stats(f);
  for (Eigen::Index a = 0; a < 4; ++a) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < 30; ++i) mean += f(i, a);
    mean /= 30;
    EXPECT_NEAR(s.mean[a], mean, 1e-12);
  }
  for (Eigen::Index a = 0; a < 4; ++a) {
    for (Eigen::Index b = 0; b < 4; ++b) {
      double c = 0.0;
      for (Eigen::Index i = 0; i < 30; ++i) c += (f(i, a) - s.mean[a]) * (f(i, b) - s.mean[b]);
      EXPECT_NEAR(s.covariance(a, b), c / 29, 1e-12);
    }
  }
  EXPECT_ERRC(gaussian_stats(gaussian_rows(rng, 1, 4)), Errc::insufficient_data);
}

GaussianStats diag_stats(Eigen::VectorXd mean, Eigen::VectorXd var) {
  return {std::move(mean), var.asDiagonal()};
}

TEST(Frechet, ClosedFormDiagonal) {
  Eigen::VectorXd m1(3), m2(3), v1(3), v2(3);
  m1 << 0, 1, 2;
  m2 << 1, 1, 0;
  v1 << 1, 4, 9;
  v2 << 4, 4, 1;
  // |m1 - m2|^2 + sum (sqrt v1 - sqrt v2)^2 = 5 + (1 + 0 + 4)
  EXPECT_NEAR(frechet_distance(diag_stats(m1, v1), diag_stats(m2, v2)), 10.0, 1e-10);
}

TEST(Frechet, ClosedFormOneDimensional) {
  Eigen::VectorXd m1(1), m2(1), v1(1), v2(1);
  m1 << 0.5;
  m2 << -1.0;
  v1 << 2.0;
  v2 << 0.5;
  const double expected = 2.25 + std::pow(std::sqrt(2.0) - std::sqrt(0.5), 2);
  EXPECT_NEAR(frechet_distance(diag_stats(m1, v1), diag_stats(m2, v2)), expected, 1e-12);
}

TEST(Frechet, IdenticalIsZeroAndSymmetric) {
  std::mt19937_64 rng(15);
  const auto a = gaussian_stats(gaussian_rows(rng, 200, 6));
  auto shifted = gaussian_rows(rng, 200, 6);
  shifted.array() = shifted.array() * 1.5 + 0.3;
  const auto b = gaussian_stats(shifted);
  EXPECT_NEAR(frechet_distance(a, a), 0.0, 1e-9);
  EXPECT_NEAR(frechet_distance(a, b), frechet_distance(b, a), 1e-9);
  EXPECT_GT(frechet_distance(a, b), 0.0);
}

TEST(Frechet, RotationInvariant) {
  std::mt19937_64 rng(16);
  const auto f = gaussian_rows(rng, 100, 3);
  auto g = gaussian_rows(rng, 100, 3);
  g.array() *= 2.0;
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const FeatureMatrix fr = f * rot.transpose();
  const FeatureMatrix gr = g * rot.transpose();
  EXPECT_NEAR(frechet_distance(gaussian_stats(f), gaussian_stats(g)),
              frechet_distance(gaussian_stats(fr), gaussian_stats(gr)), 1e-9);
}

TEST(Frechet, RankDeficientCovariances) {
  // Fewer samples than dimensions: both covariances are singular.
  std::mt19937_64 rng(17);
  const auto a = gaussian_stats(gaussian_rows(rng, 10, 40));
  const auto b = gaussian_stats(gaussian_rows(rng, 7, 40));
  EXPECT_NEAR(frechet_distance(a, a), 0.0, 1e-10);
  EXPECT_NEAR(frechet_distance(a, b), frechet_distance(b, a), 1e-10);
  // Disjoint-support oracle: zero means and orthogonal ranges make the cross term vanish.
  Eigen::MatrixXd ca = Eigen::MatrixXd::Zero(4, 4), cb = Eigen::MatrixXd::Zero(4, 4);
  ca(0, 0) = 2.0;
  ca(1, 1) = 3.0;
  cb(2, 2) = 5.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  EXPECT_NEAR(frechet_distance({zero, ca}, {zero, cb}), 10.0, 1e-12);
}

TEST(Frechet, RejectsBadStats) {
  Eigen::VectorXd m(2);
  m << 0, 0;
  GaussianStats good{m, Eigen::Matrix2d::Identity()};
  GaussianStats asym{m, Eigen::Matrix2d::Identity()};
  asym.covariance(0, 1) = 0.5;
  EXPECT_ERRC(frechet_distance(asym, good), Errc::invalid_stats);
  GaussianStats indef{m, Eigen::Matrix2d::Identity()};
  indef.covariance(1, 1) = -1.0;
  EXPECT_ERRC(frechet_distance(good, indef), Errc::invalid_stats);
  GaussianStats nan{m, Eigen::Matrix2d::Identity()};
  nan.mean[0] = std::nan("");
  EXPECT_ERRC(validate(nan), Errc::invalid_stats);
  Eigen::VectorXd m3 = Eigen::VectorXd::Zero(3);
  EXPECT_ERRC(frechet_distance(good, GaussianStats{m3, Eigen::Matrix3d::Identity()}), Errc::shape);
  EXPECT_ERRC(validate(GaussianStats{m3, Eigen::Matrix2d::Identity()}), Errc::invalid_stats);
}

}  // namespace
}  // namespace morag::metrics
