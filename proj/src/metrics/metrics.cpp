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

#include "morag/metrics/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <unordered_map>

#include "morag/errors.hpp"
#include "morag/simd/kernels.hpp"

namespace morag::metrics {
namespace {

std::span<const double> row(const FeatureMatrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

double distance(const FeatureMatrix& a, Eigen::Index i, const FeatureMatrix& b, Eigen::Index j) {
  return std::sqrt(simd::squared_distance(row(a, i), row(b, j)));
}

void check_finite(const FeatureMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error(Errc::invalid_input, std::string(what) + " has non-finite values");
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_input, "uniform_below: empty range");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t x = rng();
  while (x > limit) x = rng();
  return x % n;
}

std::vector<std::size_t> sample_without_replacement(std::mt19937_64& rng, std::size_t n,
                                                    std::size_t count) {
  if (count > n) throw Error(Errc::insufficient_data, "cannot draw more samples than rows");
  // Partial Fisher-Yates; only displaced slots are materialized.
  std::unordered_map<std::size_t, std::size_t> moved;
  auto value_at = [&](std::size_t i) {
    const auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(uniform_below(rng, n - k));
    const std::size_t picked = value_at(j);
    moved[j] = value_at(k);
    out.push_back(picked);
  }
  return out;
}

std::vector<std::size_t> sample_distractors(std::mt19937_64& rng, std::size_t n,
                                            std::size_t exclude, std::size_t count) {
  if (n == 0 || count > n - 1) {
    throw Error(Errc::insufficient_data, "not enough rows for the distractor pool");
  }
  auto picks = sample_without_replacement(rng, n - 1, count);
  for (std::size_t& p : picks) {
    if (p >= exclude) ++p;
  }
  return picks;
}

RPrecision r_precision(const FeatureMatrix& text, const FeatureMatrix& motion,
                       std::size_t pool_size, std::uint64_t seed) {
  if (text.rows() != motion.rows() || text.cols() != motion.cols()) {
    throw Error(Errc::shape, "r_precision: text and motion features differ in shape");
  }
  if (pool_size < 1) throw Error(Errc::invalid_config, "pool size must be at least 1");
  const auto n = static_cast<std::size_t>(text.rows());
  if (n < pool_size) {
    throw Error(Errc::insufficient_data, "r_precision needs at least " +
                                             std::to_string(pool_size) + " rows, got " +
                                             std::to_string(n));
  }
  check_finite(text, "text features");
  check_finite(motion, "motion features");

  std::mt19937_64 rng(seed);
  std::array<std::size_t, 3> hits{};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double truth = distance(motion, ii, text, ii);
    std::size_t closer = 0;
    for (std::size_t d : sample_distractors(rng, n, i, pool_size - 1)) {
      if (distance(motion, ii, text, static_cast<Eigen::Index>(d)) < truth) ++closer;
    }
    for (std::size_t m = 0; m < 3; ++m) {
      if (closer <= m) ++hits[m];
    }
  }
  const double denom = static_cast<double>(n);
  return {hits[0] / denom, hits[1] / denom, hits[2] / denom};
}

double mm_dist(const FeatureMatrix& text, const FeatureMatrix& motion) {
  if (text.rows() != motion.rows() || text.cols() != motion.cols() || text.rows() == 0) {
    throw Error(Errc::shape, "mm_dist: text and motion features differ in shape");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < text.rows(); ++i) sum += distance(text, i, motion, i);
  return sum / static_cast<double>(text.rows());
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> diversity_subsets(
    std::size_t rows, std::size_t subset_size, std::uint64_t seed) {
  if (subset_size < 1) throw Error(Errc::invalid_config, "diversity subset size must be >= 1");
  if (rows < 2 * subset_size) {
    throw Error(Errc::insufficient_data, "diversity needs at least " +
                                             std::to_string(2 * subset_size) + " rows, got " +
                                             std::to_string(rows));
  }
  std::mt19937_64 rng(seed);
  auto picks = sample_without_replacement(rng, rows, 2 * subset_size);
  std::vector<std::size_t> second(picks.begin() + static_cast<std::ptrdiff_t>(subset_size),
                                  picks.end());
  picks.resize(subset_size);
  return {std::move(picks), std::move(second)};
}

double diversity(const FeatureMatrix& feats, std::size_t subset_size, std::uint64_t seed) {
  check_finite(feats, "features");
  const auto [first, second] =
      diversity_subsets(static_cast<std::size_t>(feats.rows()), subset_size, seed);
  double sum = 0.0;
  for (std::size_t i = 0; i < subset_size; ++i) {
    sum += distance(feats, static_cast<Eigen::Index>(first[i]), feats,
                    static_cast<Eigen::Index>(second[i]));
  }
  return sum / static_cast<double>(subset_size);
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> multimodality_pairs(
    const std::vector<std::size_t>& group_sizes, std::size_t pairs, std::uint64_t seed) {
  if (pairs < 1) throw Error(Errc::invalid_config, "multimodality needs at least one pair");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  out.reserve(group_sizes.size());
  for (std::size_t size : group_sizes) {
    const auto picks = sample_without_replacement(rng, size, 2 * pairs);
    auto& group = out.emplace_back();
    for (std::size_t p = 0; p < pairs; ++p) group.emplace_back(picks[2 * p], picks[2 * p + 1]);
  }
  return out;
}

double multimodality(const std::vector<FeatureGroup>& groups, std::size_t pairs,
                     std::uint64_t seed) {
  if (groups.empty()) throw Error(Errc::insufficient_data, "multimodality needs at least one group");
  std::vector<std::size_t> sizes;
  for (const FeatureGroup& g : groups) {
    if (static_cast<std::size_t>(g.rows.rows()) < 2 * pairs) {
      throw Error(Errc::insufficient_data, "group '" + g.label + "' has " +
                                               std::to_string(g.rows.rows()) + " rows, needs " +
                                               std::to_string(2 * pairs));
    }
    check_finite(g.rows, "group features");
    sizes.push_back(static_cast<std::size_t>(g.rows.rows()));
  }
  const auto all_pairs = multimodality_pairs(sizes, pairs, seed);
  double total = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (const auto& [a, b] : all_pairs[g]) {
      sum += distance(groups[g].rows, static_cast<Eigen::Index>(a), groups[g].rows,
                      static_cast<Eigen::Index>(b));
    }
    total += sum / static_cast<double>(pairs);
  }
  return total / static_cast<double>(groups.size());
}

}  // namespace morag::metrics
