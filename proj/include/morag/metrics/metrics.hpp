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

#pragma once

// Evaluation metrics over caller-supplied feature vectors (one per row).
// Every sampled metric draws from a single mt19937_64 stream seeded by the
// caller, so results are bit-reproducible for a given seed and input.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace morag::metrics {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct RPrecision {
  double top1 = 0.0;
  double top2 = 0.0;
  double top3 = 0.0;
};

// Uniform integer in [0, n) from raw engine output; unlike
// std::uniform_int_distribution the sequence does not depend on the
// standard library in use.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

// `count` distinct indices from [0, n) excluding `exclude`, in draw order.
std::vector<std::size_t> sample_distractors(std::mt19937_64& rng, std::size_t n,
                                            std::size_t exclude, std::size_t count);

// `count` distinct indices from [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(std::mt19937_64& rng, std::size_t n,
                                                    std::size_t count);

// For each motion i, ranks its own text against pool_size - 1 random other
// texts by Euclidean distance. The ground truth wins distance ties.
RPrecision r_precision(const FeatureMatrix& text, const FeatureMatrix& motion,
                       std::size_t pool_size, std::uint64_t seed);

double mm_dist(const FeatureMatrix& text, const FeatureMatrix& motion);

// Two disjoint index sets of `subset_size` each: first[i] pairs with second[i].
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> diversity_subsets(
    std::size_t rows, std::size_t subset_size, std::uint64_t seed);

double diversity(const FeatureMatrix& feats, std::size_t subset_size, std::uint64_t seed);

struct FeatureGroup {
  std::string label;
  FeatureMatrix rows;
};

// Mean over groups of the mean distance between `pairs` disjoint random
// pairs drawn inside each group.
double multimodality(const std::vector<FeatureGroup>& groups, std::size_t pairs,
                     std::uint64_t seed);

// Index pairs used for group g when multimodality runs with `seed`.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> multimodality_pairs(
    const std::vector<std::size_t>& group_sizes, std::size_t pairs, std::uint64_t seed);

}  // namespace morag::metrics
