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

// Desk-scale stand-in for the part-specific encoder training: two linear
// maps project raw text and motion features into a shared embedding space
// and are fitted by full-batch gradient descent on
//   lambda_e * mean_i smoothL1(Zt_i, Zm_i) + lambda_nce * InfoNCE(S).
// The KL and reconstruction terms need a decoder and are not part of this
// objective.

#include <cstdint>
#include <optional>
#include <vector>

#include "morag/contrastive/losses.hpp"

namespace morag::contrastive {

struct TrainingPairs {
  RowMatrix text_features;    // N x D_t
  RowMatrix motion_features;  // N x D_m
  // Optional N x N text-description similarities for wrong-negative filtering.
  std::optional<Eigen::MatrixXd> text_sims;
};

struct ToyProjection {
  Eigen::MatrixXd text_map;    // E x D_t
  Eigen::MatrixXd motion_map;  // E x D_m
};

struct ToyObjective {
  double loss = 0.0;
  double embedding_loss = 0.0;
  double nce_loss = 0.0;
  ToyProjection gradient;
};

struct TrainOptions {
  std::size_t epochs = 1000;
  double learning_rate = 5.0;  // gradients are scaled by lambda_nce and unit normalization
  std::uint64_t seed = 0;
  std::size_t embedding_dim = kEmbeddingDim;
};

struct TrainResult {
  ToyProjection projection;
  // Objective before each update plus one entry after the last update.
  std::vector<double> loss_trace;
  std::vector<double> nce_trace;
};

// Throws Error(shape) for fewer than two pairs or mismatched tables.
void validate(const TrainingPairs& pairs);

// Gaussian init with variance 1 / fan_in, deterministic in `seed`.
ToyProjection init_projection(std::size_t text_dim, std::size_t motion_dim,
                              std::size_t embedding_dim, std::uint64_t seed);

// Objective value and its analytic gradient with respect to both maps.
ToyObjective toy_objective(const ToyProjection& params, const TrainingPairs& pairs,
                           const LossWeights& weights);

// Throws Error(training_diverged) when the objective stops being finite.
TrainResult train_toy_projection(const TrainingPairs& pairs, const LossWeights& weights,
                                 const TrainOptions& options);

}  // namespace morag::contrastive
