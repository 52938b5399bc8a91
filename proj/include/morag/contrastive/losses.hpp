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

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "morag/motion/types.hpp"

namespace morag::contrastive {

inline constexpr std::size_t kEmbeddingDim = 256;

// Embedding tables keep one vector per row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Diagonal Gaussian; sigma is the standard deviation.
struct GaussianLatent {
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma;
};

// Throws Error(invalid_latent) on mismatched sizes or non-positive sigma.
void validate(const GaussianLatent& g);

// mu + sigma * noise, elementwise.
Eigen::VectorXd reparameterize(const GaussianLatent& g, const Eigen::VectorXd& noise);

// Clamped to [-1, 1]. Throws Error(degenerate_vector) for a zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// S(i, j) = cos(text row i, motion row j).
Eigen::MatrixXd similarity_matrix(const RowMatrix& text, const RowMatrix& motion);

// true = pair participates in the loss. Off-diagonal pairs whose text
// similarity is strictly above `threshold` are dropped; the diagonal is
// always kept.
Mask wrong_negative_mask(const Eigen::MatrixXd& text_sims, double threshold);

double infonce_loss(const Eigen::MatrixXd& s, double tau, const Mask& mask);

struct InfoNceResult {
  double loss = 0.0;
  Eigen::MatrixXd grad;  // d loss / d S
};
InfoNceResult infonce_loss_and_gradient(const Eigen::MatrixXd& s, double tau, const Mask& mask);

// KL(p || q) for diagonal Gaussians.
double kl_diag_gaussians(const GaussianLatent& p, const GaussianLatent& q);

// KL(text || N(0, I)) + KL(motion || N(0, I)) + KL(text || motion) + KL(motion || text).
double kl_loss(const GaussianLatent& text, const GaussianLatent& motion);

// Smooth-L1 (beta = 1), averaged over elements.
double smooth_l1(std::span<const double> a, std::span<const double> b);

double embedding_similarity_loss(const Eigen::VectorXd& text_embedding,
                                 const Eigen::VectorXd& motion_embedding);
double reconstruction_loss(const motion::FeatureSequence& decoded,
                           const motion::FeatureSequence& reference);

struct LossWeights {
  double lambda_kl = 1e-5;
  double lambda_e = 1e-5;
  double lambda_nce = 0.1;
  double tau = 0.1;
  double filter_threshold = 0.8;
};

// Throws Error(invalid_config) on negative weights, tau <= 0 or a threshold
// outside [-1, 1].
void validate(const LossWeights& w);

struct LossComponents {
  double reconstruction = 0.0;
  double kl = 0.0;
  double embedding = 0.0;
  double nce = 0.0;
};

double total_loss(const LossComponents& parts, const LossWeights& w);

}  // namespace morag::contrastive
