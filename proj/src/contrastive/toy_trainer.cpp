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

#include "morag/contrastive/toy_trainer.hpp"

#include <cmath>
#include <random>
#include <string>

#include "morag/errors.hpp"

namespace morag::contrastive {
namespace {

// d/dz of z / |z| applied to an upstream gradient g.
Eigen::VectorXd normalize_backward(const Eigen::VectorXd& unit, double norm,
                                   const Eigen::VectorXd& g) {
  return (g - unit * unit.dot(g)) / norm;
}

}  // namespace

void validate(const TrainingPairs& pairs) {
  const auto n = pairs.text_features.rows();
  if (n < 2) throw Error(Errc::shape, "toy training needs at least 2 pairs");
  if (pairs.motion_features.rows() != n) {
    throw Error(Errc::shape, "text and motion feature tables have different row counts");
  }
  if (pairs.text_features.cols() < 1 || pairs.motion_features.cols() < 1) {
    throw Error(Errc::shape, "feature dimensions must be at least 1");
  }
  if (pairs.text_sims && (pairs.text_sims->rows() != n || pairs.text_sims->cols() != n)) {
    throw Error(Errc::shape, "text similarity matrix must be N x N");
  }
}

ToyProjection init_projection(std::size_t text_dim, std::size_t motion_dim,
                              std::size_t embedding_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&](std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(cols)));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
    }
    return m;
  };
  ToyProjection p;
  p.text_map = draw(embedding_dim, text_dim);
  p.motion_map = draw(embedding_dim, motion_dim);
  return p;
}

ToyObjective toy_objective(const ToyProjection& params, const TrainingPairs& pairs,
                           const LossWeights& weights) {
  validate(pairs);
  validate(weights);
  if (params.text_map.cols() != pairs.text_features.cols() ||
      params.motion_map.cols() != pairs.motion_features.cols() ||
      params.text_map.rows() != params.motion_map.rows()) {
    throw Error(Errc::shape, "projection shapes do not match the training features");
  }
  const Eigen::Index n = pairs.text_features.rows();
  const Eigen::Index e = params.text_map.rows();

  // Embeddings as columns: E x N.
  const Eigen::MatrixXd zt = params.text_map * pairs.text_features.transpose();
  const Eigen::MatrixXd zm = params.motion_map * pairs.motion_features.transpose();

  Eigen::VectorXd nt(n), nm(n);
  Eigen::MatrixXd ut(e, n), um(e, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    nt[i] = zt.col(i).norm();
    nm[i] = zm.col(i).norm();
    if (!(nt[i] > 0.0) || !(nm[i] > 0.0)) {
      throw Error(Errc::degenerate_vector, "projected embedding " + std::to_string(i) + " is zero");
    }
    ut.col(i) = zt.col(i) / nt[i];
    um.col(i) = zm.col(i) / nm[i];
  }
  const Eigen::MatrixXd s = ut.transpose() * um;

  const Mask mask = pairs.text_sims ? wrong_negative_mask(*pairs.text_sims, weights.filter_threshold)
                                    : Mask::Constant(n, n, true);
  const InfoNceResult nce = infonce_loss_and_gradient(s, weights.tau, mask);

  // Smooth-L1 between paired embeddings, averaged over elements and pairs.
  const Eigen::MatrixXd diff = zt - zm;
  const double denom = static_cast<double>(n * e);
  double e_loss = 0.0;
  Eigen::MatrixXd e_grad(e, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < e; ++k) {
      const double d = diff(k, i);
      const double a = std::abs(d);
      e_loss += a < 1.0 ? 0.5 * d * d : a - 0.5;
      e_grad(k, i) = (a < 1.0 ? d : (d > 0.0 ? 1.0 : -1.0)) / denom;
    }
  }
  e_loss /= denom;

  // Backprop S = ut^T um through the normalizations.
  const Eigen::MatrixXd g_ut = um * nce.grad.transpose();
  const Eigen::MatrixXd g_um = ut * nce.grad;
  Eigen::MatrixXd g_zt = weights.lambda_e * e_grad;
  Eigen::MatrixXd g_zm = -weights.lambda_e * e_grad;
  for (Eigen::Index i = 0; i < n; ++i) {
    g_zt.col(i) += weights.lambda_nce * normalize_backward(ut.col(i), nt[i], g_ut.col(i));
    g_zm.col(i) += weights.lambda_nce * normalize_backward(um.col(i), nm[i], g_um.col(i));
  }

  ToyObjective out;
  out.embedding_loss = e_loss;
  out.nce_loss = nce.loss;
  out.loss = weights.lambda_e * e_loss + weights.lambda_nce * nce.loss;
  out.gradient.text_map = g_zt * pairs.text_features;
  out.gradient.motion_map = g_zm * pairs.motion_features;
  return out;
}

TrainResult train_toy_projection(const TrainingPairs& pairs, const LossWeights& weights,
                                 const TrainOptions& options) {
  validate(pairs);
  validate(weights);
  if (options.embedding_dim < 1) throw Error(Errc::invalid_config, "embedding_dim must be >= 1");
  if (!(options.learning_rate >= 0.0) || !std::isfinite(options.learning_rate)) {
    throw Error(Errc::invalid_config, "learning rate must be finite and non-negative");
  }

  TrainResult result;
  result.projection = init_projection(static_cast<std::size_t>(pairs.text_features.cols()),
                                      static_cast<std::size_t>(pairs.motion_features.cols()),
                                      options.embedding_dim, options.seed);
  result.loss_trace.reserve(options.epochs + 1);
  result.nce_trace.reserve(options.epochs + 1);

  for (std::size_t epoch = 0; epoch <= options.epochs; ++epoch) {
    ToyObjective obj;
    try {
      obj = toy_objective(result.projection, pairs, weights);
    } catch (const Error& e) {
      // A projection that overflowed or collapsed mid-run is a training failure,
      // not bad input.
      if (epoch == 0 || e.code() != Errc::degenerate_vector) throw;
      throw Error(Errc::training_diverged,
                  "projection degenerated at epoch " + std::to_string(epoch) + ": " + e.what());
    }
    if (!std::isfinite(obj.loss)) {
      throw Error(Errc::training_diverged,
                  "objective became non-finite at epoch " + std::to_string(epoch));
    }
    result.loss_trace.push_back(obj.loss);
    result.nce_trace.push_back(obj.nce_loss);
    if (epoch == options.epochs) break;
    result.projection.text_map -= options.learning_rate * obj.gradient.text_map;
    result.projection.motion_map -= options.learning_rate * obj.gradient.motion_map;
    if (!result.projection.text_map.allFinite() || !result.projection.motion_map.allFinite()) {
      throw Error(Errc::training_diverged,
                  "parameters became non-finite at epoch " + std::to_string(epoch));
    }
  }
  return result;
}

}  // namespace morag::contrastive
