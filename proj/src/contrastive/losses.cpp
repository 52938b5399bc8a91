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

#include "morag/contrastive/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "morag/errors.hpp"
#include "morag/simd/kernels.hpp"

namespace morag::contrastive {
namespace {

std::span<const double> row_span(const RowMatrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

double smooth_l1_term(double d) {
  const double a = std::abs(d);
  return a < 1.0 ? 0.5 * d * d : a - 0.5;
}

// log sum_j exp(x_j) over the selected entries, shifted by their maximum.
template <typename Values, typename Keep>
double masked_logsumexp(Eigen::Index n, Values value, Keep keep) {
  double max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (keep(j)) max = std::max(max, value(j));
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (keep(j)) sum += std::exp(value(j) - max);
  }
  return max + std::log(sum);
}

void check_square_mask(const Eigen::MatrixXd& s, double tau, const Mask& mask) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw Error(Errc::shape, "similarity matrix must be square and non-empty");
  }
  if (mask.rows() != s.rows() || mask.cols() != s.cols()) {
    throw Error(Errc::shape, "mask shape does not match similarity matrix");
  }
  if (!(tau > 0.0)) throw Error(Errc::invalid_config, "temperature must be positive");
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    if (!mask(i, i)) {
      throw Error(Errc::invalid_mask, "mask drops positive pair " + std::to_string(i));
    }
  }
}

}  // namespace

void validate(const GaussianLatent& g) {
  if (g.mu.size() != g.sigma.size()) {
    throw Error(Errc::invalid_latent, "mu and sigma sizes differ");
  }
  for (Eigen::Index i = 0; i < g.sigma.size(); ++i) {
    if (!(g.sigma[i] > 0.0)) {
      throw Error(Errc::invalid_latent, "sigma must be positive (index " + std::to_string(i) + ")");
    }
  }
}

Eigen::VectorXd reparameterize(const GaussianLatent& g, const Eigen::VectorXd& noise) {
  if (g.mu.size() != g.sigma.size() || noise.size() != g.mu.size()) {
    throw Error(Errc::shape, "reparameterize: dimension mismatch");
  }
  return g.mu + g.sigma.cwiseProduct(noise);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(Errc::shape, "cosine_similarity: dimension mismatch");
  const double na = std::sqrt(simd::squared_norm(a));
  const double nb = std::sqrt(simd::squared_norm(b));
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(Errc::degenerate_vector, "cosine_similarity: zero-norm vector");
  }
  return std::clamp(simd::dot(a, b) / (na * nb), -1.0, 1.0);
}

Eigen::MatrixXd similarity_matrix(const RowMatrix& text, const RowMatrix& motion) {
  if (text.rows() != motion.rows() || text.cols() != motion.cols()) {
    throw Error(Errc::shape, "similarity_matrix: text and motion tables differ in shape");
  }
  const Eigen::Index n = text.rows();
  Eigen::VectorXd text_norm(n), motion_norm(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    text_norm[i] = std::sqrt(simd::squared_norm(row_span(text, i)));
    motion_norm[i] = std::sqrt(simd::squared_norm(row_span(motion, i)));
    if (!(text_norm[i] > 0.0)) {
      throw Error(Errc::degenerate_vector, "zero-norm text embedding at row " + std::to_string(i));
    }
    if (!(motion_norm[i] > 0.0)) {
      throw Error(Errc::degenerate_vector,
                  "zero-norm motion embedding at row " + std::to_string(i));
    }
  }
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = simd::dot(row_span(text, i), row_span(motion, j));
      s(i, j) = std::clamp(d / (text_norm[i] * motion_norm[j]), -1.0, 1.0);
    }
  }
  return s;
}

Mask wrong_negative_mask(const Eigen::MatrixXd& text_sims, double threshold) {
  if (text_sims.rows() != text_sims.cols()) {
    throw Error(Errc::shape, "text similarity matrix must be square");
  }
  Mask keep = (text_sims.array() <= threshold);
  keep.matrix().diagonal().setConstant(true);
  return keep;
}

InfoNceResult infonce_loss_and_gradient(const Eigen::MatrixXd& s, double tau, const Mask& mask) {
  check_square_mask(s, tau, mask);
  const Eigen::Index n = s.rows();
  InfoNceResult out;
  out.grad = Eigen::MatrixXd::Zero(n, n);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  double total = 0.0;

  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_lse = masked_logsumexp(
        n, [&](Eigen::Index j) { return s(i, j) / tau; }, [&](Eigen::Index j) { return mask(i, j); });
    const double col_lse = masked_logsumexp(
        n, [&](Eigen::Index j) { return s(j, i) / tau; }, [&](Eigen::Index j) { return mask(j, i); });
    total += (s(i, i) / tau - row_lse) + (s(i, i) / tau - col_lse);

    // Softmax weights flow back as +p/tau; the positive term as -1/tau.
    for (Eigen::Index j = 0; j < n; ++j) {
      if (mask(i, j)) out.grad(i, j) += std::exp(s(i, j) / tau - row_lse) / tau;
      if (mask(j, i)) out.grad(j, i) += std::exp(s(j, i) / tau - col_lse) / tau;
    }
    out.grad(i, i) -= 2.0 / tau;
  }
  out.loss = -total / (2.0 * static_cast<double>(n));
  out.grad *= scale;
  return out;
}

double infonce_loss(const Eigen::MatrixXd& s, double tau, const Mask& mask) {
  check_square_mask(s, tau, mask);
  const Eigen::Index n = s.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row_lse = masked_logsumexp(
        n, [&](Eigen::Index j) { return s(i, j) / tau; }, [&](Eigen::Index j) { return mask(i, j); });
    const double col_lse = masked_logsumexp(
        n, [&](Eigen::Index j) { return s(j, i) / tau; }, [&](Eigen::Index j) { return mask(j, i); });
    total += (s(i, i) / tau - row_lse) + (s(i, i) / tau - col_lse);
  }
  return -total / (2.0 * static_cast<double>(n));
}

double kl_diag_gaussians(const GaussianLatent& p, const GaussianLatent& q) {
  validate(p);
  validate(q);
  if (p.mu.size() != q.mu.size()) throw Error(Errc::shape, "KL: dimension mismatch");
  double kl = 0.0;
  for (Eigen::Index d = 0; d < p.mu.size(); ++d) {
    const double sp = p.sigma[d], sq = q.sigma[d];
    const double dm = p.mu[d] - q.mu[d];
    kl += std::log(sq / sp) + (sp * sp + dm * dm) / (2.0 * sq * sq) - 0.5;
  }
  return kl;
}

double kl_loss(const GaussianLatent& text, const GaussianLatent& motion) {
  validate(text);
  const Eigen::Index d = text.mu.size();
  const GaussianLatent standard{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
  return kl_diag_gaussians(text, standard) + kl_diag_gaussians(motion, standard) +
         kl_diag_gaussians(text, motion) + kl_diag_gaussians(motion, text);
}

double smooth_l1(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(Errc::shape, "smooth_l1: size mismatch");
  if (a.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += smooth_l1_term(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

double embedding_similarity_loss(const Eigen::VectorXd& text_embedding,
                                 const Eigen::VectorXd& motion_embedding) {
  if (text_embedding.size() != motion_embedding.size()) {
    throw Error(Errc::shape, "embedding_similarity_loss: dimension mismatch");
  }
  return smooth_l1({text_embedding.data(), static_cast<std::size_t>(text_embedding.size())},
                   {motion_embedding.data(), static_cast<std::size_t>(motion_embedding.size())});
}

double reconstruction_loss(const motion::FeatureSequence& decoded,
                           const motion::FeatureSequence& reference) {
  if (decoded.frames() != reference.frames()) {
    throw Error(Errc::shape, "reconstruction_loss: frame counts differ (" +
                                 std::to_string(decoded.frames()) + " vs " +
                                 std::to_string(reference.frames()) + ")");
  }
  return smooth_l1(decoded.data(), reference.data());
}

void validate(const LossWeights& w) {
  if (w.lambda_kl < 0.0 || w.lambda_e < 0.0 || w.lambda_nce < 0.0) {
    throw Error(Errc::invalid_config, "loss weights must be non-negative");
  }
  if (!(w.tau > 0.0)) throw Error(Errc::invalid_config, "loss.tau must be positive");
  if (!(w.filter_threshold >= -1.0 && w.filter_threshold <= 1.0)) {
    throw Error(Errc::invalid_config, "loss.filter_threshold must lie in [-1, 1]");
  }
}

double total_loss(const LossComponents& parts, const LossWeights& w) {
  return parts.reconstruction + w.lambda_kl * parts.kl + w.lambda_e * parts.embedding +
         w.lambda_nce * parts.nce;
}

}  // namespace morag::contrastive
