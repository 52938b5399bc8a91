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

#include "morag/metrics/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morag/errors.hpp"

namespace morag::metrics {
namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kEigenTolerance = 1e-10;

double scale_of(const Eigen::MatrixXd& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

// Eigenvalues within roundoff of zero are truncated: left in, their square
// roots (about 1e-8 of the scale) would swamp the trace term.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double cutoff = 16.0 * static_cast<double>(ev.size()) *
                        std::numeric_limits<double>::epsilon() * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd root(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) root[i] = ev[i] > cutoff ? std::sqrt(ev[i]) : 0.0;
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

GaussianStats gaussian_stats(const FeatureMatrix& feats) {
  if (feats.rows() < 2) {
    throw Error(Errc::insufficient_data, "gaussian_stats needs at least 2 rows");
  }
  if (!feats.allFinite()) throw Error(Errc::invalid_input, "features have non-finite values");
  GaussianStats s;
  s.mean = feats.colwise().mean().transpose();
  const Eigen::MatrixXd centered = feats.rowwise() - s.mean.transpose();
  s.covariance = (centered.transpose() * centered) / static_cast<double>(feats.rows() - 1);
  return s;
}

void validate(const GaussianStats& s) {
  const Eigen::MatrixXd& c = s.covariance;
  if (c.rows() != c.cols() || c.rows() != s.mean.size()) {
    throw Error(Errc::invalid_stats, "covariance shape does not match mean");
  }
  if (!c.allFinite() || !s.mean.allFinite()) {
    throw Error(Errc::invalid_stats, "statistics contain non-finite values");
  }
  const double scale = scale_of(c);
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(Errc::invalid_stats, "covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kEigenTolerance * scale) {
    throw Error(Errc::invalid_stats, "covariance is indefinite (min eigenvalue " +
                                         std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  validate(a);
  validate(b);
  if (a.mean.size() != b.mean.size()) {
    throw Error(Errc::shape, "frechet_distance: dimension mismatch");
  }
  // tr sqrt(A^1/2 B A^1/2) is the sum of singular values of B^1/2 A^1/2, which
  // is symmetric in A and B and never takes roots of noisy eigenvalues.
  const Eigen::MatrixXd sqrt_a = psd_sqrt(0.5 * (a.covariance + a.covariance.transpose()));
  const Eigen::MatrixXd sqrt_b = psd_sqrt(0.5 * (b.covariance + b.covariance.transpose()));
  const Eigen::MatrixXd product = sqrt_b * sqrt_a;
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(product);
  const double trace_sqrt = svd.singularValues().sum();
  const double mean_term = (a.mean - b.mean).squaredNorm();
  return mean_term + a.covariance.trace() + b.covariance.trace() - 2.0 * trace_sqrt;
}

}  // namespace morag::metrics
