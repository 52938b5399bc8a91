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

#include <Eigen/Dense>

#include "morag/metrics/metrics.hpp"

namespace morag::metrics {

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Sample mean and unbiased covariance. Needs at least two rows.
GaussianStats gaussian_stats(const FeatureMatrix& feats);

// Throws Error(invalid_stats) if the covariance is not symmetric or has
// eigenvalues meaningfully below zero.
void validate(const GaussianStats& s);

// |mu_a - mu_b|^2 + Tr(Sa + Sb - 2 (Sa Sb)^{1/2}). The trace of the square
// root comes from the eigenvalues of Sa^{1/2} Sb Sa^{1/2}, which is
// symmetric PSD; tiny negative eigenvalues are clamped to zero.
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

}  // namespace morag::metrics
