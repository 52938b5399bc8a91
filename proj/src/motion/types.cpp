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

#include "morag/motion/types.hpp"

#include <cmath>
#include <string>

#include "morag/errors.hpp"

namespace morag::motion {
namespace {

bool finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Gram-Schmidt on the two stored columns; both must survive with a
// non-negligible norm.
bool rotation_nondegenerate(const Rot6& r) {
  const double a0 = r[0], a1 = r[1], a2 = r[2];
  const double b0 = r[3], b1 = r[4], b2 = r[5];
  const double na = std::sqrt(a0 * a0 + a1 * a1 + a2 * a2);
  const double nb = std::sqrt(b0 * b0 + b1 * b1 + b2 * b2);
  if (!(na > 1e-12) || !(nb > 1e-12)) return false;
  const double proj = (a0 * b0 + a1 * b1 + a2 * b2) / (na * na);
  const double c0 = b0 - proj * a0, c1 = b1 - proj * a1, c2 = b2 - proj * a2;
  return std::sqrt(c0 * c0 + c1 * c1 + c2 * c2) > 1e-9 * nb;
}

}  // namespace

Vec3 rotate_y(const Vec3& v, double angle) noexcept {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]};
}

Vec3 world_position(const Pose& p, std::size_t j) noexcept {
  const Vec3 r = rotate_y(p.joint_positions[j], p.root_heading);
  return {p.root_translation[0] + r[0], p.root_translation[1] + r[1],
          p.root_translation[2] + r[2]};
}

void validate(const JointMotion& m) {
  if (m.poses.empty()) throw Error(Errc::invalid_input, "motion has no frames");
  if (!(m.fps > 0.0) || !std::isfinite(m.fps)) {
    throw Error(Errc::invalid_input, "fps must be positive and finite");
  }
  for (std::size_t t = 0; t < m.poses.size(); ++t) {
    const Pose& p = m.poses[t];
    bool ok = finite(p.root_translation) && std::isfinite(p.root_heading);
    for (const Vec3& v : p.joint_positions) ok = ok && finite(v);
    for (const Rot6& r : p.joint_rotations) ok = ok && finite(r);
    if (!ok) throw Error(Errc::invalid_input, "non-finite value at frame " + std::to_string(t));
    for (std::size_t j = 0; j < kNumRotations; ++j) {
      if (!rotation_nondegenerate(p.joint_rotations[j])) {
        throw Error(Errc::invalid_input, "degenerate 6D rotation for joint " +
                                             std::to_string(j + 1) + " at frame " +
                                             std::to_string(t));
      }
    }
  }
}

FeatureSequence::FeatureSequence(std::vector<double> data) : data_(std::move(data)) {
  if (data_.size() % kWidth != 0) {
    throw Error(Errc::malformed_feature,
                "feature data size " + std::to_string(data_.size()) +
                    " is not a multiple of " + std::to_string(kWidth));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double v = data_[i];
    if (!std::isfinite(v)) {
      throw Error(Errc::malformed_feature,
                  "non-finite feature at row " + std::to_string(i / kWidth) + ", column " +
                      std::to_string(i % kWidth));
    }
    if (i % kWidth >= layout::kFootContacts && (v < 0.0 || v > 1.0)) {
      throw Error(Errc::malformed_feature,
                  "foot contact outside [0, 1] at row " + std::to_string(i / kWidth));
    }
  }
}

}  // namespace morag::motion
