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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "morag/motion/skeleton.hpp"

namespace morag::motion {

using Vec3 = std::array<double, 3>;
// Continuous 6D rotation: the first two columns of a rotation matrix,
// stored column after column.
using Rot6 = std::array<double, 6>;

// Rotate a vector about the vertical (Y) axis by `angle` radians.
Vec3 rotate_y(const Vec3& v, double angle) noexcept;

struct Pose {
  Vec3 root_translation{};  // world frame, meters
  double root_heading = 0.0;  // radians about +Y
  // Root-relative joint positions in the heading-aligned frame. Joint 0 is
  // the root itself and is expected to sit at the origin.
  std::array<Vec3, kNumJoints> joint_positions{};
  // Rotation of joint j (j >= 1) lives at index j - 1.
  std::array<Rot6, kNumRotations> joint_rotations{};

  bool operator==(const Pose&) const = default;
};

struct JointMotion {
  double fps = 20.0;
  std::vector<Pose> poses;

  std::size_t frames() const noexcept { return poses.size(); }
  bool operator==(const JointMotion&) const = default;
};

// Throws Error(invalid_input) on empty motions, non-positive fps, non-finite
// values or degenerate 6D rotations.
void validate(const JointMotion& m);

// World-frame position of joint `j` at pose `p`.
Vec3 world_position(const Pose& p, std::size_t j) noexcept;

// Per-frame 263-wide feature layout:
//   [0]        root angular velocity about Y
//   [1, 3)     root planar velocity (x, z) in the heading frame
//   [3]        root height
//   [4, 67)    positions of joints 1..21
//   [67, 133)  velocities of joints 0..21
//   [133, 259) 6D rotations of joints 1..21
//   [259, 263) foot contacts
namespace layout {
inline constexpr std::size_t kRootAngularVelocity = 0;
inline constexpr std::size_t kRootLinearVelocity = 1;
inline constexpr std::size_t kRootHeight = 3;
inline constexpr std::size_t kJointPositions = 4;
inline constexpr std::size_t kJointVelocities = kJointPositions + 3 * kNumRotations;
inline constexpr std::size_t kJointRotations = kJointVelocities + 3 * kNumJoints;
inline constexpr std::size_t kFootContacts = kJointRotations + 6 * kNumRotations;
inline constexpr std::size_t kWidth = kFootContacts + 4;
static_assert(kJointVelocities == 67 && kJointRotations == 133 && kFootContacts == 259 &&
              kWidth == 263);
}  // namespace layout

class FeatureSequence {
 public:
  static constexpr std::size_t kWidth = layout::kWidth;

  FeatureSequence() = default;
  // Takes frames * 263 values, row-major. Throws Error(malformed_feature)
  // on a bad size, non-finite entries or contact values outside [0, 1].
  explicit FeatureSequence(std::vector<double> data);

  std::size_t frames() const noexcept { return data_.size() / kWidth; }
  std::span<const double> row(std::size_t t) const noexcept {
    return {data_.data() + t * kWidth, kWidth};
  }
  double at(std::size_t t, std::size_t c) const noexcept { return data_[t * kWidth + c]; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const FeatureSequence&) const = default;

 private:
  std::vector<double> data_;
};

struct RootTrajectory {
  std::vector<double> heading;
  std::vector<Vec3> position;
};

}  // namespace morag::motion
