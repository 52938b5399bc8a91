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

#include <span>
#include <vector>

#include "morag/motion/types.hpp"

namespace morag::motion {

inline constexpr double kDefaultContactThreshold = 2e-3;

// Forward differences; the last frame has no successor and is dropped, so
// the result has frames - 1 rows. Linear and joint velocities are per-frame
// displacements (m/frame) in the heading frame of the earlier pose.
FeatureSequence encode_features(const JointMotion& m,
                                double contact_threshold = kDefaultContactThreshold);

// Rebuilds a motion whose root starts at the origin with heading 0. Joint
// velocities and contacts in `f` are not used.
JointMotion decode_features(const FeatureSequence& f, double fps);

RootTrajectory integrate_root(std::span<const double> angular_velocity,
                              std::span<const double> velocity_x,
                              std::span<const double> velocity_z,
                              std::span<const double> height);

// frames x 4 matrix (row-major, columns per kFootContactJoints). An entry is
// 1 when the joint's squared per-frame world displacement is below
// `velocity_threshold`. The final frame reuses the last available difference.
std::vector<std::array<double, 4>> compute_foot_contacts(const JointMotion& m,
                                                         double velocity_threshold);

JointMotion trim(const JointMotion& m, std::size_t target_frames);

}  // namespace morag::motion
