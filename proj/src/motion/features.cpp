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

#include "morag/motion/features.hpp"

#include <string>

#include "morag/errors.hpp"

namespace morag::motion {
namespace {

Vec3 sub(const Vec3& a, const Vec3& b) noexcept {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double squared_norm(const Vec3& v) noexcept { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

}  // namespace

FeatureSequence encode_features(const JointMotion& m, double contact_threshold) {
  if (m.frames() < 2) {
    throw Error(Errc::insufficient_frames,
                "encoding needs at least 2 frames, got " + std::to_string(m.frames()));
  }
  validate(m);
  const auto contacts = compute_foot_contacts(m, contact_threshold);

  const std::size_t rows = m.frames() - 1;
  std::vector<double> data(rows * layout::kWidth);
  for (std::size_t t = 0; t < rows; ++t) {
    const Pose& cur = m.poses[t];
    const Pose& next = m.poses[t + 1];
    double* out = data.data() + t * layout::kWidth;

    out[layout::kRootAngularVelocity] = next.root_heading - cur.root_heading;
    const Vec3 local =
        rotate_y(sub(next.root_translation, cur.root_translation), -cur.root_heading);
    out[layout::kRootLinearVelocity] = local[0];
    out[layout::kRootLinearVelocity + 1] = local[2];
    out[layout::kRootHeight] = cur.root_translation[1];

    for (std::size_t j = 1; j < kNumJoints; ++j) {
      for (std::size_t a = 0; a < 3; ++a) {
        out[layout::kJointPositions + 3 * (j - 1) + a] = cur.joint_positions[j][a];
      }
    }
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const Vec3 v =
          rotate_y(sub(world_position(next, j), world_position(cur, j)), -cur.root_heading);
      for (std::size_t a = 0; a < 3; ++a) out[layout::kJointVelocities + 3 * j + a] = v[a];
    }
    for (std::size_t r = 0; r < kNumRotations; ++r) {
      for (std::size_t a = 0; a < 6; ++a) {
        out[layout::kJointRotations + 6 * r + a] = cur.joint_rotations[r][a];
      }
    }
    for (std::size_t c = 0; c < 4; ++c) out[layout::kFootContacts + c] = contacts[t][c];
  }
  return FeatureSequence(std::move(data));
}

RootTrajectory integrate_root(std::span<const double> angular_velocity,
                              std::span<const double> velocity_x,
                              std::span<const double> velocity_z,
                              std::span<const double> height) {
  const std::size_t n = angular_velocity.size();
  if (n == 0 || velocity_x.size() != n || velocity_z.size() != n || height.size() != n) {
    throw Error(Errc::shape, "integrate_root needs equal-length, non-empty inputs");
  }
  RootTrajectory traj;
  traj.heading.resize(n);
  traj.position.resize(n);
  traj.heading[0] = 0.0;
  traj.position[0] = {0.0, height[0], 0.0};
  for (std::size_t t = 1; t < n; ++t) {
    traj.heading[t] = traj.heading[t - 1] + angular_velocity[t - 1];
    const Vec3 step = rotate_y({velocity_x[t - 1], 0.0, velocity_z[t - 1]}, traj.heading[t - 1]);
    traj.position[t] = {traj.position[t - 1][0] + step[0], height[t],
                        traj.position[t - 1][2] + step[2]};
  }
  return traj;
}

JointMotion decode_features(const FeatureSequence& f, double fps) {
  const std::size_t n = f.frames();
  if (n == 0) throw Error(Errc::malformed_feature, "feature sequence has no rows");
  if (!(fps > 0.0)) throw Error(Errc::invalid_input, "fps must be positive");

  std::vector<double> ra(n), rx(n), rz(n), ry(n);
  for (std::size_t t = 0; t < n; ++t) {
    ra[t] = f.at(t, layout::kRootAngularVelocity);
    rx[t] = f.at(t, layout::kRootLinearVelocity);
    rz[t] = f.at(t, layout::kRootLinearVelocity + 1);
    ry[t] = f.at(t, layout::kRootHeight);
  }
  const RootTrajectory root = integrate_root(ra, rx, rz, ry);

  JointMotion m;
  m.fps = fps;
  m.poses.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    Pose& p = m.poses[t];
    p.root_translation = root.position[t];
    p.root_heading = root.heading[t];
    p.joint_positions[0] = {0.0, 0.0, 0.0};
    for (std::size_t j = 1; j < kNumJoints; ++j) {
      for (std::size_t a = 0; a < 3; ++a) {
        p.joint_positions[j][a] = f.at(t, layout::kJointPositions + 3 * (j - 1) + a);
      }
    }
    for (std::size_t r = 0; r < kNumRotations; ++r) {
      for (std::size_t a = 0; a < 6; ++a) {
        p.joint_rotations[r][a] = f.at(t, layout::kJointRotations + 6 * r + a);
      }
    }
  }
  return m;
}

std::vector<std::array<double, 4>> compute_foot_contacts(const JointMotion& m,
                                                         double velocity_threshold) {
  if (!(velocity_threshold > 0.0)) {
    throw Error(Errc::invalid_config, "foot contact threshold must be positive");
  }
  if (m.frames() < 2) {
    throw Error(Errc::insufficient_frames, "foot contacts need at least 2 frames");
  }
  std::vector<std::array<double, 4>> out(m.frames());
  for (std::size_t t = 0; t + 1 < m.frames(); ++t) {
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t j = kFootContactJoints[c];
      const Vec3 d = sub(world_position(m.poses[t + 1], j), world_position(m.poses[t], j));
      out[t][c] = squared_norm(d) < velocity_threshold ? 1.0 : 0.0;
    }
  }
  out.back() = out[out.size() - 2];
  return out;
}

JointMotion trim(const JointMotion& m, std::size_t target_frames) {
  if (target_frames < 1 || target_frames > m.frames()) {
    throw Error(Errc::range, "trim target " + std::to_string(target_frames) +
                                 " outside [1, " + std::to_string(m.frames()) + "]");
  }
  JointMotion out;
  out.fps = m.fps;
  out.poses.assign(m.poses.begin(), m.poses.begin() + static_cast<std::ptrdiff_t>(target_frames));
  return out;
}

}  // namespace morag::motion
