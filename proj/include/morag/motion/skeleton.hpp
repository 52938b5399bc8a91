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
#include <string_view>

namespace morag::motion {

// First 22 joints of the SMPL skeleton.
inline constexpr std::size_t kNumJoints = 22;
// Rotations are stored for every joint except the root (pelvis).
inline constexpr std::size_t kNumRotations = kNumJoints - 1;

enum Joint : std::size_t {
  kPelvis = 0,
  kLeftHip = 1,
  kRightHip = 2,
  kSpine1 = 3,
  kLeftKnee = 4,
  kRightKnee = 5,
  kSpine2 = 6,
  kLeftAnkle = 7,
  kRightAnkle = 8,
  kSpine3 = 9,
  kLeftFoot = 10,
  kRightFoot = 11,
  kNeck = 12,
  kLeftCollar = 13,
  kRightCollar = 14,
  kHead = 15,
  kLeftShoulder = 16,
  kRightShoulder = 17,
  kLeftElbow = 18,
  kRightElbow = 19,
  kLeftWrist = 20,
  kRightWrist = 21,
};

inline constexpr std::array<std::string_view, kNumJoints> kJointNames = {
    "pelvis",     "left_hip",       "right_hip",      "spine1",     "left_knee",
    "right_knee", "spine2",         "left_ankle",     "right_ankle", "spine3",
    "left_foot",  "right_foot",     "neck",           "left_collar", "right_collar",
    "head",       "left_shoulder",  "right_shoulder", "left_elbow",  "right_elbow",
    "left_wrist", "right_wrist",
};

// Column order of the foot-contact block.
inline constexpr std::array<std::size_t, 4> kFootContactJoints = {kLeftAnkle, kLeftFoot,
                                                                  kRightAnkle, kRightFoot};

}  // namespace morag::motion
