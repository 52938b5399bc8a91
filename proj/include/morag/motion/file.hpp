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

// MORAGMO1 motion files: 8-byte magic, then u32 version (1), u32 frames,
// u32 width, u32 fps, then frames * width little-endian float32, row-major.
// Width 263 holds a FeatureSequence; width 196 holds a JointMotion laid out
// as [root_translation(3), root_heading(1), joint_positions(66),
// joint_rotations(126)].

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "morag/motion/types.hpp"

namespace morag::motion {

inline constexpr std::uint32_t kMotionFileVersion = 1;
inline constexpr std::uint32_t kJointMotionWidth = 3 + 1 + 3 * kNumJoints + 6 * kNumRotations;
static_assert(kJointMotionWidth == 196);

struct FeatureFile {
  FeatureSequence features;
  std::uint32_t fps = 20;
};

using MotionFile = std::variant<JointMotion, FeatureFile>;

std::vector<std::uint8_t> serialize(const JointMotion& m);
std::vector<std::uint8_t> serialize(const FeatureSequence& f, std::uint32_t fps);
MotionFile deserialize(std::span<const std::uint8_t> bytes);

void write_motion(const std::filesystem::path& path, const JointMotion& m);
void write_features(const std::filesystem::path& path, const FeatureSequence& f,
                    std::uint32_t fps);
MotionFile read_motion_file(const std::filesystem::path& path);
// Reads a file that must hold a joint motion; throws Error(format) otherwise.
JointMotion read_joint_motion(const std::filesystem::path& path);

}  // namespace morag::motion
