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

#include "morag/motion/file.hpp"

#include <cmath>
#include <string>

#include "morag/errors.hpp"
#include "morag/io/binary.hpp"

namespace morag::motion {
namespace {

constexpr std::string_view kMagic = "MORAGMO1";

void header(io::ByteWriter& w, std::size_t frames, std::uint32_t width, std::uint32_t fps) {
  w.bytes(kMagic);
  w.u32(kMotionFileVersion);
  w.u32(static_cast<std::uint32_t>(frames));
  w.u32(width);
  w.u32(fps);
}

std::uint32_t integral_fps(double fps) {
  const double rounded = std::round(fps);
  if (!(rounded >= 1.0) || std::abs(fps - rounded) > 1e-6 || rounded > 0xFFFFFFFFu) {
    throw Error(Errc::invalid_input,
                "MORAGMO1 stores an integer fps; got " + std::to_string(fps));
  }
  return static_cast<std::uint32_t>(rounded);
}

}  // namespace

std::vector<std::uint8_t> serialize(const JointMotion& m) {
  validate(m);
  io::ByteWriter w;
  header(w, m.frames(), kJointMotionWidth, integral_fps(m.fps));
  for (const Pose& p : m.poses) {
    for (double v : p.root_translation) w.f32(static_cast<float>(v));
    w.f32(static_cast<float>(p.root_heading));
    for (const Vec3& j : p.joint_positions) {
      for (double v : j) w.f32(static_cast<float>(v));
    }
    for (const Rot6& r : p.joint_rotations) {
      for (double v : r) w.f32(static_cast<float>(v));
    }
  }
  return w.buffer();
}

std::vector<std::uint8_t> serialize(const FeatureSequence& f, std::uint32_t fps) {
  if (fps == 0) throw Error(Errc::invalid_input, "fps must be positive");
  io::ByteWriter w;
  header(w, f.frames(), FeatureSequence::kWidth, fps);
  for (double v : f.data()) w.f32(static_cast<float>(v));
  return w.buffer();
}

MotionFile deserialize(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes);
  if (r.bytes(kMagic.size()) != kMagic) throw Error(Errc::format, "not a MORAGMO1 file");
  const std::uint32_t version = r.u32();
  if (version != kMotionFileVersion) {
    throw Error(Errc::format, "unsupported MORAGMO1 version " + std::to_string(version));
  }
  const std::uint32_t frames = r.u32();
  const std::uint32_t width = r.u32();
  const std::uint32_t fps = r.u32();
  if (fps == 0) throw Error(Errc::format, "MORAGMO1 fps is zero");
  if (width != kJointMotionWidth && width != FeatureSequence::kWidth) {
    throw Error(Errc::format, "unsupported MORAGMO1 width " + std::to_string(width));
  }
  const std::uint64_t payload = std::uint64_t{frames} * width * 4;
  if (payload != r.remaining()) {
    throw Error(Errc::corruption, "MORAGMO1 payload has " + std::to_string(r.remaining()) +
                                      " bytes, header implies " + std::to_string(payload));
  }

  if (width == FeatureSequence::kWidth) {
    std::vector<double> data(std::size_t{frames} * width);
    for (double& v : data) v = r.f32();
    return FeatureFile{FeatureSequence(std::move(data)), fps};
  }

  JointMotion m;
  m.fps = fps;
  m.poses.resize(frames);
  for (Pose& p : m.poses) {
    for (double& v : p.root_translation) v = r.f32();
    p.root_heading = r.f32();
    for (Vec3& j : p.joint_positions) {
      for (double& v : j) v = r.f32();
    }
    for (Rot6& rot : p.joint_rotations) {
      for (double& v : rot) v = r.f32();
    }
  }
  try {
    validate(m);
  } catch (const Error& e) {
    throw Error(Errc::format, std::string("MORAGMO1 payload: ") + e.what());
  }
  return m;
}

void write_motion(const std::filesystem::path& path, const JointMotion& m) {
  io::write_file(path, serialize(m));
}

void write_features(const std::filesystem::path& path, const FeatureSequence& f,
                    std::uint32_t fps) {
  io::write_file(path, serialize(f, fps));
}

MotionFile read_motion_file(const std::filesystem::path& path) {
  return deserialize(io::read_file(path));
}

JointMotion read_joint_motion(const std::filesystem::path& path) {
  MotionFile file = read_motion_file(path);
  if (auto* m = std::get_if<JointMotion>(&file)) return std::move(*m);
  throw Error(Errc::format, path.string() + " holds features, not a joint motion");
}

}  // namespace morag::motion
