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

#include "morag/compose/composer.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "morag/errors.hpp"

namespace morag::compose {

using motion::JointMotion;
using retrieval::Part;

JointPartition JointPartition::create(std::vector<std::size_t> torso,
                                      std::vector<std::size_t> hands,
                                      std::vector<std::size_t> legs) {
  std::array<int, motion::kNumJoints> count{};
  JointPartition p;
  auto claim = [&](const std::vector<std::size_t>& set, Part part) {
    for (std::size_t j : set) {
      if (j >= motion::kNumJoints) {
        throw Error(Errc::invalid_config, "joint index " + std::to_string(j) + " out of range");
      }
      if (++count[j] > 1) {
        throw Error(Errc::invalid_config,
                    "joint " + std::to_string(j) + " assigned to more than one part");
      }
      p.owner_[j] = part;
    }
  };
  claim(torso, Part::torso);
  claim(hands, Part::hands);
  claim(legs, Part::legs);
  for (std::size_t j = 0; j < motion::kNumJoints; ++j) {
    if (count[j] == 0) {
      throw Error(Errc::invalid_config, "joint " + std::to_string(j) + " is not assigned");
    }
  }
  std::sort(torso.begin(), torso.end());
  std::sort(hands.begin(), hands.end());
  std::sort(legs.begin(), legs.end());
  p.torso_ = std::move(torso);
  p.hands_ = std::move(hands);
  p.legs_ = std::move(legs);
  return p;
}

const std::vector<std::size_t>& JointPartition::joints(Part part) const noexcept {
  switch (part) {
    case Part::torso: return torso_;
    case Part::hands: return hands_;
    case Part::legs: break;
  }
  return legs_;
}

JointPartition default_partition() {
  using namespace motion;
  return JointPartition::create(
      {kSpine1, kSpine2, kSpine3, kNeck, kHead},
      {kLeftCollar, kRightCollar, kLeftShoulder, kRightShoulder, kLeftElbow, kRightElbow,
       kLeftWrist, kRightWrist},
      {kPelvis, kLeftHip, kRightHip, kLeftKnee, kRightKnee, kLeftAnkle, kRightAnkle, kLeftFoot,
       kRightFoot});
}

ComposedMotion compose(const JointMotion& torso, const JointMotion& hands,
                       const JointMotion& legs, const JointPartition& partition,
                       const ComposeOptions& options) {
  const std::array<const JointMotion*, 3> sources = {&torso, &hands, &legs};
  for (const JointMotion* m : sources) {
    if (m->frames() == 0) throw Error(Errc::empty_source, "cannot compose a zero-length motion");
  }
  for (const JointMotion* m : sources) {
    if (std::abs(m->fps - legs.fps) > options.fps_tolerance) {
      throw Error(Errc::incompatible_sources, "source frame rates differ (" +
                                                  std::to_string(m->fps) + " vs " +
                                                  std::to_string(legs.fps) + ")");
    }
  }
  const std::size_t f_min = std::min({torso.frames(), hands.frames(), legs.frames()});
  auto offset = [&](const JointMotion& m) -> std::size_t {
    return options.trim == TrimMode::centered ? (m.frames() - f_min) / 2 : 0;
  };
  const std::array<std::size_t, 3> start = {offset(torso), offset(hands), offset(legs)};

  ComposedMotion out;
  out.motion.fps = legs.fps;
  out.motion.poses.resize(f_min);
  out.provenance.f_min = f_min;
  for (std::size_t f = 0; f < f_min; ++f) {
    motion::Pose& pose = out.motion.poses[f];
    const motion::Pose& root_src = legs.poses[start[2] + f];
    pose.root_translation = root_src.root_translation;
    pose.root_heading = root_src.root_heading;
    for (std::size_t j = 0; j < motion::kNumJoints; ++j) {
      const auto owner = static_cast<std::size_t>(partition.owner(j));
      const motion::Pose& src = sources[owner]->poses[start[owner] + f];
      pose.joint_positions[j] = src.joint_positions[j];
      if (j > 0) pose.joint_rotations[j - 1] = src.joint_rotations[j - 1];
    }
  }
  return out;
}

std::vector<ComposedMotion> compose_topk(const retrieval::PartResults& results, std::size_t k,
                                         const JointPartition& partition,
                                         const MotionLoader& loader,
                                         const ComposeOptions& options) {
  const std::size_t n = std::min({k, results.torso.hits.size(), results.hands.hits.size(),
                                  results.legs.hits.size()});
  auto load = [&](retrieval::Part part, const retrieval::RetrievalHit& hit) {
    try {
      return loader(part, hit);
    } catch (const std::exception& e) {
      throw Error(Errc::load, "failed to load motion '" + hit.id + "': " + e.what());
    }
  };

  std::vector<ComposedMotion> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = results.torso.hits[i];
    const auto& h = results.hands.hits[i];
    const auto& l = results.legs.hits[i];
    ComposedMotion c = compose(load(retrieval::Part::torso, t), load(retrieval::Part::hands, h),
                               load(retrieval::Part::legs, l), partition, options);
    c.provenance.torso_id = t.id;
    c.provenance.hands_id = h.id;
    c.provenance.legs_id = l.id;
    c.provenance.rank = i + 1;
    out.push_back(std::move(c));
  }
  return out;
}

std::string provenance_json(const Provenance& p) {
  nlohmann::ordered_json j;
  j["rank"] = p.rank;
  j["torso_id"] = p.torso_id;
  j["hands_id"] = p.hands_id;
  j["legs_id"] = p.legs_id;
  j["f_min"] = p.f_min;
  return j.dump(2) + "\n";
}

}  // namespace morag::compose
