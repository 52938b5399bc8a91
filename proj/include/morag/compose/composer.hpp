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
#include <functional>
#include <string>
#include <vector>

#include "morag/motion/types.hpp"
#include "morag/retrieval/database.hpp"

namespace morag::compose {

// Disjoint torso/hands/legs cover of the 22 skeleton joints. The only way
// to obtain one is through create() or default_partition(), so every
// instance is valid.
class JointPartition {
 public:
  // Throws Error(invalid_config) unless the three sets are pairwise
  // disjoint, in range and together cover every joint.
  static JointPartition create(std::vector<std::size_t> torso, std::vector<std::size_t> hands,
                               std::vector<std::size_t> legs);

  const std::vector<std::size_t>& joints(retrieval::Part part) const noexcept;
  retrieval::Part owner(std::size_t joint) const noexcept { return owner_[joint]; }

 private:
  JointPartition() = default;

  std::vector<std::size_t> torso_, hands_, legs_;
  std::array<retrieval::Part, motion::kNumJoints> owner_{};
};

// Pelvis and lower limbs drive the root, so they belong to legs.
JointPartition default_partition();

enum class TrimMode { prefix, centered };

struct Provenance {
  std::string torso_id;
  std::string hands_id;
  std::string legs_id;
  std::size_t f_min = 0;
  std::size_t rank = 1;  // 1-based
};

struct ComposedMotion {
  motion::JointMotion motion;
  Provenance provenance;
};

struct ComposeOptions {
  TrimMode trim = TrimMode::prefix;
  double fps_tolerance = 1e-3;
};

// Each joint's position (and rotation, for non-root joints) is copied from
// the source that owns it; the root trajectory always comes from `legs`.
// Throws Error(empty_source) on a zero-length source and
// Error(incompatible_sources) when frame rates differ beyond tolerance.
ComposedMotion compose(const motion::JointMotion& torso, const motion::JointMotion& hands,
                       const motion::JointMotion& legs, const JointPartition& partition,
                       const ComposeOptions& options = {});

using MotionLoader =
    std::function<motion::JointMotion(retrieval::Part, const retrieval::RetrievalHit&)>;

// Rank-by-rank combination: the i-th composition uses the i-th hit of every
// part. Produces min(k, shortest result list) motions. Loader failures
// surface as Error(load) naming the motion id.
std::vector<ComposedMotion> compose_topk(const retrieval::PartResults& results, std::size_t k,
                                         const JointPartition& partition,
                                         const MotionLoader& loader,
                                         const ComposeOptions& options = {});

std::string provenance_json(const Provenance& p);

}  // namespace morag::compose
