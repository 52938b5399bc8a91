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

#include "morag/errors.hpp"

namespace morag {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::shape: return "shape";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_config: return "invalid-config";
    case Errc::insufficient_frames: return "insufficient-frames";
    case Errc::malformed_feature: return "malformed-feature";
    case Errc::range: return "range";
    case Errc::parse: return "parse";
    case Errc::parse_exhausted: return "parse-exhausted";
    case Errc::endpoint: return "endpoint";
    case Errc::degenerate_vector: return "degenerate-vector";
    case Errc::invalid_mask: return "invalid-mask";
    case Errc::invalid_latent: return "invalid-latent";
    case Errc::training_diverged: return "training-diverged";
    case Errc::build: return "build";
    case Errc::degenerate_entry: return "degenerate-entry";
    case Errc::degenerate_query: return "degenerate-query";
    case Errc::configuration: return "configuration";
    case Errc::format: return "format";
    case Errc::corruption: return "corruption";
    case Errc::incompatible_sources: return "incompatible-sources";
    case Errc::empty_source: return "empty-source";
    case Errc::load: return "load";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::invalid_stats: return "invalid-stats";
    case Errc::io: return "io";
    case Errc::missing_dependency: return "missing-dependency";
  }
  return "unknown";
}

}  // namespace morag
