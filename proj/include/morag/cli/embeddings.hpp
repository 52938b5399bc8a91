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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morag/prompt/client.hpp"
#include "morag/retrieval/database.hpp"

namespace morag::cli {

// Precomputed description embeddings, one JSON object per line:
// {"part": "hands", "text": "...", "embedding": [...]}. Texts are matched
// after prompt::normalize_description.
class EmbeddingLookup {
 public:
  EmbeddingLookup() = default;
  static EmbeddingLookup load(const std::filesystem::path& path);

  void add(retrieval::Part part, std::string_view text, std::vector<double> embedding);
  const std::vector<double>* find(retrieval::Part part, std::string_view text) const;
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::map<std::pair<retrieval::Part, std::string>, std::vector<double>> table_;
};

// Remote encoder: POST {"part", "text"} and expect {"embedding": [...]}.
std::vector<double> remote_embedding(const prompt::JsonEndpoint& endpoint, retrieval::Part part,
                                     std::string_view text);

}  // namespace morag::cli
