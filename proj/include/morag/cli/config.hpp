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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morag/compose/composer.hpp"
#include "morag/contrastive/losses.hpp"
#include "morag/prompt/client.hpp"

namespace morag::cli {

// Returns the value of an environment variable, or nullopt when unset.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

struct LlmSettings {
  std::string endpoint;  // empty: cache-only operation
  std::string model;
  std::size_t max_tokens = prompt::kDefaultMaxTokens;
  std::optional<std::filesystem::path> cache;
  std::size_t retries = 2;
  std::size_t max_in_flight = 4;
  std::string api_key;  // MORAG_LLM_API_KEY only, never read from the file
};

struct EngineConfig {
  std::optional<std::filesystem::path> db_torso;
  std::optional<std::filesystem::path> db_hands;
  std::optional<std::filesystem::path> db_legs;

  LlmSettings llm;
  std::optional<std::filesystem::path> prompt_template;

  // JSONL lookup of precomputed description embeddings {part, text, embedding}.
  std::optional<std::filesystem::path> embeddings;
  std::string embed_endpoint;

  contrastive::LossWeights loss;
  std::size_t train_epochs = 1000;
  double train_learning_rate = 5.0;
  std::size_t train_embedding_dim = contrastive::kEmbeddingDim;

  std::size_t k = 3;
  compose::TrimMode trim = compose::TrimMode::prefix;

  std::vector<std::uint64_t> metric_seeds = {0};
  std::size_t subset_size = 300;
  std::size_t pool_size = 32;
  std::size_t mm_pairs = 10;

  std::optional<compose::JointPartition> partition;

  compose::JointPartition effective_partition() const;
};

// Keys accepted in config files, in documentation order.
const std::vector<std::string>& config_keys();

// Environment variable that overrides `key`: MORAG_ + upper-cased key with '.' -> '_'.
std::string env_name(std::string_view key);

// Parses `key = value` lines. Relative paths resolve against `base_dir`.
// Unknown keys and malformed values throw Error(invalid_config); referenced
// input files that do not exist throw Error(io).
EngineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                          const EnvLookup& env);

// No path: defaults plus environment overrides.
EngineConfig load_config(const std::optional<std::filesystem::path>& path, const EnvLookup& env);

}  // namespace morag::cli
