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
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "morag/prompt/template.hpp"

namespace morag::prompt {

// Lowercased, trimmed, inner whitespace collapsed to single spaces.
std::string normalize_description(std::string_view text);

// "<template hash>:<normalized description>"
std::string cache_key(std::string_view description, const PromptTemplate& tmpl);

// Completion cache backed by an append-only JSONL file of
// {"key", "prompt", "completion", "timestamp"} records. Later records win.
// Reads may run concurrently; writes are serialized.
class CompletionCache {
 public:
  CompletionCache() = default;
  // Loads existing records; the file is created on the first store().
  explicit CompletionCache(std::filesystem::path path);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& prompt, const std::string& completion);
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> completions_;
};

}  // namespace morag::prompt
