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

#include "morag/prompt/cache.hpp"

#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>

#include "morag/errors.hpp"

namespace morag::prompt {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string normalize_description(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string cache_key(std::string_view description, const PromptTemplate& tmpl) {
  return template_hash(tmpl) + ":" + normalize_description(description);
}

CompletionCache::CompletionCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(*path_);
  if (!in) return;  // created on first store
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      completions_[j.at("key").get<std::string>()] = j.at("completion").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::format,
                  path_->string() + ":" + std::to_string(line_no) + ": bad cache record: " + e.what());
    }
  }
}

std::optional<std::string> CompletionCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = completions_.find(key);
  if (it == completions_.end()) return std::nullopt;
  return it->second;
}

void CompletionCache::store(const std::string& key, const std::string& prompt,
                            const std::string& completion) {
  std::unique_lock lock(mutex_);
  if (path_) {
    nlohmann::ordered_json rec;
    rec["key"] = key;
    rec["prompt"] = prompt;
    rec["completion"] = completion;
    rec["timestamp"] = utc_timestamp();
    std::ofstream out(*path_, std::ios::app);
    if (!out) throw Error(Errc::io, "cannot append to cache " + path_->string());
    out << rec.dump() << '\n';
    if (!out) throw Error(Errc::io, "write failed: " + path_->string());
  }
  completions_[key] = completion;
}

std::size_t CompletionCache::size() const {
  std::shared_lock lock(mutex_);
  return completions_.size();
}

}  // namespace morag::prompt
