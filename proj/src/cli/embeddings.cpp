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

#include "morag/cli/embeddings.hpp"

#include <cmath>
#include <fstream>

#include "morag/errors.hpp"
#include "morag/prompt/cache.hpp"

namespace morag::cli {
namespace {

std::vector<double> embedding_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(Errc::format, "embedding must be a non-empty array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(Errc::format, "embedding entries must be numbers");
    const double v = x.get<double>();
    if (!std::isfinite(v)) throw Error(Errc::format, "embedding entries must be finite");
    out.push_back(v);
  }
  return out;
}

}  // namespace

EmbeddingLookup EmbeddingLookup::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot read embedding lookup " + path.string());
  EmbeddingLookup out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      out.add(retrieval::part_from_string(j.at("part").get<std::string>()),
              j.at("text").get<std::string>(), embedding_from_json(j.at("embedding")));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::format, where + e.what());
    } catch (const Error& e) {
      throw Error(Errc::format, where + e.what());
    }
  }
  return out;
}

void EmbeddingLookup::add(retrieval::Part part, std::string_view text,
                          std::vector<double> embedding) {
  auto key = std::make_pair(part, prompt::normalize_description(text));
  if (table_.count(key)) {
    throw Error(Errc::format, "duplicate " + std::string(retrieval::to_string(part)) +
                                  " embedding for '" + key.second + "'");
  }
  table_.emplace(std::move(key), std::move(embedding));
}

const std::vector<double>* EmbeddingLookup::find(retrieval::Part part,
                                                 std::string_view text) const {
  const auto it = table_.find({part, prompt::normalize_description(text)});
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<double> remote_embedding(const prompt::JsonEndpoint& endpoint, retrieval::Part part,
                                     std::string_view text) {
  nlohmann::json body;
  body["part"] = retrieval::to_string(part);
  body["text"] = text;
  const auto reply = endpoint.post(body);
  if (!reply.contains("embedding")) {
    throw Error(Errc::endpoint, endpoint.url() + " reply has no 'embedding'");
  }
  try {
    return embedding_from_json(reply["embedding"]);
  } catch (const Error& e) {
    throw Error(Errc::endpoint, endpoint.url() + ": " + e.what());
  }
}

}  // namespace morag::cli
