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

#include "morag/prompt/describe.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "morag/errors.hpp"

namespace morag::prompt {

PartDescriptions describe_parts(std::string_view text, const PromptTemplate& tmpl,
                                LlmClient* client, CompletionCache& cache,
                                const DescribeOptions& options) {
  const std::string prompt = build_prompt(text, tmpl);
  const std::string key = cache_key(text, tmpl);

  if (auto hit = cache.lookup(key)) {
    PartDescriptions parts = parse_llm_output(*hit);
    parts.source = std::string(text);
    return parts;
  }
  if (client == nullptr) {
    throw Error(Errc::missing_dependency,
                "no cached part descriptions for '" + std::string(text) +
                    "' and no LLM endpoint configured");
  }

  LlmRequest request;
  request.prompt = prompt;
  request.max_tokens = options.max_tokens;
  request.model_id = options.model;
  request.params = options.params;

  std::string last_raw;
  for (std::size_t attempt = 0; attempt <= options.retries; ++attempt) {
    const LlmResponse response = client->complete(request);
    try {
      PartDescriptions parts = parse_llm_output(response.completion);
      cache.store(key, prompt, response.completion);
      parts.source = std::string(text);
      return parts;
    } catch (const ParseError& e) {
      last_raw = e.raw_completion();
    }
  }
  throw Error(Errc::parse_exhausted, "no parseable completion after " +
                                         std::to_string(options.retries + 1) +
                                         " request(s); last completion: " + last_raw);
}

std::vector<PartDescriptions> describe_many(const std::vector<std::string>& texts,
                                            const PromptTemplate& tmpl, LlmClient* client,
                                            CompletionCache& cache,
                                            const DescribeOptions& options,
                                            std::size_t max_in_flight) {
  std::vector<PartDescriptions> out(texts.size());
  std::vector<std::exception_ptr> errors(texts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < texts.size(); i = next++) {
      try {
        out[i] = describe_parts(texts[i], tmpl, client, cache, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(max_in_flight, 1, std::max<std::size_t>(texts.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace morag::prompt
