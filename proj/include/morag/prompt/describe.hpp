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
#include <string>
#include <string_view>
#include <vector>

#include "morag/prompt/cache.hpp"
#include "morag/prompt/client.hpp"
#include "morag/prompt/parser.hpp"
#include "morag/prompt/template.hpp"

namespace morag::prompt {

struct DescribeOptions {
  std::size_t retries = 2;  // extra requests after a malformed completion
  std::size_t max_tokens = kDefaultMaxTokens;
  std::string model;
  nlohmann::json params = nlohmann::json::object();
};

// Cache first; otherwise prompt the client, parse, and cache on success.
// `client` may be null when every description is expected to be cached; a
// miss then throws Error(missing_dependency). Malformed completions are
// retried up to options.retries times before Error(parse_exhausted).
PartDescriptions describe_parts(std::string_view text, const PromptTemplate& tmpl,
                                LlmClient* client, CompletionCache& cache,
                                const DescribeOptions& options = {});

// Runs describe_parts over many texts with at most `max_in_flight` client
// calls outstanding. Results keep the input order.
std::vector<PartDescriptions> describe_many(const std::vector<std::string>& texts,
                                            const PromptTemplate& tmpl, LlmClient* client,
                                            CompletionCache& cache,
                                            const DescribeOptions& options,
                                            std::size_t max_in_flight);

}  // namespace morag::prompt
