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

#include <chrono>
#include <cstddef>
#include <string>

#include "json.hpp"

namespace morag::prompt {

inline constexpr std::size_t kDefaultMaxTokens = 256;

struct LlmRequest {
  std::string prompt;
  std::size_t max_tokens = kDefaultMaxTokens;
  std::string model_id;
  // Extra body fields (temperature, top_p, ...) passed through untouched.
  nlohmann::json params = nlohmann::json::object();
};

struct LlmResponse {
  std::string completion;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  // Implementations throw Error(endpoint) on transport or protocol failure.
  virtual LlmResponse complete(const LlmRequest& request) = 0;
};

// Request body: {"model", "prompt", "max_tokens", ...params}. The response
// body must carry the completion either as a top-level "completion" string
// or as choices[0].text; "usage" token counts are read when present.
nlohmann::json request_body(const LlmRequest& request);
LlmResponse parse_response_body(const nlohmann::json& body);

// POSTs completion requests to an http:// or https:// URL.
// POSTs JSON bodies to one URL. Throws Error(endpoint) on transport failure,
// non-2xx status or a non-JSON reply.
class JsonEndpoint {
 public:
  JsonEndpoint(std::string url, std::string api_key,
               std::chrono::seconds timeout = std::chrono::seconds(60));

  nlohmann::json post(const nlohmann::json& body) const;
  const std::string& url() const noexcept { return url_; }

 private:
  std::string url_;
  std::string origin_;
  std::string path_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

class HttpLlmClient final : public LlmClient {
 public:
  HttpLlmClient(std::string endpoint, std::string api_key,
                std::chrono::seconds timeout = std::chrono::seconds(60));

  LlmResponse complete(const LlmRequest& request) override;

 private:
  JsonEndpoint endpoint_;
};

}  // namespace morag::prompt
