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

#include "morag/prompt/client.hpp"

#include "httplib.h"

#include "morag/errors.hpp"

namespace morag::prompt {

nlohmann::json request_body(const LlmRequest& request) {
  nlohmann::json body = request.params.is_object() ? request.params : nlohmann::json::object();
  body["model"] = request.model_id;
  body["prompt"] = request.prompt;
  body["max_tokens"] = request.max_tokens;
  return body;
}

LlmResponse parse_response_body(const nlohmann::json& j) {
  LlmResponse out;
  if (j.contains("completion") && j["completion"].is_string()) {
    out.completion = j["completion"].get<std::string>();
  } else if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty() &&
             j["choices"][0].contains("text") && j["choices"][0]["text"].is_string()) {
    out.completion = j["choices"][0]["text"].get<std::string>();
  } else {
    throw Error(Errc::endpoint, "completion endpoint response has no completion text");
  }
  if (j.contains("usage") && j["usage"].is_object()) {
    out.prompt_tokens = j["usage"].value("prompt_tokens", std::size_t{0});
    out.completion_tokens = j["usage"].value("completion_tokens", std::size_t{0});
  }
  return out;
}

JsonEndpoint::JsonEndpoint(std::string url, std::string api_key, std::chrono::seconds timeout)
    : url_(std::move(url)), api_key_(std::move(api_key)), timeout_(timeout) {
  const auto scheme_end = url_.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::invalid_config, "endpoint must be an http(s) URL: " + url_);
  }
  const std::string scheme = url_.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(Errc::invalid_config, "unsupported endpoint scheme '" + scheme + "'");
  }
#ifndef MORAG_WITH_OPENSSL
  if (scheme == "https") {
    throw Error(Errc::invalid_config, "this build has no TLS support; use an http:// endpoint");
  }
#endif
  const auto path_begin = url_.find('/', scheme_end + 3);
  origin_ = url_.substr(0, path_begin);
  path_ = path_begin == std::string::npos ? "/" : url_.substr(path_begin);
}

nlohmann::json JsonEndpoint::post(const nlohmann::json& body) const {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(Errc::endpoint,
                "request to " + url_ + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(Errc::endpoint, url_ + " returned HTTP " + std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::endpoint, url_ + " returned invalid JSON: " + e.what());
  }
}

HttpLlmClient::HttpLlmClient(std::string endpoint, std::string api_key,
                             std::chrono::seconds timeout)
    : endpoint_(std::move(endpoint), std::move(api_key), timeout) {}

LlmResponse HttpLlmClient::complete(const LlmRequest& request) {
  return parse_response_body(endpoint_.post(request_body(request)));
}

}  // namespace morag::prompt
