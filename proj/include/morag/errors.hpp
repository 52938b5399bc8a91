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

#include <stdexcept>
#include <string>
#include <string_view>

namespace morag {

// Error categories. The CLI maps these onto process exit codes.
enum class Errc {
  shape,
  invalid_input,
  invalid_config,
  insufficient_frames,
  malformed_feature,
  range,
  parse,
  parse_exhausted,
  endpoint,
  degenerate_vector,
  invalid_mask,
  invalid_latent,
  training_diverged,
  build,
  degenerate_entry,
  degenerate_query,
  configuration,
  format,
  corruption,
  incompatible_sources,
  empty_source,
  load,
  insufficient_data,
  invalid_stats,
  io,
  missing_dependency,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised when an LLM completion cannot be split into torso/hands/legs.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string raw_completion)
      : Error(Errc::parse, message), raw_(std::move(raw_completion)) {}

  const std::string& raw_completion() const noexcept { return raw_; }

 private:
  std::string raw_;
};

}  // namespace morag
