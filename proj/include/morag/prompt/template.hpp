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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace morag::prompt {

inline constexpr std::string_view kPlaceholder = "{text}";

struct FewShotExample {
  std::string input;
  std::string output;  // "1) Torso: ... 2) Hands: ... 3) Legs: ..."
};

struct PromptTemplate {
  std::string task_instructions;
  std::vector<FewShotExample> few_shot;
  std::string query_pattern;  // exactly one kPlaceholder
};

// Task instructions, three authored examples and the body-part query.
PromptTemplate default_template();

// Throws Error(invalid_config) on empty instructions or a query pattern
// without exactly one placeholder.
void validate(const PromptTemplate& tmpl);

// Instructions, then each example rendered through the query pattern and
// followed by its answer, then the query for `description`. Blocks are
// separated by blank lines. The description is inserted verbatim.
// Throws Error(invalid_input) when the description is blank.
std::string build_prompt(std::string_view description, const PromptTemplate& tmpl);

// True when every ']' closes an earlier '['.
bool brackets_balanced(std::string_view text) noexcept;

// Stable 64-bit FNV-1a of the template, as 16 hex digits.
std::string template_hash(const PromptTemplate& tmpl);

nlohmann::json to_json(const PromptTemplate& tmpl);
PromptTemplate template_from_json(const nlohmann::json& j);
PromptTemplate load_template(const std::filesystem::path& path);

}  // namespace morag::prompt
