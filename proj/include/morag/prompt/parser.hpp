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

#include <string>
#include <string_view>

namespace morag::prompt {

struct PartDescriptions {
  std::string torso;
  std::string hands;
  std::string legs;
  std::string source;  // the input description

  bool operator==(const PartDescriptions&) const = default;
};

// Splits a completion into its Torso / Hands / Legs segments. Markers may be
// numbered ("1) Torso", "2. Hands:") or bare labels followed by a colon
// ("Legs:"), in any case and any order. Segments are mapped by label.
// Throws ParseError (carrying the raw completion) unless all three labels
// are present with non-empty text.
PartDescriptions parse_llm_output(std::string_view completion);

// "1) Torso: ...\n2) Hands: ...\n3) Legs: ..."
std::string serialize(const PartDescriptions& parts);

}  // namespace morag::prompt
