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

#include "morag/prompt/parser.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <regex>

#include "morag/errors.hpp"

namespace morag::prompt {
namespace {

// Numbered label ("1) Torso", "2. hands:") or bare label with a colon.
const std::regex& marker_regex() {
  static const std::regex re(R"((\d+\s*[\).]\s*(torso|hands|legs)\b\s*:?)|\b(torso|hands|legs)\s*:)",
                             std::regex::ECMAScript | std::regex::icase);
  return re;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

struct Marker {
  std::size_t label;  // 0 torso, 1 hands, 2 legs
  std::size_t begin;
  std::size_t end;
};

}  // namespace

PartDescriptions parse_llm_output(std::string_view completion) {
  static constexpr std::array<std::string_view, 3> kLabels = {"torso", "hands", "legs"};
  const std::string text(completion);

  std::vector<Marker> markers;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), marker_regex());
       it != std::sregex_iterator(); ++it) {
    const std::smatch& m = *it;
    const std::string label = lower(m[2].matched ? m[2].str() : m[3].str());
    for (std::size_t l = 0; l < kLabels.size(); ++l) {
      if (label == kLabels[l]) {
        markers.push_back({l, static_cast<std::size_t>(m.position(0)),
                           static_cast<std::size_t>(m.position(0) + m.length(0))});
      }
    }
  }

  std::array<std::optional<std::string>, 3> segments;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const Marker& mk = markers[i];
    if (segments[mk.label]) continue;
    const std::size_t stop = i + 1 < markers.size() ? markers[i + 1].begin : text.size();
    std::string seg = trim(std::string_view(text).substr(mk.end, stop - mk.end));
    if (!seg.empty()) segments[mk.label] = std::move(seg);
  }

  std::string missing;
  for (std::size_t l = 0; l < kLabels.size(); ++l) {
    if (!segments[l]) {
      if (!missing.empty()) missing += ", ";
      missing += kLabels[l];
    }
  }
  if (!missing.empty()) {
    throw ParseError("completion is missing segment(s): " + missing, text);
  }
  return {*segments[0], *segments[1], *segments[2], {}};
}

std::string serialize(const PartDescriptions& parts) {
  return "1) Torso: " + parts.torso + "\n2) Hands: " + parts.hands + "\n3) Legs: " + parts.legs;
}

}  // namespace morag::prompt
