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

#include "morag/prompt/template.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include "morag/errors.hpp"

namespace morag::prompt {
namespace {

std::size_t count_placeholders(std::string_view s) {
  std::size_t n = 0;
  for (auto pos = s.find(kPlaceholder); pos != std::string_view::npos;
       pos = s.find(kPlaceholder, pos + kPlaceholder.size())) {
    ++n;
  }
  return n;
}

std::string render_query(std::string_view pattern, std::string_view description) {
  std::string out(pattern);
  const auto pos = out.find(kPlaceholder);
  out.replace(pos, kPlaceholder.size(), description);
  return out;
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

PromptTemplate default_template() {
  PromptTemplate t;
  t.task_instructions =
      "The instructions for this task is to describe the listed body parts' position and "
      "movements in a sentence using simple language. ['Torso',' Hands', 'Legs']";
  t.query_pattern =
      "Query: Describe the below body parts position and movements involved in the action "
      "[{text}] in a sentence using simple language. 1) Torso 2) Hands 3) Legs";
  t.few_shot = {
      {"A person jumps forward",
       "1) Torso: The torso leans slightly forward and stays upright while the body travels "
       "through the air. 2) Hands: The arms swing back and then forward to help push the body "
       "ahead. 3) Legs: The knees bend, both feet push off the ground together and land a short "
       "distance in front."},
      {"A person sits down on a chair",
       "1) Torso: The upper body tilts forward a little and then settles upright as the hips "
       "lower. 2) Hands: The hands rest by the sides and reach back briefly toward the seat. "
       "3) Legs: The knees bend and the hips move down and back until the person is seated, "
       "with both feet flat on the ground."},
      {"A person waves with their right hand",
       "1) Torso: The torso is upright and still, facing forward while standing. 2) Hands: The "
       "right hand is raised to head height and moves side to side while the left hand hangs "
       "relaxed. 3) Legs: The legs stand straight and steady with both feet planted on the "
       "ground."},
  };
  return t;
}

void validate(const PromptTemplate& tmpl) {
  if (blank(tmpl.task_instructions)) {
    throw Error(Errc::invalid_config, "prompt template has empty task instructions");
  }
  if (count_placeholders(tmpl.query_pattern) != 1) {
    throw Error(Errc::invalid_config, "query pattern must contain exactly one " +
                                          std::string(kPlaceholder) + " placeholder");
  }
}

std::string build_prompt(std::string_view description, const PromptTemplate& tmpl) {
  if (blank(description)) throw Error(Errc::invalid_input, "description is empty");
  validate(tmpl);
  std::string out = tmpl.task_instructions;
  out += "\n\n";
  for (const FewShotExample& ex : tmpl.few_shot) {
    out += render_query(tmpl.query_pattern, ex.input);
    out += '\n';
    out += ex.output;
    out += "\n\n";
  }
  out += render_query(tmpl.query_pattern, description);
  return out;
}

bool brackets_balanced(std::string_view text) noexcept {
  long depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']' && --depth < 0) return false;
  }
  return depth == 0;
}

std::string template_hash(const PromptTemplate& tmpl) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0xFF;  // field separator
    h *= 0x100000001b3ull;
  };
  mix(tmpl.task_instructions);
  for (const FewShotExample& ex : tmpl.few_shot) {
    mix(ex.input);
    mix(ex.output);
  }
  mix(tmpl.query_pattern);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json to_json(const PromptTemplate& tmpl) {
  nlohmann::ordered_json j;
  j["task_instructions"] = tmpl.task_instructions;
  j["few_shot"] = nlohmann::ordered_json::array();
  for (const FewShotExample& ex : tmpl.few_shot) {
    j["few_shot"].push_back({{"input", ex.input}, {"output", ex.output}});
  }
  j["query_pattern"] = tmpl.query_pattern;
  return nlohmann::json(j);
}

PromptTemplate template_from_json(const nlohmann::json& j) {
  try {
    PromptTemplate t;
    t.task_instructions = j.at("task_instructions").get<std::string>();
    t.query_pattern = j.at("query_pattern").get<std::string>();
    if (j.contains("few_shot")) {
      for (const auto& ex : j.at("few_shot")) {
        t.few_shot.push_back({ex.at("input").get<std::string>(), ex.at("output").get<std::string>()});
      }
    }
    validate(t);
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_config, std::string("prompt template: ") + e.what());
  }
}

PromptTemplate load_template(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open prompt template " + path.string());
  try {
    return template_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::invalid_config, path.string() + ": " + e.what());
  }
}

}  // namespace morag::prompt
