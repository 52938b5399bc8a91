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

#include "morag/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "morag/errors.hpp"

namespace morag::cli {
namespace {

struct RawValue {
  std::string text;
  std::filesystem::path base_dir;
  std::string origin;  // "file:line" or the environment variable name
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const RawValue& v, const std::string& why) {
  throw Error(Errc::invalid_config, v.origin + ": " + key + " = '" + v.text + "': " + why);
}

std::uint64_t to_u64(const std::string& key, const RawValue& v) {
  std::uint64_t out = 0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || v.text.empty()) bad_value(key, v, "expected an unsigned integer");
  return out;
}

double to_double(const std::string& key, const RawValue& v) {
  char* end = nullptr;
  const double out = std::strtod(v.text.c_str(), &end);
  if (v.text.empty() || end != v.text.c_str() + v.text.size() || !std::isfinite(out)) {
    bad_value(key, v, "expected a finite number");
  }
  return out;
}

std::vector<std::uint64_t> to_u64_list(const std::string& key, const RawValue& v) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(v.text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_u64(key, RawValue{trim(item), v.base_dir, v.origin}));
  }
  if (out.empty()) bad_value(key, v, "expected a comma-separated list");
  return out;
}

std::filesystem::path to_path(const RawValue& v) {
  std::filesystem::path p(v.text);
  return p.is_absolute() ? p : v.base_dir / p;
}

std::filesystem::path existing_file(const std::string& key, const RawValue& v) {
  const auto p = to_path(v);
  if (!std::filesystem::is_regular_file(p)) {
    throw Error(Errc::io, v.origin + ": " + key + ": no such file " + p.string());
  }
  return p;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

compose::JointPartition EngineConfig::effective_partition() const {
  return partition ? *partition : compose::default_partition();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "db.torso",        "db.hands",           "db.legs",
      "llm.endpoint",    "llm.model",          "llm.max_tokens",
      "llm.cache",       "llm.retries",        "llm.max_in_flight",
      "prompt.template", "retrieve.embeddings", "embed.endpoint",
      "loss.tau",        "loss.lambda_nce",    "loss.lambda_kl",
      "loss.lambda_e",   "loss.filter_threshold",
      "train.epochs",    "train.learning_rate", "train.embedding_dim",
      "compose.k",       "compose.trim",
      "metrics.seeds",   "metrics.subset_size", "metrics.pool_size",
      "metrics.mm_pairs",
      "partition.torso", "partition.hands",    "partition.legs",
  };
  return keys;
}

std::string env_name(std::string_view key) {
  std::string out = "MORAG_";
  for (char c : key) {
    out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

EngineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                          const EnvLookup& env) {
  const auto& keys = config_keys();
  std::map<std::string, RawValue> raw;

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const std::string origin = "config line " + std::to_string(line_no);
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::invalid_config, origin + ": expected 'key = value'");
    }
    const std::string key = trim(content.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(Errc::invalid_config, origin + ": unknown key '" + key + "'");
    }
    if (raw.count(key)) {
      throw Error(Errc::invalid_config, origin + ": duplicate key '" + key + "'");
    }
    raw[key] = RawValue{trim(content.substr(eq + 1)), base_dir, origin};
  }

  if (env) {
    const auto cwd = std::filesystem::current_path();
    for (const auto& key : keys) {
      const std::string name = env_name(key);
      if (auto v = env(name)) raw[key] = RawValue{trim(*v), cwd, "environment " + name};
    }
  }

  EngineConfig cfg;
  if (env) {
    if (auto v = env("MORAG_LLM_API_KEY")) cfg.llm.api_key = *v;
  }

  auto get = [&](const std::string& key) -> const RawValue* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };

  if (auto v = get("db.torso")) cfg.db_torso = existing_file("db.torso", *v);
  if (auto v = get("db.hands")) cfg.db_hands = existing_file("db.hands", *v);
  if (auto v = get("db.legs")) cfg.db_legs = existing_file("db.legs", *v);

  if (auto v = get("llm.endpoint")) cfg.llm.endpoint = v->text;
  if (auto v = get("llm.model")) cfg.llm.model = v->text;
  if (auto v = get("llm.max_tokens")) cfg.llm.max_tokens = to_u64("llm.max_tokens", *v);
  if (auto v = get("llm.retries")) cfg.llm.retries = to_u64("llm.retries", *v);
  if (auto v = get("llm.max_in_flight")) {
    cfg.llm.max_in_flight = to_u64("llm.max_in_flight", *v);
    if (cfg.llm.max_in_flight == 0) bad_value("llm.max_in_flight", *v, "must be at least 1");
  }
  if (auto v = get("llm.cache")) {
    cfg.llm.cache = to_path(*v);
    const auto parent = cfg.llm.cache->parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw Error(Errc::io, v->origin + ": llm.cache: no such directory " + parent.string());
    }
  }
  if (auto v = get("prompt.template")) cfg.prompt_template = existing_file("prompt.template", *v);
  if (auto v = get("retrieve.embeddings")) {
    cfg.embeddings = existing_file("retrieve.embeddings", *v);
  }
  if (auto v = get("embed.endpoint")) cfg.embed_endpoint = v->text;

  if (auto v = get("loss.tau")) cfg.loss.tau = to_double("loss.tau", *v);
  if (auto v = get("loss.lambda_nce")) cfg.loss.lambda_nce = to_double("loss.lambda_nce", *v);
  if (auto v = get("loss.lambda_kl")) cfg.loss.lambda_kl = to_double("loss.lambda_kl", *v);
  if (auto v = get("loss.lambda_e")) cfg.loss.lambda_e = to_double("loss.lambda_e", *v);
  if (auto v = get("loss.filter_threshold")) {
    cfg.loss.filter_threshold = to_double("loss.filter_threshold", *v);
  }
  try {
    contrastive::validate(cfg.loss);
  } catch (const Error& e) {
    throw Error(Errc::invalid_config, e.what());
  }

  if (auto v = get("train.epochs")) cfg.train_epochs = to_u64("train.epochs", *v);
  if (auto v = get("train.learning_rate")) {
    cfg.train_learning_rate = to_double("train.learning_rate", *v);
    if (cfg.train_learning_rate < 0) bad_value("train.learning_rate", *v, "must be >= 0");
  }
  if (auto v = get("train.embedding_dim")) {
    cfg.train_embedding_dim = to_u64("train.embedding_dim", *v);
    if (cfg.train_embedding_dim == 0) bad_value("train.embedding_dim", *v, "must be at least 1");
  }

  if (auto v = get("compose.k")) {
    cfg.k = to_u64("compose.k", *v);
    if (cfg.k == 0) bad_value("compose.k", *v, "k must be at least 1");
  }
  if (auto v = get("compose.trim")) {
    if (v->text == "prefix") {
      cfg.trim = compose::TrimMode::prefix;
    } else if (v->text == "centered") {
      cfg.trim = compose::TrimMode::centered;
    } else {
      bad_value("compose.trim", *v, "expected 'prefix' or 'centered'");
    }
  }

  if (auto v = get("metrics.seeds")) cfg.metric_seeds = to_u64_list("metrics.seeds", *v);
  if (auto v = get("metrics.subset_size")) {
    cfg.subset_size = to_u64("metrics.subset_size", *v);
    if (cfg.subset_size == 0) bad_value("metrics.subset_size", *v, "must be at least 1");
  }
  if (auto v = get("metrics.pool_size")) {
    cfg.pool_size = to_u64("metrics.pool_size", *v);
    if (cfg.pool_size < 2) bad_value("metrics.pool_size", *v, "must be at least 2");
  }
  if (auto v = get("metrics.mm_pairs")) {
    cfg.mm_pairs = to_u64("metrics.mm_pairs", *v);
    if (cfg.mm_pairs == 0) bad_value("metrics.mm_pairs", *v, "must be at least 1");
  }

  const RawValue* pt = get("partition.torso");
  const RawValue* ph = get("partition.hands");
  const RawValue* pl = get("partition.legs");
  if (pt || ph || pl) {
    if (!(pt && ph && pl)) {
      throw Error(Errc::invalid_config,
                  "partition override needs all of partition.torso, partition.hands, partition.legs");
    }
    auto joints = [](const std::string& key, const RawValue& v) {
      const auto list = to_u64_list(key, v);
      return std::vector<std::size_t>(list.begin(), list.end());
    };
    try {
      cfg.partition = compose::JointPartition::create(joints("partition.torso", *pt),
                                                      joints("partition.hands", *ph),
                                                      joints("partition.legs", *pl));
    } catch (const Error& e) {
      throw Error(Errc::invalid_config, e.what());
    }
  }
  return cfg;
}

EngineConfig load_config(const std::optional<std::filesystem::path>& path, const EnvLookup& env) {
  if (!path) return parse_config("", std::filesystem::current_path(), env);
  std::ifstream in(*path);
  if (!in) throw Error(Errc::io, "cannot read config file " + path->string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto base = std::filesystem::absolute(*path).parent_path();
  return parse_config(ss.str(), base, env);
}

}  // namespace morag::cli
