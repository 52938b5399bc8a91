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


#include <gtest/gtest.h>

#include <atomic>
#include <deque>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include "expect_error.hpp"
#include "httplib.h"
#include "morag/prompt/describe.hpp"
#include "recorded.hpp"
#include "temp_dir.hpp"

namespace morag::prompt {
namespace {

class ScriptedClient final : public LlmClient {
 public:
  explicit ScriptedClient(std::deque<std::string> replies) : replies_(std::move(replies)) {}

  LlmResponse complete(const LlmRequest& request) override {
    std::lock_guard lock(mu_);
    ++calls;
    last_request = request;
    if (replies_.empty()) return {"1) Torso: t 2) Hands: h 3) Legs: l", 0, 0};
    std::string r = replies_.front();
    replies_.pop_front();
    return {r, 0, 0};
  }

  std::atomic<int> calls{0};
  LlmRequest last_request;

 private:
  std::mutex mu_;
  std::deque<std::string> replies_;
};

// Template

TEST(BuildPrompt, DefaultTemplateCarriesQueryVerbatim) {
  const std::string p = build_prompt("A person is swimming", default_template());
  EXPECT_NE(p.find("Describe the below body parts position and movements involved in the action "
                   "[A person is swimming]"),
            std::string::npos);
  EXPECT_NE(p.find("1) Torso 2) Hands 3) Legs"), std::string::npos);
  EXPECT_EQ(p.rfind("Query:"), p.find("Query: Describe the below body parts position and movements "
                                      "involved in the action [A person is swimming]"));
  EXPECT_EQ(p.find(default_template().task_instructions), 0u);
}

TEST(BuildPrompt, EmptyFewShotIsInstructionsPlusQuery) {
  PromptTemplate t{"Do the task.", {}, "Q [{text}]"};
  EXPECT_EQ(build_prompt("walk", t), "Do the task.\n\nQ [walk]");
}

TEST(BuildPrompt, ExamplesAreRenderedInOrder) {
  PromptTemplate t{"I", {{"a", "A1"}, {"b", "B1"}}, "<{text}>"};
  EXPECT_EQ(build_prompt("c", t), "I\n\n<a>\nA1\n\n<b>\nB1\n\n<c>");
}

TEST(BuildPrompt, BracketInDescriptionIsVerbatim) {
  const std::string d = "a person ] jumps [ twice";
  const std::string p = build_prompt(d, default_template());
  EXPECT_NE(p.find("[" + d + "]"), std::string::npos);
  EXPECT_FALSE(brackets_balanced("[a ] b]"));
  EXPECT_TRUE(brackets_balanced("[a [b] c]"));
  EXPECT_FALSE(brackets_balanced("[a"));
}

TEST(BuildPrompt, DeterministicAndValidated) {
  EXPECT_EQ(build_prompt("x", default_template()), build_prompt("x", default_template()));
  EXPECT_ERRC(build_prompt("", default_template()), Errc::invalid_input);
  EXPECT_ERRC(build_prompt("  \n", default_template()), Errc::invalid_input);
  EXPECT_ERRC(build_prompt("x", PromptTemplate{"", {}, "{text}"}), Errc::invalid_config);
  EXPECT_ERRC(build_prompt("x", PromptTemplate{"I", {}, "no placeholder"}), Errc::invalid_config);
  EXPECT_ERRC(build_prompt("x", PromptTemplate{"I", {}, "{text} {text}"}), Errc::invalid_config);
}

TEST(Template, JsonRoundTripAndHash) {
  const auto t = default_template();
  const auto back = template_from_json(to_json(t));
  EXPECT_EQ(template_hash(back), template_hash(t));
  EXPECT_EQ(template_hash(t).size(), 16u);
  auto changed = t;
  changed.few_shot[0].output += ".";
  EXPECT_NE(template_hash(changed), template_hash(t));
  // Moving text between fields must change the hash.
  EXPECT_NE(template_hash(PromptTemplate{"ab", {}, "{text}"}),
            template_hash(PromptTemplate{"a", {{"b", ""}}, "{text}"}));
  EXPECT_ERRC(template_from_json(nlohmann::json{{"task_instructions", "x"}}), Errc::invalid_config);
}

TEST(Template, LoadFromFile) {
  testing::TempDir dir("tmpl");
  {
    std::ofstream(dir / "t.json") << to_json(PromptTemplate{"I", {}, "[{text}]"}).dump();
    std::ofstream(dir / "bad.json") << "{not json";
  }
  EXPECT_EQ(build_prompt("z", load_template(dir / "t.json")), "I\n\n[z]");
  EXPECT_ERRC(load_template(dir / "bad.json"), Errc::invalid_config);
  EXPECT_ERRC(load_template(dir / "missing.json"), Errc::io);
}

// Parser

TEST(Parse, RecordedCompletion) {
  const auto p = parse_llm_output(testing::kRaiseHandsCompletion);
  EXPECT_EQ(p.torso, testing::kRaiseHandsTorso);
  EXPECT_EQ(p.hands, testing::kRaiseHandsHands);
  EXPECT_EQ(p.legs, testing::kRaiseHandsLegs);
}

TEST(Parse, MarkerVariants) {
  for (const char* c : {"1. Torso: a\n2. Hands: b\n3. Legs: c", "TORSO: a HANDS: b legs: c",
                        "1) torso a 2) hands b 3) legs c", "  1)Torso:a   2)Hands:  b\n\n3)Legs:c  "}) {
    const auto p = parse_llm_output(c);
    EXPECT_EQ(p.torso, "a") << c;
    EXPECT_EQ(p.hands, "b") << c;
    EXPECT_EQ(p.legs, "c") << c;
  }
}

TEST(Parse, ReorderedSectionsMapByLabel) {
  const auto p = parse_llm_output("1) Legs: bent knees. 2) Torso: leaning. 3) Hands: on hips.");
  EXPECT_EQ(p.legs, "bent knees.");
  EXPECT_EQ(p.torso, "leaning.");
  EXPECT_EQ(p.hands, "on hips.");
}

TEST(Parse, MissingSectionCarriesRaw) {
  const std::string raw = "1) Torso: upright. 2) Hands: raised.";
  try {
    parse_llm_output(raw);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), Errc::parse);
    EXPECT_EQ(e.raw_completion(), raw);
    EXPECT_NE(std::string(e.what()).find("legs"), std::string::npos);
  }
  EXPECT_ERRC(parse_llm_output("1) Torso: 2) Hands: x 3) Legs: y"), Errc::parse);
  EXPECT_ERRC(parse_llm_output(""), Errc::parse);
}

TEST(Parse, SerializeRoundTrip) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> words = {"the", "arm", "moves", "up,", "slowly.", "knee", "bends"};
  for (int trial = 0; trial < 100; ++trial) {
    PartDescriptions d;
    for (std::string* f : {&d.torso, &d.hands, &d.legs}) {
      const int n = 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) *f += (i ? " " : "") + words[rng() % words.size()];
    }
    EXPECT_EQ(parse_llm_output(serialize(d)), d);
  }
}

// Cache

TEST(Cache, NormalizationAndKey) {
  EXPECT_EQ(normalize_description("  A  Person\tIS\nwalking "), "a person is walking");
  const auto t = default_template();
  EXPECT_EQ(cache_key("A person", t), cache_key("a   PERSON ", t));
  EXPECT_EQ(cache_key("x", t), template_hash(t) + ":x");
}

TEST(Cache, PersistsAppendOnlyRecords) {
  testing::TempDir dir("cache");
  const auto path = dir / "cache.jsonl";
  {
    CompletionCache c(path);
    EXPECT_EQ(c.size(), 0u);
    c.store("k1", "p1", "c1");
    c.store("k2", "p2", "c2");
    c.store("k1", "p1", "c1b");
    EXPECT_EQ(c.lookup("k1"), "c1b");
  }
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.size(), 4u);
    EXPECT_TRUE(j.contains("timestamp"));
    EXPECT_EQ(j["timestamp"].get<std::string>().size(), 20u);
    ++lines;
  }
  EXPECT_EQ(lines, 3);
  CompletionCache reloaded(path);
  EXPECT_EQ(reloaded.size(), 2u);
  EXPECT_EQ(reloaded.lookup("k1"), "c1b");
  EXPECT_EQ(reloaded.lookup("k2"), "c2");
  EXPECT_FALSE(reloaded.lookup("k3"));
}

TEST(Cache, BadRecordIsFormatError) {
  testing::TempDir dir("cachebad");
  std::ofstream(dir / "c.jsonl") << "{\"key\":\"a\",\"completion\":\"b\"}\n\n{\"key\":1}\n";
  EXPECT_ERRC(CompletionCache(dir / "c.jsonl"), Errc::format);
}

// describe_parts

TEST(Describe, RecordedFixtureThroughCache) {
  CompletionCache cache;
  const auto t = default_template();
  cache.store(cache_key(testing::kRaiseHandsText, t), "", std::string(testing::kRaiseHandsCompletion));
  const auto p = describe_parts(testing::kRaiseHandsText, t, nullptr, cache);
  EXPECT_EQ(p.torso, testing::kRaiseHandsTorso);
  EXPECT_EQ(p.hands, testing::kRaiseHandsHands);
  EXPECT_EQ(p.legs, testing::kRaiseHandsLegs);
  EXPECT_EQ(p.source, testing::kRaiseHandsText);
}

TEST(Describe, CacheHitMakesNoCalls) {
  CompletionCache cache;
  ScriptedClient client({});
  describe_parts("a person waves", default_template(), &client, cache);
  EXPECT_EQ(client.calls, 1);
  const auto again = describe_parts("A person  waves", default_template(), &client, cache);
  EXPECT_EQ(client.calls, 1);
  EXPECT_EQ(again.source, "A person  waves");
}

TEST(Describe, RetriesAfterMalformedCompletion) {
  CompletionCache cache;
  ScriptedClient client({"I cannot help with that.", std::string(testing::kRaiseHandsCompletion)});
  DescribeOptions opts;
  opts.retries = 2;
  opts.model = "m";
  opts.params = {{"temperature", 0.0}};
  const auto p = describe_parts("raise", default_template(), &client, cache, opts);
  EXPECT_EQ(client.calls, 2);
  EXPECT_EQ(p.hands, testing::kRaiseHandsHands);
  EXPECT_EQ(client.last_request.max_tokens, 256u);
  EXPECT_EQ(client.last_request.model_id, "m");
  EXPECT_EQ(client.last_request.prompt, build_prompt("raise", default_template()));
  EXPECT_EQ(cache.size(), 1u);
}

TEST(Describe, ExhaustedRetries) {
  CompletionCache cache;
  ScriptedClient client({"nope 1", "nope 2", "nope 3", "1) Torso: a 2) Hands: b 3) Legs: c"});
  DescribeOptions opts;
  opts.retries = 2;
  try {
    describe_parts("x", default_template(), &client, cache, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_exhausted);
    EXPECT_NE(std::string(e.what()).find("nope 3"), std::string::npos);
  }
  EXPECT_EQ(client.calls, 3);
  EXPECT_EQ(cache.size(), 0u);
}

TEST(Describe, NoClientAndNoCache) {
  CompletionCache cache;
  EXPECT_ERRC(describe_parts("x", default_template(), nullptr, cache), Errc::missing_dependency);
}

TEST(Describe, ManyPreservesOrderAndSharesCache) {
  CompletionCache cache;
  ScriptedClient client({});
  std::vector<std::string> texts;
  for (int i = 0; i < 20; ++i) texts.push_back("text " + std::to_string(i % 10));
  const auto out = describe_many(texts, default_template(), &client, cache, {}, 4);
  ASSERT_EQ(out.size(), texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(out[i].source, texts[i]);
  EXPECT_GE(client.calls, 10);
  EXPECT_LE(client.calls, 20);
  EXPECT_EQ(cache.size(), 10u);
}

// HTTP client

LlmRequest request(std::string prompt) {
  LlmRequest r;
  r.prompt = std::move(prompt);
  return r;
}

class LocalServer {
 public:
  explicit LocalServer(httplib::Server::Handler handler) {
    server_.Post("/v1/completions", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/completions"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpClient, RequestAndResponseContract) {
  nlohmann::json seen;
  std::string auth;
  LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"text":"1) Torso: a 2) Hands: b 3) Legs: c"}],
                       "usage":{"prompt_tokens":12,"completion_tokens":9}})",
                    "application/json");
  });
  HttpLlmClient client(server.url(), "secret");
  LlmRequest req;
  req.prompt = "hello";
  req.model_id = "tiny";
  req.params = {{"temperature", 0.2}};
  const auto r = client.complete(req);
  EXPECT_EQ(r.completion, "1) Torso: a 2) Hands: b 3) Legs: c");
  EXPECT_EQ(r.prompt_tokens, 12u);
  EXPECT_EQ(r.completion_tokens, 9u);
  EXPECT_EQ(seen["model"], "tiny");
  EXPECT_EQ(seen["prompt"], "hello");
  EXPECT_EQ(seen["max_tokens"], 256);
  EXPECT_EQ(seen["temperature"], 0.2);
  EXPECT_EQ(auth, "Bearer secret");
}

TEST(HttpClient, FailuresAreEndpointErrors) {
  LocalServer server([](const httplib::Request& req, httplib::Response& res) {
    if (req.body.find("500") != std::string::npos) {
      res.status = 500;
    } else if (req.body.find("garbage") != std::string::npos) {
      res.set_content("<html>", "text/html");
    } else {
      res.set_content(R"({"result":"x"})", "application/json");
    }
  });
  HttpLlmClient client(server.url(), "");
  EXPECT_ERRC(client.complete(request("500")), Errc::endpoint);
  EXPECT_ERRC(client.complete(request("garbage")), Errc::endpoint);
  EXPECT_ERRC(client.complete(request("fine")), Errc::endpoint);
  HttpLlmClient dead("http://127.0.0.1:1/v1", "", std::chrono::seconds(2));
  EXPECT_ERRC(dead.complete(request("x")), Errc::endpoint);
}

TEST(HttpClient, RejectsBadUrls) {
  EXPECT_ERRC(HttpLlmClient("localhost:80", ""), Errc::invalid_config);
  EXPECT_ERRC(HttpLlmClient("ftp://x/y", ""), Errc::invalid_config);
}

TEST(ResponseBody, AcceptsCompletionField) {
  EXPECT_EQ(parse_response_body({{"completion", "abc"}}).completion, "abc");
  EXPECT_ERRC(parse_response_body({{"choices", nlohmann::json::array()}}), Errc::endpoint);
  const auto body = request_body(LlmRequest{"p", 64, "m", {{"top_p", 0.9}}});
  EXPECT_EQ(body["max_tokens"], 64);
  EXPECT_EQ(body["top_p"], 0.9);
}

}  // namespace
}  // namespace morag::prompt
