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


#include "pipeline_fixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "morag/cli/app.hpp"
#include "morag/io/binary.hpp"
#include "morag/motion/file.hpp"
#include "morag/motion/skeleton.hpp"
#include "morag/prompt/cache.hpp"
#include "morag/prompt/template.hpp"
#include "morag/retrieval/storage.hpp"
#include "morag/simd/kernels.hpp"
#include "recorded.hpp"

namespace morag::testing {
namespace {

namespace fs = std::filesystem;

// Platform-independent draws: 53 random bits scaled by a power of two.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : gen_(seed) {}
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * u01(); }

 private:
  std::mt19937_64 gen_;
};

struct FixtureMotion {
  const char* id;
  std::uint32_t frames;
  const char* text;
  bool raises_hands;
  bool still_legs;
};

constexpr std::array<FixtureMotion, 8> kMotions = {{
    {"002573", 52, "a person uses their hands to clap", false, true},
    {"002315", 60, "a person raises his hands above his head.", true, true},
    {"000813", 44, "person stands still and lifts right hand to face and mouth area", false, true},
    {"001179", 56, "a person raises his right arm and then lowers it.", true, true},
    {"007523", 48, "a figure claps around shoulder height", false, true},
    {"006123", 72,
     "a person grabs their right foot and places it on their left thigh, and balances on one "
     "foot and then does the same with the other foot.",
     false, false},
    {"011583", 40, "raising and lowering arms.", true, false},
    {"009917", 64, "a person balances on their left leg and then their right.", false, false},
}};

// Per part, the three ids that should lead the ranking, in order.
const std::map<retrieval::Part, std::array<std::string, 3>>& leaders() {
  static const std::map<retrieval::Part, std::array<std::string, 3>> m = {
      {retrieval::Part::torso, {"002573", "000813", "006123"}},
      {retrieval::Part::hands, {"002315", "001179", "011583"}},
      {retrieval::Part::legs, {"002315", "007523", "009917"}},
  };
  return m;
}

motion::Rot6 rot6(PortableRng& rng) {
  double q[4];
  double n = 0.0;
  do {
    n = 0.0;
    for (double& x : q) {
      x = rng.range(-1.0, 1.0);
      n += x * x;
    }
  } while (n < 1e-3);
  n = std::sqrt(n);
  const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  return {1 - 2 * (y * y + z * z), 2 * (x * y + w * z), 2 * (x * z - w * y),
          2 * (x * y - w * z),     1 - 2 * (x * x + z * z), 2 * (y * z + w * x)};
}

motion::JointMotion make_motion(const FixtureMotion& fm, std::uint64_t seed) {
  PortableRng rng(seed);
  motion::JointMotion m;
  m.fps = 20.0;
  motion::Pose p;
  p.root_translation = {rng.range(-1, 1), rng.range(0.85, 0.95), rng.range(-1, 1)};
  p.root_heading = rng.range(-1, 1);
  for (std::size_t j = 1; j < motion::kNumJoints; ++j) {
    for (double& c : p.joint_positions[j]) c = rng.range(-0.8, 0.8);
  }
  for (std::uint32_t t = 0; t < fm.frames; ++t) {
    for (auto& r : p.joint_rotations) r = rot6(rng);
    m.poses.push_back(p);
    if (!fm.still_legs) {
      p.root_heading += rng.range(-0.05, 0.05);
      p.root_translation[0] += rng.range(-0.02, 0.04);
      p.root_translation[2] += rng.range(-0.02, 0.04);
    }
    for (std::size_t j = 1; j < motion::kNumJoints; ++j) {
      for (double& c : p.joint_positions[j]) c += rng.range(-0.01, 0.01);
    }
    if (fm.raises_hands) {
      for (std::size_t j : {motion::kLeftElbow, motion::kRightElbow, motion::kLeftWrist,
                            motion::kRightWrist}) {
        p.joint_positions[j][1] += 0.015;
      }
    }
  }
  return m;
}

std::vector<float> uniform_vector(PortableRng& rng, std::size_t dim) {
  std::vector<float> v(dim);
  for (float& x : v) x = static_cast<float>(rng.range(-1.0, 1.0));
  return v;
}

void write_f32_rows(const fs::path& path, const std::vector<std::vector<float>>& rows) {
  io::ByteWriter w;
  for (const auto& r : rows) {
    for (float x : r) w.f32(x);
  }
  io::write_file(path, w.buffer());
}

std::string read_text(const fs::path& p) {
  const auto bytes = io::read_file(p);
  return {bytes.begin(), bytes.end()};
}

const std::string& part_description(retrieval::Part part) {
  static const std::map<retrieval::Part, std::string> m = {
      {retrieval::Part::torso, std::string(kRaiseHandsTorso)},
      {retrieval::Part::hands, std::string(kRaiseHandsHands)},
      {retrieval::Part::legs, std::string(kRaiseHandsLegs)},
  };
  return m.at(part);
}

int run_cli(const std::vector<std::string>& args, const fs::path& stdout_path,
            std::vector<std::string>& failures) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err, [](const std::string&) { return std::nullopt; });
  if (!stdout_path.empty()) io::write_text_file(stdout_path, out.str());
  if (rc != cli::kExitOk) {
    failures.push_back("morag " + args[2] + " exited " + std::to_string(rc) + ": " + err.str());
  }
  return rc;
}

}  // namespace

void write_pipeline_inputs(const fs::path& dir) {
  fs::create_directories(dir / "motions");
  fs::create_directories(dir / "eval");

  for (std::size_t i = 0; i < kMotions.size(); ++i) {
    motion::write_motion(dir / "motions" / (std::string(kMotions[i].id) + ".moragmo"),
                         make_motion(kMotions[i], 1000 + i));
  }

  nlohmann::ordered_json lookup_lines = nlohmann::ordered_json::array();
  std::uint64_t part_seed = 2000;
  for (retrieval::Part part : retrieval::kParts) {
    const std::string name(retrieval::to_string(part));
    PortableRng rng(part_seed++);
    const std::vector<float> query = uniform_vector(rng, kFixtureDim);

    // Leaders get a dominant query component; the rest trail with fixed,
    // well separated weights so no two scores are near a tie.
    std::map<std::string, double> weight;
    const auto& lead = leaders().at(part);
    weight[lead[0]] = 6.0;
    weight[lead[1]] = 2.0;
    weight[lead[2]] = 1.2;
    double trailing = 0.6;
    for (const auto& m : kMotions) {
      if (!weight.count(m.id)) {
        weight[m.id] = trailing;
        trailing -= 0.5;
      }
    }

    std::string manifest;
    std::vector<std::vector<float>> rows;
    for (const auto& m : kMotions) {
      retrieval::ManifestRecord rec{m.id, part, m.frames, m.text,
                                    "motions/" + std::string(m.id) + ".moragmo"};
      manifest += retrieval::manifest_line(rec) + "\n";
      std::vector<float> e = uniform_vector(rng, kFixtureDim);
      for (std::size_t d = 0; d < kFixtureDim; ++d) {
        e[d] = static_cast<float>(weight[m.id] * query[d] + static_cast<double>(e[d]));
      }
      rows.push_back(std::move(e));
    }
    io::write_text_file(dir / ("manifest_" + name + ".jsonl"), manifest);
    write_f32_rows(dir / ("vectors_" + name + ".f32"), rows);

    std::ostringstream out, err;
    const int rc = cli::run({"build-db", "--manifest", (dir / ("manifest_" + name + ".jsonl")).string(),
                             "--vectors", (dir / ("vectors_" + name + ".f32")).string(), "--part",
                             name, "--out", (dir / (name + ".moragdb")).string(), "--dim",
                             std::to_string(kFixtureDim)},
                            out, err, [](const std::string&) { return std::nullopt; });
    if (rc != 0) throw std::runtime_error("fixture build-db failed: " + err.str());

    nlohmann::ordered_json line;
    line["part"] = name;
    line["text"] = part_description(part);
    line["embedding"] = query;
    lookup_lines.push_back(std::move(line));
  }
  std::string lookup;
  for (const auto& l : lookup_lines) lookup += l.dump() + "\n";
  io::write_text_file(dir / "embeddings.jsonl", lookup);

  const auto tmpl = prompt::default_template();
  nlohmann::ordered_json rec;
  rec["key"] = prompt::cache_key(kRaiseHandsText, tmpl);
  rec["prompt"] = prompt::build_prompt(kRaiseHandsText, tmpl);
  rec["completion"] = kRaiseHandsCompletion;
  rec["timestamp"] = "2026-01-01T00:00:00Z";
  io::write_text_file(dir / "cache.jsonl", rec.dump() + "\n");

  PortableRng rng(3000);
  std::vector<std::vector<float>> text, gen, real;
  std::string labels;
  for (std::size_t i = 0; i < kEvalRows; ++i) {
    text.push_back(uniform_vector(rng, kEvalDim));
    std::vector<float> g(kEvalDim), r(kEvalDim);
    for (std::size_t d = 0; d < kEvalDim; ++d) {
      g[d] = static_cast<float>(static_cast<double>(text.back()[d]) + 0.875 * rng.range(-1, 1));
      r[d] = static_cast<float>(1.125 * rng.range(-1, 1) + 0.0625);
    }
    gen.push_back(std::move(g));
    real.push_back(std::move(r));
    labels += i % 2 == 0 ? "walk\n" : "jump\n";
  }
  write_f32_rows(dir / "eval" / "text.f32", text);
  write_f32_rows(dir / "eval" / "motion.f32", gen);
  write_f32_rows(dir / "eval" / "real.f32", real);
  io::write_text_file(dir / "eval" / "labels.txt", labels);

  io::write_text_file(dir / "morag.conf",
                      "# Pipeline fixture: paths resolve against this file's directory.\n"
                      "db.torso = torso.moragdb\n"
                      "db.hands = hands.moragdb\n"
                      "db.legs = legs.moragdb\n"
                      "llm.cache = cache.jsonl\n"
                      "retrieve.embeddings = embeddings.jsonl\n"
                      "compose.k = 3\n"
                      "metrics.seeds = 0, 1\n"
                      "metrics.subset_size = 16\n"
                      "metrics.pool_size = 32\n"
                      "metrics.mm_pairs = 10\n");
}

std::vector<std::string> run_pipeline(const fs::path& data_dir, const fs::path& out_dir) {
  // Golden bytes are defined under the portable kernel.
  const simd::Backend saved = simd::active_backend();
  simd::set_backend(simd::Backend::scalar);
  std::vector<std::string> failures;
  fs::create_directories(out_dir);
  const std::string conf = (data_dir / "morag.conf").string();
  const std::string text(kRaiseHandsText);
  run_cli({"--config", conf, "retrieve", text, "--out", (out_dir / "retrieval.json").string()},
          out_dir / "retrieve.stdout", failures);
  run_cli({"--config", conf, "compose", text, "--out-dir", (out_dir / "composed").string()},
          out_dir / "compose.stdout", failures);
  const fs::path eval = data_dir / "eval";
  run_cli({"--config", conf, "eval", "--text", (eval / "text.f32").string(), "--motion",
           (eval / "motion.f32").string(), "--real", (eval / "real.f32").string(), "--groups",
           (eval / "labels.txt").string(), "--dim", std::to_string(kEvalDim), "--out",
           (out_dir / "eval.jsonl").string()},
          {}, failures);
  simd::set_backend(saved);
  return failures;
}

std::vector<std::string> compare_trees(const fs::path& expected, const fs::path& actual) {
  auto listing = [](const fs::path& root) {
    std::set<std::string> files;
    if (!fs::is_directory(root)) return files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_regular_file()) files.insert(fs::relative(e.path(), root).generic_string());
    }
    return files;
  };
  const auto a = listing(expected), b = listing(actual);
  std::vector<std::string> diffs;
  for (const auto& f : a) {
    if (!b.count(f)) {
      diffs.push_back(f + ": missing");
    } else if (read_text(expected / f) != read_text(actual / f)) {
      diffs.push_back(f + ": bytes differ");
    }
  }
  for (const auto& f : b) {
    if (!a.count(f)) diffs.push_back(f + ": unexpected");
  }
  return diffs;
}

}  // namespace morag::testing
