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

#include "morag/cli/app.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "morag/cli/embeddings.hpp"
#include "morag/compose/composer.hpp"
#include "morag/contrastive/toy_trainer.hpp"
#include "morag/io/binary.hpp"
#include "morag/metrics/frechet.hpp"
#include "morag/metrics/metrics.hpp"
#include "morag/motion/file.hpp"
#include "morag/prompt/describe.hpp"
#include "morag/retrieval/storage.hpp"

namespace morag::cli {
namespace {

using nlohmann::ordered_json;
using retrieval::Part;

struct Context {
  EngineConfig cfg;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  std::ostream& out;
  std::ostream& err;

  void log(const std::string& msg) const {
    if (verbose) err << "morag: " << msg << '\n';
  }
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// ---- describe ---------------------------------------------------------------

class LoggingClient final : public prompt::LlmClient {
 public:
  LoggingClient(const Context& ctx, std::unique_ptr<prompt::LlmClient> inner)
      : ctx_(ctx), inner_(std::move(inner)) {}

  prompt::LlmResponse complete(const prompt::LlmRequest& request) override {
    const std::size_t n = ++calls_;
    ctx_.log("llm request " + std::to_string(n) + " -> " + ctx_.cfg.llm.endpoint);
    return inner_->complete(request);
  }

 private:
  const Context& ctx_;
  std::unique_ptr<prompt::LlmClient> inner_;
  std::atomic<std::size_t> calls_{0};
};

struct Describer {
  prompt::PromptTemplate tmpl;
  std::unique_ptr<prompt::CompletionCache> cache;
  std::unique_ptr<prompt::LlmClient> client;
  prompt::DescribeOptions options;
};

Describer make_describer(const Context& ctx) {
  Describer d;
  d.tmpl = ctx.cfg.prompt_template ? prompt::load_template(*ctx.cfg.prompt_template)
                                   : prompt::default_template();
  d.cache = ctx.cfg.llm.cache ? std::make_unique<prompt::CompletionCache>(*ctx.cfg.llm.cache)
                              : std::make_unique<prompt::CompletionCache>();
  if (!ctx.cfg.llm.endpoint.empty()) {
    d.client = std::make_unique<LoggingClient>(
        ctx, std::make_unique<prompt::HttpLlmClient>(ctx.cfg.llm.endpoint, ctx.cfg.llm.api_key));
  }
  d.options.retries = ctx.cfg.llm.retries;
  d.options.max_tokens = ctx.cfg.llm.max_tokens;
  d.options.model = ctx.cfg.llm.model;
  return d;
}

prompt::PartDescriptions describe(const Context& ctx, Describer& d, const std::string& text) {
  if (d.cache->lookup(prompt::cache_key(text, d.tmpl))) ctx.log("cache hit: " + text);
  return prompt::describe_parts(text, d.tmpl, d.client.get(), *d.cache, d.options);
}

ordered_json descriptions_json(const prompt::PartDescriptions& p) {
  ordered_json j;
  j["source"] = p.source;
  j["torso"] = p.torso;
  j["hands"] = p.hands;
  j["legs"] = p.legs;
  return j;
}

const std::string& part_text(const prompt::PartDescriptions& p, Part part) {
  switch (part) {
    case Part::torso: return p.torso;
    case Part::hands: return p.hands;
    case Part::legs: break;
  }
  return p.legs;
}

int cmd_describe(const Context& ctx, const std::vector<std::string>& texts) {
  Describer d = make_describer(ctx);
  for (const auto& t : texts) {
    if (d.cache->lookup(prompt::cache_key(t, d.tmpl))) ctx.log("cache hit: " + t);
  }
  const auto results = prompt::describe_many(texts, d.tmpl, d.client.get(), *d.cache, d.options,
                                             ctx.cfg.llm.max_in_flight);
  for (const auto& r : results) ctx.out << descriptions_json(r).dump() << '\n';
  return kExitOk;
}

// ---- retrieve / compose -----------------------------------------------------

struct Retrieval {
  retrieval::PartDatabases dbs;
  prompt::PartDescriptions descriptions;
  retrieval::PartResults results;
};

std::shared_ptr<const retrieval::PartDatabase> load_db(
    const Context& ctx, const std::optional<std::filesystem::path>& path, Part part) {
  const std::string key = "db." + std::string(retrieval::to_string(part));
  if (!path) throw Error(Errc::configuration, key + " is not configured");
  auto db = std::make_shared<retrieval::PartDatabase>(retrieval::load(*path));
  if (db->part() != part) {
    throw Error(Errc::format, path->string() + " holds a " +
                                  std::string(retrieval::to_string(db->part())) +
                                  " database, expected " + std::string(retrieval::to_string(part)));
  }
  ctx.log("loaded " + key + ": " + std::to_string(db->size()) + " entries, dim " +
          std::to_string(db->dimension()));
  return db;
}

Retrieval run_retrieval(const Context& ctx, const std::string& text, std::size_t k) {
  Retrieval r;
  r.dbs.torso = load_db(ctx, ctx.cfg.db_torso, Part::torso);
  r.dbs.hands = load_db(ctx, ctx.cfg.db_hands, Part::hands);
  r.dbs.legs = load_db(ctx, ctx.cfg.db_legs, Part::legs);

  Describer d = make_describer(ctx);
  r.descriptions = describe(ctx, d, text);

  EmbeddingLookup lookup;
  if (ctx.cfg.embeddings) lookup = EmbeddingLookup::load(*ctx.cfg.embeddings);
  std::optional<prompt::JsonEndpoint> encoder;
  if (!ctx.cfg.embed_endpoint.empty()) encoder.emplace(ctx.cfg.embed_endpoint, ctx.cfg.llm.api_key);

  retrieval::PartQueries queries;
  for (Part part : retrieval::kParts) {
    const std::string& desc = part_text(r.descriptions, part);
    std::vector<double> q;
    if (const auto* hit = lookup.find(part, desc)) {
      q = *hit;
    } else if (encoder) {
      ctx.log("embedding request for " + std::string(retrieval::to_string(part)));
      q = remote_embedding(*encoder, part, desc);
    } else {
      throw Error(Errc::missing_dependency,
                  "no " + std::string(retrieval::to_string(part)) +
                      " embedding for description \"" + desc +
                      "\"; run `morag describe` and export its embeddings into "
                      "retrieve.embeddings, or set embed.endpoint");
    }
    (part == Part::torso ? queries.torso : part == Part::hands ? queries.hands : queries.legs) =
        std::move(q);
  }
  r.results = retrieval::retrieve_parts(r.dbs, queries, k);
  return r;
}

ordered_json retrieval_json(const std::string& text, std::size_t k, const Retrieval& r) {
  ordered_json j;
  j["text"] = text;
  j["k"] = k;
  ordered_json parts = ordered_json::array();
  for (Part part : retrieval::kParts) {
    const auto& res = r.results.get(part);
    ordered_json pj;
    pj["part"] = retrieval::to_string(part);
    pj["description"] = part_text(r.descriptions, part);
    pj["truncated"] = res.truncated;
    ordered_json hits = ordered_json::array();
    for (std::size_t i = 0; i < res.hits.size(); ++i) {
      const auto& h = res.hits[i];
      ordered_json hj;
      hj["rank"] = i + 1;
      hj["id"] = h.id;
      hj["score"] = h.score;
      hj["frames"] = h.length;
      hj["motion_ref"] = h.motion_ref;
      hj["text"] = h.source_text;
      hits.push_back(std::move(hj));
    }
    pj["hits"] = std::move(hits);
    parts.push_back(std::move(pj));
  }
  j["results"] = std::move(parts);
  return j;
}

void print_tables(std::ostream& out, const Retrieval& r) {
  for (Part part : retrieval::kParts) {
    const auto& res = r.results.get(part);
    out << retrieval::to_string(part) << ": " << part_text(r.descriptions, part) << '\n';
    out << "  " << pad("rank", 6) << pad("id", 12) << pad("score", 11) << pad("frames", 8)
        << "text\n";
    for (std::size_t i = 0; i < res.hits.size(); ++i) {
      const auto& h = res.hits[i];
      out << "  " << pad(std::to_string(i + 1), 6) << pad(h.id, 12)
          << pad(fmt("%.6f", h.score), 11) << pad(std::to_string(h.length), 8) << h.source_text
          << '\n';
    }
    if (res.truncated) out << "  (k exceeds database size; all entries returned)\n";
  }
}

void check_k(std::size_t k) {
  if (k == 0) throw Error(Errc::invalid_input, "k must be at least 1");
}

int cmd_retrieve(const Context& ctx, const std::string& text, std::size_t k,
                 const std::string& out_path) {
  check_k(k);
  const Retrieval r = run_retrieval(ctx, text, k);
  print_tables(ctx.out, r);
  io::write_text_file(out_path, retrieval_json(text, k, r).dump(2) + "\n");
  ctx.log("wrote " + out_path);
  return kExitOk;
}

int cmd_compose(const Context& ctx, const std::string& text, std::size_t k,
                const std::filesystem::path& out_dir) {
  check_k(k);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(Errc::io, "cannot create output directory " + out_dir.string() +
                              (ec ? ": " + ec.message() : ""));
  }

  const Retrieval r = run_retrieval(ctx, text, k);
  const compose::MotionLoader loader = [&](Part part, const retrieval::RetrievalHit& hit) {
    std::filesystem::path p(hit.motion_ref);
    if (p.is_relative()) p = r.dbs.get(part)->base_dir() / p;
    return motion::read_joint_motion(p);
  };
  compose::ComposeOptions options;
  options.trim = ctx.cfg.trim;
  const auto composed =
      compose::compose_topk(r.results, k, ctx.cfg.effective_partition(), loader, options);

  ctx.out << pad("rank", 6) << pad("torso", 12) << pad("hands", 12) << pad("legs", 12)
          << pad("frames", 8) << "file\n";
  for (const auto& c : composed) {
    const std::string stem = "compose_" + std::to_string(c.provenance.rank);
    const auto motion_path = out_dir / (stem + ".moragmo");
    motion::write_motion(motion_path, c.motion);
    io::write_text_file(out_dir / (stem + ".json"), compose::provenance_json(c.provenance));
    ctx.out << pad(std::to_string(c.provenance.rank), 6) << pad(c.provenance.torso_id, 12)
            << pad(c.provenance.hands_id, 12) << pad(c.provenance.legs_id, 12)
            << pad(std::to_string(c.provenance.f_min), 8) << motion_path.filename().string()
            << '\n';
  }
  return kExitOk;
}

// ---- build-db ---------------------------------------------------------------

int cmd_build_db(const Context& ctx, const std::filesystem::path& manifest_path,
                 const std::filesystem::path& vectors_path, const std::string& part_name,
                 const std::filesystem::path& out_path, std::size_t dim) {
  const Part part = retrieval::part_from_string(part_name);
  if (dim == 0) throw Error(Errc::invalid_input, "--dim must be at least 1");
  if (!std::filesystem::is_regular_file(manifest_path)) {
    throw Error(Errc::io, "no such manifest " + manifest_path.string());
  }
  if (!std::filesystem::is_regular_file(vectors_path)) {
    throw Error(Errc::io, "no such vectors file " + vectors_path.string());
  }
  const auto records = retrieval::read_manifest(manifest_path);
  const auto vectors = retrieval::read_vectors(vectors_path, dim);
  if (records.size() != vectors.size()) {
    throw Error(Errc::io, "manifest has " + std::to_string(records.size()) +
                              " records but vectors file has " + std::to_string(vectors.size()) +
                              " rows of dimension " + std::to_string(dim));
  }
  std::vector<retrieval::DatabaseEntry> entries;
  entries.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.part != part) {
      throw Error(Errc::format, manifest_path.string() + ": record " + std::to_string(i + 1) +
                                    " ('" + rec.id + "') is tagged " +
                                    std::string(retrieval::to_string(rec.part)) + ", expected " +
                                    part_name);
    }
    entries.push_back({rec.id, vectors[i], rec.motion_path, rec.frames, rec.text});
  }
  const auto db = retrieval::PartDatabase::build(part, std::move(entries));
  retrieval::save(db, out_path);
  ctx.out << "wrote " << out_path.string() << ": " << db.size() << " entries, dimension "
          << db.dimension() << '\n';
  return kExitOk;
}

// ---- eval -------------------------------------------------------------------

metrics::FeatureMatrix read_features(const std::filesystem::path& path, std::size_t dim) {
  const auto rows = retrieval::read_vectors(path, dim);
  if (rows.empty()) throw Error(Errc::format, path.string() + ": feature set is empty");
  metrics::FeatureMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < dim; ++c) {
      const double v = rows[i][c];
      if (!std::isfinite(v)) {
        throw Error(Errc::format, path.string() + ": non-finite value in row " + std::to_string(i));
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

std::vector<metrics::FeatureGroup> read_groups(const std::filesystem::path& labels_path,
                                               const metrics::FeatureMatrix& feats) {
  std::ifstream in(labels_path);
  if (!in) throw Error(Errc::io, "cannot read labels file " + labels_path.string());
  std::vector<std::string> labels;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    labels.push_back(line);
  }
  if (labels.size() != static_cast<std::size_t>(feats.rows())) {
    throw Error(Errc::format, labels_path.string() + " has " + std::to_string(labels.size()) +
                                  " labels for " + std::to_string(feats.rows()) + " feature rows");
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& m = members[labels[i]];
    if (m.empty()) order.push_back(labels[i]);
    m.push_back(static_cast<Eigen::Index>(i));
  }
  std::vector<metrics::FeatureGroup> groups;
  for (const auto& label : order) {
    const auto& idx = members[label];
    metrics::FeatureGroup g;
    g.label = label;
    g.rows.resize(static_cast<Eigen::Index>(idx.size()), feats.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      g.rows.row(static_cast<Eigen::Index>(r)) = feats.row(idx[r]);
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

struct EvalPaths {
  std::string text;
  std::string motion;
  std::string real;
  std::string groups;
  std::string out;
  std::size_t dim = 0;
};

int cmd_eval(const Context& ctx, const EvalPaths& paths) {
  if (paths.dim == 0) throw Error(Errc::invalid_input, "--dim must be at least 1");
  const auto motion = read_features(paths.motion, paths.dim);
  std::optional<metrics::FeatureMatrix> text;
  if (!paths.text.empty()) {
    text = read_features(paths.text, paths.dim);
    if (text->rows() != motion.rows()) {
      throw Error(Errc::shape, "text and motion feature sets differ in row count");
    }
  }
  std::optional<double> fid;
  if (!paths.real.empty()) {
    const auto real = read_features(paths.real, paths.dim);
    fid = metrics::frechet_distance(metrics::gaussian_stats(real), metrics::gaussian_stats(motion));
  }
  std::vector<metrics::FeatureGroup> groups;
  if (!paths.groups.empty()) groups = read_groups(paths.groups, motion);

  const std::vector<std::uint64_t> seeds =
      ctx.seed ? std::vector<std::uint64_t>{*ctx.seed} : ctx.cfg.metric_seeds;

  std::ostringstream report;
  for (const std::uint64_t seed : seeds) {
    ordered_json j;
    j["seed"] = seed;
    if (text) {
      const auto rp = metrics::r_precision(*text, motion, ctx.cfg.pool_size, seed);
      j["r_precision"] = {{"top1", rp.top1}, {"top2", rp.top2}, {"top3", rp.top3}};
      j["mm_dist"] = metrics::mm_dist(*text, motion);
    } else {
      j["r_precision"] = nullptr;
      j["mm_dist"] = nullptr;
    }
    j["diversity"] = metrics::diversity(motion, ctx.cfg.subset_size, seed);
    if (groups.empty()) {
      j["multimodality"] = nullptr;
    } else {
      j["multimodality"] = metrics::multimodality(groups, ctx.cfg.mm_pairs, seed);
    }
    if (fid) {
      j["fid"] = *fid;
    } else {
      j["fid"] = nullptr;
    }
    j["config"] = {{"seeds", seeds},
                   {"subset_size", ctx.cfg.subset_size},
                   {"pool_size", ctx.cfg.pool_size}};
    report << j.dump() << '\n';
  }
  ctx.out << report.str();
  if (!paths.out.empty()) io::write_text_file(paths.out, report.str());
  return kExitOk;
}

// ---- train-toy --------------------------------------------------------------

contrastive::RowMatrix matrix_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw Error(Errc::format, name + " must be a non-empty array of non-empty rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  contrastive::RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw Error(Errc::format, name + ": row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw Error(Errc::format, name + ": entries must be numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

int cmd_train_toy(const Context& ctx, const std::filesystem::path& pairs_path,
                  std::optional<std::size_t> epochs, std::optional<double> lr) {
  const auto bytes = io::read_file(pairs_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::format, pairs_path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("text_features") || !j.contains("motion_features")) {
    throw Error(Errc::format, pairs_path.string() +
                                  ": expected an object with text_features and motion_features");
  }
  contrastive::TrainingPairs pairs;
  pairs.text_features = matrix_from_json(j["text_features"], "text_features");
  pairs.motion_features = matrix_from_json(j["motion_features"], "motion_features");
  if (j.contains("text_sims") && !j["text_sims"].is_null()) {
    pairs.text_sims = matrix_from_json(j["text_sims"], "text_sims");
  }

  contrastive::TrainOptions opts;
  opts.epochs = epochs.value_or(ctx.cfg.train_epochs);
  opts.learning_rate = lr.value_or(ctx.cfg.train_learning_rate);
  opts.seed = ctx.seed.value_or(0);
  opts.embedding_dim = ctx.cfg.train_embedding_dim;
  const auto result = contrastive::train_toy_projection(pairs, ctx.cfg.loss, opts);

  ordered_json report;
  report["pairs"] = pairs.text_features.rows();
  report["epochs"] = opts.epochs;
  report["learning_rate"] = opts.learning_rate;
  report["seed"] = opts.seed;
  report["initial_loss"] = result.loss_trace.front();
  report["final_loss"] = result.loss_trace.back();
  report["initial_nce"] = result.nce_trace.front();
  report["final_nce"] = result.nce_trace.back();
  ctx.out << report.dump() << '\n';
  return kExitOk;
}

}  // namespace

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_config:
    case Errc::configuration:
    case Errc::invalid_input:
    case Errc::range:
      return kExitUsage;
    case Errc::io:
    case Errc::endpoint:
    case Errc::load:
      return kExitIo;
    case Errc::missing_dependency:
      return kExitMissingDependency;
    default:
      return kExitDataFormat;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
  CLI::App app{"Part-specific motion retrieval and composition", "morag"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  bool verbose = false;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sampling and initialization");
  app.add_flag("--verbose", verbose, "Log progress to stderr");

  std::string manifest, vectors, part, db_out;
  std::size_t db_dim = 256;
  auto* build = app.add_subcommand("build-db", "Build a part database from manifest + vectors");
  build->add_option("--manifest", manifest, "JSONL manifest")->required();
  build->add_option("--vectors", vectors, "Little-endian float32 vectors, one row per record")
      ->required();
  build->add_option("--part", part, "torso, hands or legs")->required();
  build->add_option("--out", db_out, "Output database file")->required();
  build->add_option("--dim", db_dim, "Embedding dimension")->capture_default_str();

  std::vector<std::string> describe_texts;
  auto* describe_cmd = app.add_subcommand("describe", "Split descriptions into part texts");
  describe_cmd->add_option("text", describe_texts, "Motion description(s)")->required();

  std::string retrieve_text, retrieve_out = "retrieval.json";
  std::optional<std::size_t> retrieve_k;
  auto* retrieve = app.add_subcommand("retrieve", "Query the three part databases");
  retrieve->add_option("text", retrieve_text, "Motion description")->required();
  retrieve->add_option("-k,--k", retrieve_k, "Results per part (default compose.k)");
  retrieve->add_option("--out", retrieve_out, "Results JSON path")->capture_default_str();

  std::string compose_text, compose_dir = "composed";
  std::optional<std::size_t> compose_k;
  auto* compose_cmd = app.add_subcommand("compose", "Retrieve and compose full-body motions");
  compose_cmd->add_option("text", compose_text, "Motion description")->required();
  compose_cmd->add_option("-k,--k", compose_k, "Compositions to write (default compose.k)");
  compose_cmd->add_option("--out-dir", compose_dir, "Output directory")->capture_default_str();

  EvalPaths eval_paths;
  auto* eval = app.add_subcommand("eval", "Evaluation metrics over feature sets");
  eval->add_option("--motion", eval_paths.motion, "Generated motion features")->required();
  eval->add_option("--text", eval_paths.text, "Text features aligned with --motion");
  eval->add_option("--real", eval_paths.real, "Real motion features (enables fid)");
  eval->add_option("--groups", eval_paths.groups, "Per-row text labels (enables multimodality)");
  eval->add_option("--dim", eval_paths.dim, "Feature dimension")->required();
  eval->add_option("--out", eval_paths.out, "Also write the report here");

  std::string pairs_path;
  std::optional<std::size_t> train_epochs;
  std::optional<double> train_lr;
  auto* train = app.add_subcommand("train-toy", "Fit toy linear projections with InfoNCE");
  train->add_option("pairs", pairs_path, "JSON {text_features, motion_features, text_sims?}")
      ->required();
  train->add_option("--epochs", train_epochs, "Override train.epochs");
  train->add_option("--lr", train_lr, "Override train.learning_rate");

  std::vector<std::string> argv_storage = {"morag"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::optional<std::filesystem::path> cfg_path;
    if (!config_path.empty()) cfg_path = config_path;
    Context ctx{load_config(cfg_path, env), std::nullopt, verbose, out, err};
    if (*seed_opt) ctx.seed = seed;

    if (*build) return cmd_build_db(ctx, manifest, vectors, part, db_out, db_dim);
    if (*describe_cmd) return cmd_describe(ctx, describe_texts);
    if (*retrieve) return cmd_retrieve(ctx, retrieve_text, retrieve_k.value_or(ctx.cfg.k), retrieve_out);
    if (*compose_cmd) return cmd_compose(ctx, compose_text, compose_k.value_or(ctx.cfg.k), compose_dir);
    if (*eval) return cmd_eval(ctx, eval_paths);
    if (*train) return cmd_train_toy(ctx, pairs_path, train_epochs, train_lr);
    return kExitUsage;
  } catch (const Error& e) {
    err << "morag: error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "morag: error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "morag: error: " << e.what() << '\n';
    return kExitDataFormat;
  }
}

}  // namespace morag::cli
