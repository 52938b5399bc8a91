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

#include "morag/retrieval/database.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "morag/errors.hpp"
#include "morag/simd/kernels.hpp"

namespace morag::retrieval {

std::string_view to_string(Part part) noexcept {
  switch (part) {
    case Part::torso: return "torso";
    case Part::hands: return "hands";
    case Part::legs: return "legs";
  }
  return "unknown";
}

Part part_from_string(std::string_view name) {
  for (Part p : kParts) {
    if (name == to_string(p)) return p;
  }
  throw Error(Errc::invalid_input, "unknown body part '" + std::string(name) + "'");
}

PartDatabase PartDatabase::build(Part part, std::vector<DatabaseEntry> entries) {
  if (entries.empty()) throw Error(Errc::build, "cannot build an empty database");
  PartDatabase db;
  db.part_ = part;
  db.dim_ = entries.front().embedding.size();
  if (db.dim_ == 0) throw Error(Errc::build, "embeddings must have at least one dimension");

  std::unordered_set<std::string_view> seen;
  db.unit_rows_.resize(entries.size() * db.dim_);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const DatabaseEntry& e = entries[i];
    if (e.embedding.size() != db.dim_) {
      throw Error(Errc::build, "entry '" + e.id + "' has dimension " +
                                   std::to_string(e.embedding.size()) + ", expected " +
                                   std::to_string(db.dim_));
    }
    if (!seen.insert(e.id).second) throw Error(Errc::build, "duplicate id '" + e.id + "'");
    if (e.length < 1) throw Error(Errc::degenerate_entry, "entry '" + e.id + "' has zero frames");

    double* row = db.unit_rows_.data() + i * db.dim_;
    for (std::size_t d = 0; d < db.dim_; ++d) {
      if (!std::isfinite(e.embedding[d])) {
        throw Error(Errc::degenerate_entry, "entry '" + e.id + "' has a non-finite embedding");
      }
      row[d] = e.embedding[d];
    }
    const double norm = std::sqrt(simd::squared_norm({row, db.dim_}));
    if (!(norm > 0.0)) {
      throw Error(Errc::degenerate_entry, "entry '" + e.id + "' has a zero-norm embedding");
    }
    for (std::size_t d = 0; d < db.dim_; ++d) row[d] /= norm;
  }
  db.entries_ = std::move(entries);
  return db;
}

const DatabaseEntry* PartDatabase::find(std::string_view id) const {
  for (const DatabaseEntry& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

RetrievalResult PartDatabase::query(std::span<const float> q, std::size_t k) const {
  std::vector<double> wide(q.begin(), q.end());
  return query(std::span<const double>(wide), k);
}

RetrievalResult PartDatabase::query(std::span<const double> q, std::size_t k) const {
  if (k == 0) throw Error(Errc::invalid_input, "k must be at least 1");
  if (q.size() != dim_) {
    throw Error(Errc::shape, "query has dimension " + std::to_string(q.size()) + ", database " +
                                 std::to_string(dim_));
  }
  for (double v : q) {
    if (!std::isfinite(v)) throw Error(Errc::degenerate_query, "query has non-finite values");
  }
  const double norm = std::sqrt(simd::squared_norm(q));
  if (!(norm > 0.0)) throw Error(Errc::degenerate_query, "query has zero norm");
  std::vector<double> unit(q.begin(), q.end());
  for (double& v : unit) v /= norm;

  std::vector<double> scores(entries_.size());
  simd::dot_rows(unit_rows_, unit, scores);
  for (double& s : scores) s = std::clamp(s, -1.0, 1.0);

  const std::size_t take = std::min(k, entries_.size());
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return entries_[a].id < entries_[b].id;
                    });

  RetrievalResult result;
  result.part = part_;
  result.truncated = k > entries_.size();
  result.hits.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    const DatabaseEntry& e = entries_[order[r]];
    result.hits.push_back({e.id, scores[order[r]], e.length, e.motion_ref, e.source_text});
  }
  return result;
}

const PartDatabase* PartDatabases::get(Part part) const noexcept {
  switch (part) {
    case Part::torso: return torso.get();
    case Part::hands: return hands.get();
    case Part::legs: return legs.get();
  }
  return nullptr;
}

const std::vector<double>& PartQueries::get(Part part) const noexcept {
  switch (part) {
    case Part::torso: return torso;
    case Part::hands: return hands;
    case Part::legs: break;
  }
  return legs;
}

const RetrievalResult& PartResults::get(Part part) const noexcept {
  switch (part) {
    case Part::torso: return torso;
    case Part::hands: return hands;
    case Part::legs: break;
  }
  return legs;
}

PartResults retrieve_parts(const PartDatabases& dbs, const PartQueries& queries, std::size_t k) {
  for (Part p : kParts) {
    if (dbs.get(p) == nullptr) {
      throw Error(Errc::configuration, "no database loaded for part '" +
                                           std::string(to_string(p)) + "'");
    }
  }
  PartResults out;
  out.torso = dbs.torso->query(std::span<const double>(queries.torso), k);
  out.hands = dbs.hands->query(std::span<const double>(queries.hands), k);
  out.legs = dbs.legs->query(std::span<const double>(queries.legs), k);
  return out;
}

}  // namespace morag::retrieval
