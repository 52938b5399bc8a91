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

// Part-specific motion databases with exact cosine k-nearest-neighbour
// search. Databases are immutable once built, so concurrent queries need no
// locking.

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace morag::retrieval {

enum class Part : std::uint8_t { torso = 0, hands = 1, legs = 2 };

inline constexpr std::array<Part, 3> kParts = {Part::torso, Part::hands, Part::legs};

std::string_view to_string(Part part) noexcept;
// Throws Error(invalid_input) for anything but "torso", "hands", "legs".
Part part_from_string(std::string_view name);

struct DatabaseEntry {
  std::string id;
  std::vector<float> embedding;
  std::string motion_ref;
  std::uint32_t length = 1;
  std::string source_text;

  bool operator==(const DatabaseEntry&) const = default;
};

struct RetrievalHit {
  std::string id;
  double score = 0.0;
  std::uint32_t length = 0;
  std::string motion_ref;
  std::string source_text;
};

struct RetrievalResult {
  Part part = Part::torso;
  std::vector<RetrievalHit> hits;  // descending score, ties by ascending id
  bool truncated = false;          // k exceeded the database size
};

class PartDatabase {
 public:
  // Throws Error(build) on an empty list, mismatched dimensions or a
  // duplicate id; Error(degenerate_entry) on a zero-norm embedding or a
  // zero frame length.
  static PartDatabase build(Part part, std::vector<DatabaseEntry> entries);

  Part part() const noexcept { return part_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const DatabaseEntry> entries() const noexcept { return entries_; }
  const DatabaseEntry* find(std::string_view id) const;

  // Top-min(k, size) entries by cosine similarity. Throws
  // Error(degenerate_query) for a zero query, Error(invalid_input) for k == 0,
  // Error(shape) for a dimension mismatch.
  RetrievalResult query(std::span<const float> q, std::size_t k) const;
  RetrievalResult query(std::span<const double> q, std::size_t k) const;

  // Where relative motion_ref paths resolve from; set by load().
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

 private:
  PartDatabase() = default;

  Part part_ = Part::torso;
  std::size_t dim_ = 0;
  std::vector<DatabaseEntry> entries_;
  std::vector<double> unit_rows_;  // size() x dim_, unit-norm copies
  std::filesystem::path base_dir_;
};

struct PartDatabases {
  std::shared_ptr<const PartDatabase> torso;
  std::shared_ptr<const PartDatabase> hands;
  std::shared_ptr<const PartDatabase> legs;

  const PartDatabase* get(Part part) const noexcept;
};

struct PartQueries {
  std::vector<double> torso;
  std::vector<double> hands;
  std::vector<double> legs;

  const std::vector<double>& get(Part part) const noexcept;
};

struct PartResults {
  RetrievalResult torso;
  RetrievalResult hands;
  RetrievalResult legs;

  const RetrievalResult& get(Part part) const noexcept;
};

// Independent per-part queries. Throws Error(configuration) if a database is
// missing.
PartResults retrieve_parts(const PartDatabases& dbs, const PartQueries& queries, std::size_t k);

}  // namespace morag::retrieval
