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

// MORAGDB1 layout: 8-byte magic, u32 version, u8 part tag, u32 dim,
// u32 count, then per record: u16-prefixed id, u32 frame length,
// u16-prefixed motion path, u16-prefixed source text, dim float32.
// All integers and floats little-endian.
//
// The companion manifest has one JSON object per line:
//   {"id", "part", "frames", "text", "motion_path"}

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "morag/retrieval/database.hpp"

namespace morag::retrieval {

inline constexpr std::uint32_t kDatabaseVersion = 1;

std::vector<std::uint8_t> serialize(const PartDatabase& db);
// Throws Error(format) on a bad magic or version and Error(corruption) on
// truncated or trailing data.
PartDatabase deserialize(std::span<const std::uint8_t> bytes);

void save(const PartDatabase& db, const std::filesystem::path& path);
// The loaded database resolves relative motion paths against the file's
// directory.
PartDatabase load(const std::filesystem::path& path);

struct ManifestRecord {
  std::string id;
  Part part = Part::torso;
  std::uint32_t frames = 1;
  std::string text;
  std::string motion_path;
};

std::string manifest_line(const ManifestRecord& record);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const PartDatabase& db);

// Headerless row-major little-endian float32 table with `dim` columns.
std::vector<std::vector<float>> read_vectors(const std::filesystem::path& path, std::size_t dim);

}  // namespace morag::retrieval
