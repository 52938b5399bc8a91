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

#include "morag/retrieval/storage.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "morag/errors.hpp"
#include "morag/io/binary.hpp"

namespace morag::retrieval {
namespace {

constexpr std::string_view kMagic = "MORAGDB1";

}  // namespace

std::vector<std::uint8_t> serialize(const PartDatabase& db) {
  io::ByteWriter w;
  w.bytes(kMagic);
  w.u32(kDatabaseVersion);
  w.u8(static_cast<std::uint8_t>(db.part()));
  w.u32(static_cast<std::uint32_t>(db.dimension()));
  w.u32(static_cast<std::uint32_t>(db.size()));
  for (const DatabaseEntry& e : db.entries()) {
    w.short_string(e.id);
    w.u32(e.length);
    w.short_string(e.motion_ref);
    w.short_string(e.source_text);
    for (float v : e.embedding) w.f32(v);
  }
  return w.buffer();
}

PartDatabase deserialize(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes);
  if (r.bytes(kMagic.size()) != kMagic) throw Error(Errc::format, "not a MORAGDB1 file");
  const std::uint32_t version = r.u32();
  if (version != kDatabaseVersion) {
    throw Error(Errc::format, "unsupported MORAGDB1 version " + std::to_string(version));
  }
  const std::uint8_t tag = r.u8();
  if (tag > 2) throw Error(Errc::format, "invalid part tag " + std::to_string(tag));
  const std::uint32_t dim = r.u32();
  const std::uint32_t count = r.u32();

  std::vector<DatabaseEntry> entries;
  // Each record needs at least 10 bytes of framing plus its floats.
  if (std::uint64_t{count} * (10 + 4ull * dim) > r.remaining()) {
    throw Error(Errc::corruption, "MORAGDB1 record count exceeds file size");
  }
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    DatabaseEntry e;
    e.id = r.short_string();
    e.length = r.u32();
    e.motion_ref = r.short_string();
    e.source_text = r.short_string();
    e.embedding.resize(dim);
    for (float& v : e.embedding) v = r.f32();
    entries.push_back(std::move(e));
  }
  if (r.remaining() != 0) throw Error(Errc::corruption, "trailing bytes after MORAGDB1 records");
  return PartDatabase::build(static_cast<Part>(tag), std::move(entries));
}

void save(const PartDatabase& db, const std::filesystem::path& path) {
  io::write_file(path, serialize(db));
}

PartDatabase load(const std::filesystem::path& path) {
  PartDatabase db = deserialize(io::read_file(path));
  db.set_base_dir(path.parent_path());
  return db;
}

std::string manifest_line(const ManifestRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["part"] = to_string(record.part);
  j["frames"] = record.frames;
  j["text"] = record.text;
  j["motion_path"] = record.motion_path;
  return j.dump();
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open manifest " + path.string());
  std::vector<ManifestRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestRecord rec;
      rec.id = j.at("id").get<std::string>();
      rec.part = part_from_string(j.at("part").get<std::string>());
      rec.frames = j.at("frames").get<std::uint32_t>();
      rec.text = j.at("text").get<std::string>();
      rec.motion_path = j.at("motion_path").get<std::string>();
      out.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::format, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(Errc::format, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const PartDatabase& db) {
  std::ostringstream out;
  for (const DatabaseEntry& e : db.entries()) {
    out << manifest_line({e.id, db.part(), e.length, e.source_text, e.motion_ref}) << '\n';
  }
  io::write_text_file(path, out.str());
}

std::vector<std::vector<float>> read_vectors(const std::filesystem::path& path, std::size_t dim) {
  if (dim == 0) throw Error(Errc::invalid_input, "vector dimension must be positive");
  const auto bytes = io::read_file(path);
  if (bytes.size() % (4 * dim) != 0) {
    throw Error(Errc::format, path.string() + ": size " + std::to_string(bytes.size()) +
                                  " is not a multiple of " + std::to_string(4 * dim));
  }
  io::ByteReader r(bytes);
  std::vector<std::vector<float>> rows(bytes.size() / (4 * dim), std::vector<float>(dim));
  for (auto& row : rows) {
    for (float& v : row) v = r.f32();
  }
  return rows;
}

}  // namespace morag::retrieval
