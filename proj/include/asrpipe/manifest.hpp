// include/asrpipe/manifest.hpp

// Copyright 2026 asrpipe authors
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

#ifndef ASRPIPE_MANIFEST_HPP
#define ASRPIPE_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "asrpipe/error.hpp"
#include "asrpipe/version.hpp"

namespace asrpipe {

inline constexpr double kMaxAudioSeconds = 30.0;

struct SampleScores {
  double cer = 0.0;
  std::string hypothesis;

  bool operator==(const SampleScores&) const = default;
};

// One (audio, text) pair. audio_path is relative to the manifest file's
// directory; duration must be positive and under the 30 s training cap.
struct SampleRecord {
  std::string id;
  std::string audio_path;
  std::string text;
  double duration_s = 0.0;
  std::string source = "synthetic";  // "real" | "synthetic"
  std::string corpus_tag;
  std::optional<SampleScores> scores;

  bool operator==(const SampleRecord&) const = default;
};

struct ManifestMetadata {
  std::string name;
  std::string created;  // ISO-8601; empty unless the operator stamps it,
                        // so pipeline outputs stay byte-reproducible
  std::uint64_t seed = 0;
  std::string tool_version = ASRPIPE_VERSION_STRING;

  bool operator==(const ManifestMetadata&) const = default;
};

struct DatasetManifest {
  ManifestMetadata metadata;
  std::vector<SampleRecord> records;

  bool operator==(const DatasetManifest&) const = default;
};

namespace detail {

inline void validate_record(const SampleRecord& r, std::size_t line) {
  if (r.id.empty()) throw SchemaError("record id must be non-empty", line);
  if (r.text.empty()) throw SchemaError("record text must be non-empty", line);
  if (r.audio_path.empty()) throw SchemaError("record audio path must be non-empty", line);
  if (!(r.duration_s > 0.0))
    throw SchemaError("record duration must be positive, got " + std::to_string(r.duration_s),
                      line);
  if (r.duration_s > kMaxAudioSeconds)
    throw SchemaError("record duration " + std::to_string(r.duration_s) +
                          " exceeds the 30 s cap",
                      line);
  if (r.source != "real" && r.source != "synthetic")
    throw SchemaError("record source must be \"real\" or \"synthetic\", got \"" + r.source + "\"",
                      line);
}

inline nlohmann::ordered_json record_to_json(const SampleRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["audio"] = r.audio_path;
  j["text"] = r.text;
  j["duration_s"] = r.duration_s;
  j["source"] = r.source;
  j["corpus"] = r.corpus_tag;
  if (r.scores) j["scores"] = {{"cer", r.scores->cer}, {"hyp", r.scores->hypothesis}};
  return j;
}

inline SampleRecord record_from_json(const nlohmann::json& j, std::size_t line) {
  static const std::set<std::string> known = {"id",     "audio",  "text", "duration_s",
                                              "source", "corpus", "scores"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw SchemaError("unknown record key \"" + it.key() + "\"", line);
  SampleRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.audio_path = j.at("audio").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.duration_s = j.at("duration_s").get<double>();
    r.source = j.at("source").get<std::string>();
    r.corpus_tag = j.at("corpus").get<std::string>();
    if (j.contains("scores")) {
      SampleScores s;
      s.cer = j.at("scores").at("cer").get<double>();
      s.hypothesis = j.at("scores").at("hyp").get<std::string>();
      r.scores = s;
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed record: ") + e.what(), line);
  }
  validate_record(r, line);
  return r;
}

inline nlohmann::ordered_json metadata_to_json(const ManifestMetadata& m) {
  nlohmann::ordered_json inner;
  inner["name"] = m.name;
  if (!m.created.empty()) inner["created"] = m.created;
  inner["seed"] = m.seed;
  inner["tool_version"] = m.tool_version;
  return nlohmann::ordered_json{{"manifest", inner}};
}

inline ManifestMetadata metadata_from_json(const nlohmann::json& j) {
  ManifestMetadata m;
  try {
    const auto& inner = j.at("manifest");
    m.name = inner.at("name").get<std::string>();
    if (inner.contains("created")) m.created = inner.at("created").get<std::string>();
    m.seed = inner.at("seed").get<std::uint64_t>();
    m.tool_version = inner.at("tool_version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed manifest header: ") + e.what(), 1);
  }
  return m;
}

}  // namespace detail

// JSONL: line 1 is the metadata header (reserved key "manifest"), then one
// record per line with fixed key order. write then read is the identity.
inline void write_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << detail::metadata_to_json(m.metadata).dump() << '\n';
  for (const SampleRecord& r : m.records) out << detail::record_to_json(r).dump() << '\n';
  if (!out) throw IoError("short write to manifest: " + path.string());
}

inline DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  DatasetManifest m;
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (line_no == 1) {
      if (!j.contains("manifest"))
        throw SchemaError("first line must be the manifest metadata header", 1);
      m.metadata = detail::metadata_from_json(j);
      continue;
    }
    SampleRecord r = detail::record_from_json(j, line_no);
    if (!ids.insert(r.id).second) throw SchemaError("duplicate record id \"" + r.id + "\"", line_no);
    m.records.push_back(std::move(r));
  }
  if (line_no == 0) throw SchemaError("manifest is empty; expected a metadata header", 1);
  return m;
}

// Appends records one at a time so interrupted pipelines keep what they
// already produced. Owns the file exclusively until destroyed.
class IncrementalManifestWriter {
 public:
  // If the file already exists its contents are validated and kept; the
  // writer then appends. Otherwise a fresh header is written.
  IncrementalManifestWriter(const std::filesystem::path& path, const ManifestMetadata& metadata)
      : path_(path) {
    if (std::filesystem::exists(path)) {
      existing_ = read_manifest(path);
      if (existing_.metadata.name != metadata.name || existing_.metadata.seed != metadata.seed)
        throw InputError("existing manifest " + path.string() +
                         " was produced with a different name or seed; refusing to resume");
      out_.open(path, std::ios::binary | std::ios::app);
    } else {
      existing_.metadata = metadata;
      out_.open(path, std::ios::binary);
      if (out_) out_ << detail::metadata_to_json(metadata).dump() << '\n';
    }
    if (!out_) throw IoError("cannot open manifest for writing: " + path.string());
    for (const SampleRecord& r : existing_.records) ids_.insert(r.id);
  }

  const DatasetManifest& existing() const { return existing_; }

  void append(const SampleRecord& r) {
    detail::validate_record(r, existing_.records.size() + 2);
    if (!ids_.insert(r.id).second)
      throw IdCollisionError({r.id});
    out_ << detail::record_to_json(r).dump() << '\n';
    out_.flush();
    existing_.records.push_back(r);
    if (!out_) throw IoError("short write to manifest: " + path_.string());
  }

  std::size_t count() const { return existing_.records.size(); }

 private:
  std::filesystem::path path_;
  DatasetManifest existing_;
  std::ofstream out_;
  std::set<std::string> ids_;
};

// Concatenation of two corpora; record ids must be disjoint.
inline DatasetManifest merge(const DatasetManifest& a, const DatasetManifest& b) {
  std::set<std::string> seen;
  for (const SampleRecord& r : a.records) seen.insert(r.id);
  std::vector<std::string> collisions;
  for (const SampleRecord& r : b.records)
    if (seen.count(r.id)) collisions.push_back(r.id);
  if (!collisions.empty()) throw IdCollisionError(std::move(collisions));

  DatasetManifest out;
  out.metadata = a.metadata;
  out.metadata.name = a.metadata.name + "+" + b.metadata.name;
  out.records = a.records;
  out.records.insert(out.records.end(), b.records.begin(), b.records.end());
  return out;
}

// Fine-tune job defaults; values land verbatim in the exported config.
struct TrainerConfig {
  int epochs = 5;
  int batch_size = 4;
  double learning_rate = 1e-3;
  double max_audio_seconds = kMaxAudioSeconds;
};

struct TrainerExport {
  std::filesystem::path manifest_path;
  std::filesystem::path config_path;
};

// Emits a trainer-ready package: one JSONL line per record in the shape the
// downstream fine-tuning harness expects, plus the hyperparameter config.
// Refuses to export when audio is missing or any record breaks the cap.
inline TrainerExport export_trainer(const DatasetManifest& m,
                                    const std::filesystem::path& manifest_dir,
                                    const std::filesystem::path& out_dir,
                                    const TrainerConfig& config = {}) {
  std::vector<std::string> missing;
  std::vector<std::string> too_long;
  for (const SampleRecord& r : m.records) {
    if (!std::filesystem::exists(manifest_dir / r.audio_path)) missing.push_back(r.id);
    if (r.duration_s > config.max_audio_seconds) too_long.push_back(r.id);
  }
  if (!too_long.empty())
    throw DurationExceededError([&] {
      std::string msg = "records exceed the max audio duration:";
      for (const auto& id : too_long) msg += " " + id;
      return msg;
    }());
  if (!missing.empty()) throw MissingAudioError(std::move(missing));

  std::filesystem::create_directories(out_dir);
  TrainerExport result;
  result.manifest_path = out_dir / "trainer_manifest.jsonl";
  result.config_path = out_dir / "trainer_config.json";

  std::ofstream mf(result.manifest_path, std::ios::binary);
  if (!mf) throw IoError("cannot write " + result.manifest_path.string());
  for (const SampleRecord& r : m.records) {
    nlohmann::ordered_json j;
    j["audio"] = {{"path", r.audio_path}};
    j["sentence"] = r.text;
    j["duration"] = r.duration_s;
    mf << j.dump() << '\n';
  }
  if (!mf) throw IoError("short write to " + result.manifest_path.string());

  nlohmann::ordered_json cfg;
  cfg["epochs"] = config.epochs;
  cfg["batch_size"] = config.batch_size;
  cfg["learning_rate"] = config.learning_rate;
  cfg["max_audio_seconds"] = config.max_audio_seconds;
  std::ofstream cf(result.config_path, std::ios::binary);
  if (!cf) throw IoError("cannot write " + result.config_path.string());
  cf << cfg.dump(2) << '\n';
  if (!cf) throw IoError("short write to " + result.config_path.string());
  return result;
}

}  // namespace asrpipe

#endif  // ASRPIPE_MANIFEST_HPP
