// Copyright 2026 The TextGround Authors
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

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "textground/hashing.hpp"
#include "textground/metrics.hpp"
#include "textground/sample.hpp"
#include "textground/stratifier.hpp"
#include "textground/target.hpp"

namespace textground {

using Json = nlohmann::json;

/// Current version of every file schema written by the toolkit.
inline constexpr int kSchemaVersion = 1;

Json to_json(const PixelBox& b);
Json to_json(const NormBox& b);
Json to_json(const OcrWord& w);
Json to_json(const GroundedSpan& s);
Json to_json(const SampleRecord& s);
Json to_json(const BenchManifest& m);
Json to_json(const EvalReport& r);
Json to_json(const TargetSequence& t);

PixelBox pixel_box_from_json(const Json& j);
NormBox norm_box_from_json(const Json& j);
OcrWord ocr_word_from_json(const Json& j);
GroundedSpan grounded_span_from_json(const Json& j);
SampleRecord sample_from_json(const Json& j);
BenchManifest bench_from_json(const Json& j);

/// Single-line serialization used for every line-delimited file.
std::string to_line(const Json& j);

/// Sidecar written next to a corpus file at `<path>.manifest.json`.
struct CorpusManifest {
  int schema_version = kSchemaVersion;
  std::size_t count = 0;
  std::string digest;  // "sha256:<hex>" of the corpus bytes
};

std::filesystem::path manifest_path(const std::filesystem::path& corpus);

/// Streams SampleRecords to a line-delimited file; close() (or destruction) writes
/// the manifest sidecar.
class CorpusWriter {
 public:
  explicit CorpusWriter(const std::filesystem::path& path);
  ~CorpusWriter();
  CorpusWriter(const CorpusWriter&) = delete;
  CorpusWriter& operator=(const CorpusWriter&) = delete;

  void write(const SampleRecord& sample);
  CorpusManifest close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  Sha256 digest_;
  std::size_t count_ = 0;
  std::set<std::string> ids_;
  bool closed_ = false;
};

/// Streams SampleRecords back. A sidecar manifest, when present, is checked for the
/// schema version on open and for count and digest once the stream is exhausted.
class CorpusReader {
 public:
  explicit CorpusReader(const std::filesystem::path& path);

  /// Next record, or nullopt at end of file. Throws ParseError with the line number
  /// on a malformed line and SchemaVersionError on an unsupported version.
  std::optional<SampleRecord> next();

  const std::optional<CorpusManifest>& manifest() const noexcept { return manifest_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::optional<CorpusManifest> manifest_;
  Sha256 digest_;
  std::size_t line_no_ = 0;
  std::size_t count_ = 0;
  std::set<std::string> ids_;
  bool done_ = false;
};

std::vector<SampleRecord> read_corpus(const std::filesystem::path& path);
CorpusManifest write_corpus(const std::filesystem::path& path, const std::vector<SampleRecord>& samples);

/// Hypothesis OCR file: one {"v", "id", "words"} record per line.
std::map<std::string, HypothesisOcr> read_hypotheses(const std::filesystem::path& path);
void write_hypotheses(const std::filesystem::path& path, const std::map<std::string, HypothesisOcr>& hyps);

/// Writes `j` pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

BenchManifest read_bench(const std::filesystem::path& path);

}  // namespace textground
