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

#include "textground/corpus_io.hpp"

#include <sstream>

#include "textground/error.hpp"

namespace textground {

namespace fs = std::filesystem;

Json to_json(const PixelBox& b) { return Json::array({b.x_min(), b.y_min(), b.x_max(), b.y_max()}); }
Json to_json(const NormBox& b) { return Json::array({b.x_min(), b.y_min(), b.x_max(), b.y_max()}); }

Json to_json(const OcrWord& w) {
  return {{"text", w.text}, {"box", to_json(w.box)}, {"conf", w.confidence}};
}

Json to_json(const GroundedSpan& s) {
  return {{"text", s.text}, {"box", to_json(s.box)}, {"words", s.source_word_indices}};
}

Json to_json(const SampleRecord& s) {
  Json words = Json::array();
  for (const auto& w : s.ocr_words) words.push_back(to_json(w));
  Json spans = Json::array();
  for (const auto& g : s.grounded_spans) spans.push_back(to_json(g));
  Json j = {{"v", kSchemaVersion},
            {"id", s.id},
            {"image_ref", s.image_ref},
            {"width", s.width},
            {"height", s.height},
            {"prompt", s.prompt},
            {"source", s.source == SampleSource::kMined ? "mined" : "public"},
            {"ocr_words", std::move(words)},
            {"grounded_spans", std::move(spans)}};
  if (s.topic_path) j["topic_path"] = *s.topic_path;
  return j;
}

PixelBox pixel_box_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw DataError("box must be an array of four numbers");
  return PixelBox(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

NormBox norm_box_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw DataError("box must be an array of four integers");
  return NormBox(j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>());
}

OcrWord ocr_word_from_json(const Json& j) {
  return {j.at("text").get<std::string>(), pixel_box_from_json(j.at("box")),
          j.value("conf", 1.0)};
}

GroundedSpan grounded_span_from_json(const Json& j) {
  return {j.at("text").get<std::string>(), norm_box_from_json(j.at("box")),
          j.at("words").get<std::vector<std::size_t>>()};
}

namespace {

void check_version(const Json& j) {
  const int v = j.at("v").get<int>();
  if (v != kSchemaVersion) {
    throw SchemaVersionError("unsupported schema version " + std::to_string(v) + " (expected " +
                             std::to_string(kSchemaVersion) + ")");
  }
}

}  // namespace

SampleRecord sample_from_json(const Json& j) {
  check_version(j);
  SampleRecord s;
  s.id = j.at("id").get<std::string>();
  s.image_ref = j.value("image_ref", std::string());
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.prompt = j.value("prompt", std::string());
  const auto source = j.value("source", std::string("public"));
  if (source == "mined") {
    s.source = SampleSource::kMined;
  } else if (source != "public") {
    throw DataError("unknown source '" + source + "'");
  }
  for (const auto& w : j.value("ocr_words", Json::array())) s.ocr_words.push_back(ocr_word_from_json(w));
  for (const auto& g : j.value("grounded_spans", Json::array())) {
    s.grounded_spans.push_back(grounded_span_from_json(g));
  }
  if (j.contains("topic_path")) s.topic_path = j.at("topic_path").get<std::vector<std::string>>();
  validate(s);
  return s;
}

Json to_json(const BenchManifest& m) {
  Json levels = Json::object(), counts = Json::object(), available = Json::object();
  for (auto d : kAllDifficulties) {
    const std::string key(to_string(d));
    const auto it = m.levels.find(d);
    levels[key] = it == m.levels.end() ? std::vector<std::string>{} : it->second;
    counts[key] = m.count(d);
    const auto a = m.available.find(d);
    available[key] = a == m.available.end() ? 0 : a->second;
  }
  return {{"v", kSchemaVersion},       {"kind", "bench"},           {"seed", m.seed},
          {"quota_per_level", m.quota_per_level}, {"corpus_digest", m.corpus_digest},
          {"levels", levels},          {"counts", counts},          {"available", available},
          {"notes", m.notes}};
}

BenchManifest bench_from_json(const Json& j) {
  check_version(j);
  BenchManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.quota_per_level = j.at("quota_per_level").get<std::size_t>();
  m.corpus_digest = j.value("corpus_digest", std::string());
  for (const auto& [key, ids] : j.at("levels").items()) {
    m.levels[difficulty_from_string(key)] = ids.get<std::vector<std::string>>();
  }
  if (j.contains("available")) {
    for (const auto& [key, n] : j.at("available").items()) {
      m.available[difficulty_from_string(key)] = n.get<std::size_t>();
    }
  }
  m.notes = j.value("notes", std::vector<std::string>{});
  return m;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json to_json(const LevelSummary& s) {
  return {{"samples", s.samples},   {"acc", s.acc},
          {"f1", s.f1},             {"cer", s.cer},
          {"layout_iou", s.layout_iou}, {"pc", optional_number(s.pc)},
          {"pc_samples", s.pc_samples}, {"cs", optional_number(s.cs)}};
}

}  // namespace

Json to_json(const EvalReport& r) {
  Json samples = Json::array();
  for (const auto& m : r.samples) {
    samples.push_back({{"id", m.id},
                       {"level", to_string(m.level)},
                       {"acc", m.acc},
                       {"f1", m.f1},
                       {"cer", m.cer},
                       {"layout_iou", m.layout_iou},
                       {"pc", optional_number(m.pc)},
                       {"cs", optional_number(m.cs)}});
  }
  Json levels = Json::object();
  for (const auto& [d, s] : r.levels) levels[std::string(to_string(d))] = to_json(s);
  return {{"v", kSchemaVersion}, {"kind", "eval_report"}, {"levels", levels},
          {"overall", to_json(r.overall)}, {"samples", samples}, {"missing", r.missing},
          {"flagged", r.flagged}};
}

Json to_json(const TargetSequence& t) {
  std::vector<int> img(t.img_mask.begin(), t.img_mask.end());
  std::vector<int> text(t.text_mask.begin(), t.text_mask.end());
  return {{"tokens", t.tokens}, {"img_mask", img}, {"text_mask", text}};
}

std::string to_line(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::strict); }

fs::path manifest_path(const fs::path& corpus) {
  auto p = corpus;
  p += ".manifest.json";
  return p;
}

CorpusWriter::CorpusWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw DataError("cannot open '" + path.string() + "' for writing");
}

CorpusWriter::~CorpusWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void CorpusWriter::write(const SampleRecord& sample) {
  if (!ids_.insert(sample.id).second) throw DataError("duplicate sample id '" + sample.id + "'");
  auto line = to_line(to_json(sample));
  line.push_back('\n');
  out_ << line;
  digest_.update(line);
  ++count_;
}

CorpusManifest CorpusWriter::close() {
  closed_ = true;
  out_.close();
  CorpusManifest m{kSchemaVersion, count_, "sha256:" + digest_.hex_digest()};
  write_json_file(manifest_path(path_),
                  {{"v", kSchemaVersion}, {"kind", "corpus"}, {"count", m.count}, {"digest", m.digest}});
  return m;
}

CorpusReader::CorpusReader(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw DataError("cannot open '" + path.string() + "'");
  const auto mp = manifest_path(path);
  if (fs::exists(mp)) {
    const auto j = read_json_file(mp);
    CorpusManifest m;
    m.schema_version = j.at("v").get<int>();
    if (m.schema_version != kSchemaVersion) {
      throw SchemaVersionError("manifest '" + mp.string() + "' has schema version " +
                               std::to_string(m.schema_version));
    }
    m.count = j.at("count").get<std::size_t>();
    m.digest = j.at("digest").get<std::string>();
    manifest_ = m;
  }
}

std::optional<SampleRecord> CorpusReader::next() {
  if (done_) return std::nullopt;
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    const bool terminated = !in_.eof();
    digest_.update(line);
    if (terminated) digest_.update("\n");
    if (line.empty()) continue;
    SampleRecord s;
    try {
      s = sample_from_json(Json::parse(line));
    } catch (const SchemaVersionError& e) {
      throw SchemaVersionError("line " + std::to_string(line_no_) + ": " + e.what());
    } catch (const Json::exception& e) {
      throw ParseError(line_no_, e.what());
    } catch (const DataError& e) {
      throw ParseError(line_no_, e.what());
    }
    if (!ids_.insert(s.id).second) throw ParseError(line_no_, "duplicate sample id '" + s.id + "'");
    ++count_;
    return s;
  }
  done_ = true;
  if (manifest_) {
    if (manifest_->count != count_) {
      throw DataError("manifest count " + std::to_string(manifest_->count) + " differs from " +
                      std::to_string(count_) + " records in '" + path_.string() + "'");
    }
    const auto digest = "sha256:" + digest_.hex_digest();
    if (digest != manifest_->digest) throw DataError("digest mismatch for '" + path_.string() + "'");
  }
  return std::nullopt;
}

std::vector<SampleRecord> read_corpus(const fs::path& path) {
  CorpusReader reader(path);
  std::vector<SampleRecord> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

CorpusManifest write_corpus(const fs::path& path, const std::vector<SampleRecord>& samples) {
  CorpusWriter writer(path);
  for (const auto& s : samples) writer.write(s);
  return writer.close();
}

std::map<std::string, HypothesisOcr> read_hypotheses(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::map<std::string, HypothesisOcr> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = Json::parse(line);
      check_version(j);
      HypothesisOcr hyp;
      for (const auto& w : j.at("words")) hyp.words.push_back(ocr_word_from_json(w));
      const auto id = j.at("id").get<std::string>();
      if (!out.emplace(id, std::move(hyp)).second) throw DataError("duplicate hypothesis id '" + id + "'");
    } catch (const SchemaVersionError&) {
      throw;
    } catch (const Json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

void write_hypotheses(const fs::path& path, const std::map<std::string, HypothesisOcr>& hyps) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  for (const auto& [id, hyp] : hyps) {
    Json words = Json::array();
    for (const auto& w : hyp.words) words.push_back(to_json(w));
    out << to_line({{"v", kSchemaVersion}, {"id", id}, {"words", words}}) << '\n';
  }
}

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
}

BenchManifest read_bench(const fs::path& path) {
  try {
    return bench_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace textground
