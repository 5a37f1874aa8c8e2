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

#include "textground/pipeline.hpp"

#include <algorithm>
#include <memory>
#include <optional>

#include "textground/clients.hpp"
#include "textground/error.hpp"
#include "textground/parallel.hpp"
#include "textground/text.hpp"

namespace textground {

namespace fs = std::filesystem;

AlignConfig align_config_from_json(const Json& j, AlignConfig c) {
  if (!j.contains("align")) return c;
  const auto& a = j.at("align");
  c.partial_threshold = a.value("partial_threshold", c.partial_threshold);
  c.fuzzy_threshold = a.value("fuzzy_threshold", c.fuzzy_threshold);
  c.max_window_slack = a.value("max_window_slack", c.max_window_slack);
  return c;
}

FilterConfig filter_config_from_json(const Json& j, FilterConfig c) {
  c.seed = j.value("seed", c.seed);
  if (!j.contains("filter")) return c;
  const auto& f = j.at("filter");
  c.min_dim = f.value("min_dim", c.min_dim);
  if (f.contains("aspect_range")) {
    const auto range = f.at("aspect_range").get<std::vector<double>>();
    if (range.size() != 2) throw UsageError("aspect_range needs two values");
    c.aspect_min = range[0];
    c.aspect_max = range[1];
  }
  c.min_text_area_ratio = f.value("min_text_area_ratio", c.min_text_area_ratio);
  c.min_ocr_confidence = f.value("min_ocr_confidence", c.min_ocr_confidence);
  c.max_unmatched_ratio = f.value("max_unmatched_ratio", c.max_unmatched_ratio);
  c.drop_rate_1box = f.value("drop_rate_1box", c.drop_rate_1box);
  c.drop_rate_2box = f.value("drop_rate_2box", c.drop_rate_2box);
  c.validate();
  return c;
}

PipelineConfig pipeline_config_from_json(const Json& j, const fs::path& base_dir) {
  PipelineConfig c;
  const auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    c.input = resolve(j.at("input").get<std::string>());
    c.output_dir = resolve(j.at("output_dir").get<std::string>());
    c.align = align_config_from_json(j);
    c.filter = filter_config_from_json(j);
    c.bench_seed = j.value("bench_seed", c.filter.seed);
    c.quota_per_level = j.value("quota_per_level", c.quota_per_level);
    c.workers = j.value("workers", c.workers);
    c.retry.max_attempts = j.value("audit_retries", c.retry.max_attempts);
    const auto policy = j.value("on_audit_error", std::string("abort"));
    if (policy == "skip") {
      c.on_audit_error = AuditErrorPolicy::kSkip;
    } else if (policy != "abort") {
      throw UsageError("on_audit_error must be skip or abort");
    }
    c.auditor_endpoint = j.value("auditor", std::string());
  } catch (const Json::exception& e) {
    throw UsageError(std::string("pipeline config: ") + e.what());
  }
  return c;
}

namespace {

Json to_json(const StageReport& s) {
  return {{"name", s.name},       {"input", s.input},     {"kept", s.kept},
          {"dropped", s.dropped}, {"errored", s.errored}, {"reasons", s.reasons}};
}

void tally(StageReport& stage, const FilterVerdict& v) {
  if (v.kept()) {
    ++stage.kept;
  } else {
    ++stage.dropped;
    for (auto r : v.reasons) ++stage.reasons[std::string(to_string(r))];
  }
}

}  // namespace

Json to_json(const PipelineReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  return {{"v", kSchemaVersion},          {"kind", "pipeline_report"},
          {"stages", stages},             {"final_count", r.final_count},
          {"corpus_digest", r.corpus_digest}, {"bench_counts", r.bench_counts},
          {"notes", r.notes},             {"complete", r.complete}};
}

AlignmentResult annotate(SampleRecord& sample, const AlignConfig& cfg) {
  const auto order = reading_order(sample.ocr_words, [](const OcrWord& w) -> const PixelBox& { return w.box; });
  std::vector<OcrWord> sorted;
  sorted.reserve(order.size());
  for (auto i : order) sorted.push_back(sample.ocr_words[i]);
  sample.ocr_words = std::move(sorted);

  const auto spans = extract_spans(sample.prompt);
  auto result = align_spans(spans, sample.ocr_words, cfg);
  sample.grounded_spans =
      grounded_spans_from_alignment(result, spans, sample.ocr_words, sample.width, sample.height);
  return result;
}

PipelineReport run_pipeline(const PipelineConfig& cfg, VlmAuditClient* auditor) {
  cfg.filter.validate();
  fs::create_directories(cfg.output_dir);
  PipelineReport report;
  const auto write_report = [&] { write_json_file(cfg.output_dir / "report.json", to_json(report)); };

  try {
    auto samples = read_corpus(cfg.input);
    std::sort(samples.begin(), samples.end(),
              [](const SampleRecord& a, const SampleRecord& b) { return a.id < b.id; });

    // extract + align
    StageReport extract{"extract", samples.size(), samples.size(), 0, 0, {}};
    StageReport align{"align", samples.size(), samples.size(), 0, 0, {}};
    std::vector<AlignmentResult> alignments(samples.size());
    std::vector<std::size_t> diagnostics(samples.size()), span_counts(samples.size());
    parallel_for(samples.size(), cfg.workers, [&](std::size_t i) {
      std::vector<SpanDiagnostic> diags;
      span_counts[i] = extract_spans(samples[i].prompt, &diags).size();
      diagnostics[i] = diags.size();
      alignments[i] = annotate(samples[i], cfg.align);
    });
    for (std::size_t i = 0; i < samples.size(); ++i) {
      extract.reasons["spans"] += span_counts[i];
      extract.reasons["diagnostics"] += diagnostics[i];
      for (const auto& m : alignments[i].matches) align.reasons[std::string(to_string(m.stage))] += 1;
      align.reasons["unmatched_spans"] += alignments[i].unmatched_span_indices.size();
    }
    report.stages.push_back(extract);
    report.stages.push_back(align);

    // stage 1
    StageReport s1{"filter_stage1", samples.size(), 0, 0, 0, {}};
    std::vector<FilterVerdict> v1(samples.size());
    parallel_for(samples.size(), cfg.workers,
                 [&](std::size_t i) { v1[i] = stage1_filter(samples[i], alignments[i], cfg.filter); });
    std::vector<SampleRecord> survivors;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      tally(s1, v1[i]);
      if (v1[i].kept()) survivors.push_back(std::move(samples[i]));
    }
    report.stages.push_back(s1);

    // stage 2
    StageReport s2{"filter_stage2", survivors.size(), 0, 0, 0, {}};
    const auto v2 = stage2_downsample(survivors, cfg.filter);
    std::vector<SampleRecord> pruned;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
      tally(s2, v2[i]);
      if (v2[i].kept()) pruned.push_back(std::move(survivors[i]));
    }
    report.stages.push_back(s2);

    // stage 3
    std::unique_ptr<JsonTransport> transport;
    std::unique_ptr<VlmAuditClient> owned;
    if (auditor == nullptr) {
      if (cfg.auditor_endpoint.empty()) {
        owned = std::make_unique<MockVlmAuditor>();
      } else {
        transport = make_transport(cfg.auditor_endpoint);
        owned = std::make_unique<RemoteAuditClient>(*transport);
      }
      auditor = owned.get();
    }
    StageReport s3{"filter_stage3", pruned.size(), 0, 0, 0, {}};
    std::vector<std::optional<FilterVerdict>> v3(pruned.size());
    parallel_for(pruned.size(), cfg.workers, [&](std::size_t i) {
      try {
        v3[i] = stage3_semantic_audit(pruned[i], *auditor, cfg.retry);
      } catch (const AuditUnavailable&) {
        if (cfg.on_audit_error == AuditErrorPolicy::kAbort) throw;
      }
    });
    std::vector<SampleRecord> final_corpus;
    for (std::size_t i = 0; i < pruned.size(); ++i) {
      if (!v3[i]) {
        ++s3.errored;
        continue;
      }
      tally(s3, *v3[i]);
      if (v3[i]->kept()) final_corpus.push_back(std::move(pruned[i]));
    }
    report.stages.push_back(s3);

    const auto manifest = write_corpus(cfg.output_dir / "corpus.jsonl", final_corpus);
    report.final_count = final_corpus.size();
    report.corpus_digest = manifest.digest;

    // stratify
    const auto bench = build_bench(final_corpus, cfg.quota_per_level, cfg.bench_seed, manifest.digest);
    StageReport strat{"stratify", final_corpus.size(), 0, 0, 0, {}};
    for (auto d : kAllDifficulties) {
      report.bench_counts[std::string(to_string(d))] = bench.count(d);
      const auto it = bench.available.find(d);
      strat.reasons[std::string(to_string(d))] = it == bench.available.end() ? 0 : it->second;
      strat.kept += it == bench.available.end() ? 0 : it->second;
    }
    strat.dropped = strat.input - strat.kept;
    if (strat.dropped > 0) strat.reasons["not_benchmarkable"] = strat.dropped;
    report.stages.push_back(strat);
    report.notes = bench.notes;
    write_json_file(cfg.output_dir / "bench.json", to_json(bench));
    report.complete = true;
  } catch (const std::exception& e) {
    report.notes.push_back(std::string("aborted: ") + e.what());
    write_report();
    throw;
  }
  write_report();
  return report;
}

}  // namespace textground
