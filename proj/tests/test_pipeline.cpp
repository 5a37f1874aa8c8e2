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

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <fstream>

#include "temp_dir.hpp"
#include "textground/corpus_io.hpp"
#include "textground/error.hpp"
#include "textground/pipeline.hpp"
#include "textground/synth.hpp"

using namespace textground;

namespace {

PipelineConfig config_for(const TempDir& dir, const std::vector<SampleRecord>& corpus) {
  write_corpus(dir / "in.jsonl", corpus);
  PipelineConfig cfg;
  cfg.input = dir / "in.jsonl";
  cfg.output_dir = dir / "out";
  cfg.filter.seed = 11;
  cfg.bench_seed = 11;
  cfg.quota_per_level = 20;
  return cfg;
}

const StageReport& stage(const PipelineReport& r, const std::string& name) {
  for (const auto& s : r.stages) {
    if (s.name == name) return s;
  }
  throw std::out_of_range(name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class DownAuditor : public VlmAuditClient {
 public:
  AuditResponse audit(const AuditRequest&) override {
    ++calls;
    throw ClientError("connection reset");
  }
  std::atomic<int> calls{0};
};

}  // namespace

TEST(Pipeline, EverySampleBelowMinDimIsDroppedForThatReason) {
  TempDir dir;
  auto cfg = config_for(dir, synth_corpus(3, 120, {.clean = true}));
  cfg.filter.min_dim = 100000;
  const auto r = run_pipeline(cfg);
  const auto& s1 = stage(r, "filter_stage1");
  EXPECT_EQ(s1.input, 120u);
  EXPECT_EQ(s1.kept, 0u);
  EXPECT_EQ(s1.reasons.at("min_dim"), 120u);
  EXPECT_EQ(r.final_count, 0u);
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(read_corpus(cfg.output_dir / "corpus.jsonl").empty());
}

TEST(Pipeline, CleanCorpusRetentionFollowsTheDownsamplingRates) {
  TempDir dir;
  const auto corpus = synth_corpus(5, 600, {.clean = true});
  auto cfg = config_for(dir, corpus);
  const auto r = run_pipeline(cfg);
  const auto& s1 = stage(r, "filter_stage1");
  const auto& s2 = stage(r, "filter_stage2");
  const auto& s3 = stage(r, "filter_stage3");
  EXPECT_EQ(s1.kept, corpus.size());

  // Independent expectation from the box counts after annotation.
  double expected = 0.0, variance = 0.0;
  for (auto s : corpus) {
    annotate(s, cfg.align);
    const auto n = s.grounded_spans.size();
    const double keep = n == 1 ? 1.0 - cfg.filter.drop_rate_1box : n == 2 ? 1.0 - cfg.filter.drop_rate_2box : 1.0;
    expected += keep;
    variance += keep * (1.0 - keep);
  }
  EXPECT_LE(std::abs(static_cast<double>(s2.kept) - expected), 4.0 * std::sqrt(variance) + 1.0);
  EXPECT_EQ(s3.dropped, 0u);
  EXPECT_EQ(r.final_count, s2.kept);
}

TEST(Pipeline, ConservationAtEveryStage) {
  TempDir dir;
  const auto r = run_pipeline(config_for(dir, synth_corpus(9, 400)));
  for (const auto& s : r.stages) {
    EXPECT_EQ(s.input, s.kept + s.dropped + s.errored) << s.name;
  }
  EXPECT_EQ(stage(r, "filter_stage2").input, stage(r, "filter_stage1").kept);
  EXPECT_EQ(stage(r, "filter_stage3").input, stage(r, "filter_stage2").kept);
  EXPECT_EQ(r.final_count, stage(r, "filter_stage3").kept);
  EXPECT_GT(stage(r, "filter_stage1").dropped, 0u);
}

TEST(Pipeline, RerunsAndWorkerCountsAgree) {
  TempDir dir;
  const auto corpus = synth_corpus(21, 300);
  auto cfg = config_for(dir, corpus);
  cfg.workers = 1;
  run_pipeline(cfg);
  const auto report1 = slurp(cfg.output_dir / "report.json");
  const auto corpus1 = slurp(cfg.output_dir / "corpus.jsonl");
  const auto bench1 = slurp(cfg.output_dir / "bench.json");

  run_pipeline(cfg);
  EXPECT_EQ(slurp(cfg.output_dir / "report.json"), report1);

  cfg.workers = 8;
  cfg.output_dir = dir / "out8";
  run_pipeline(cfg);
  EXPECT_EQ(slurp(cfg.output_dir / "report.json"), report1);
  EXPECT_EQ(slurp(cfg.output_dir / "corpus.jsonl"), corpus1);
  EXPECT_EQ(slurp(cfg.output_dir / "bench.json"), bench1);
}

TEST(Pipeline, InputOrderDoesNotMatter) {
  TempDir dir;
  auto corpus = synth_corpus(4, 200);
  auto cfg = config_for(dir, corpus);
  run_pipeline(cfg);
  const auto first = slurp(cfg.output_dir / "corpus.jsonl");
  std::reverse(corpus.begin(), corpus.end());
  write_corpus(cfg.input, corpus);
  run_pipeline(cfg);
  EXPECT_EQ(slurp(cfg.output_dir / "corpus.jsonl"), first);
}

TEST(Pipeline, SkipPolicyCountsAuditFailuresAsErrored) {
  TempDir dir;
  auto cfg = config_for(dir, synth_corpus(6, 150, {.clean = true}));
  cfg.on_audit_error = AuditErrorPolicy::kSkip;
  cfg.retry.max_attempts = 2;
  DownAuditor down;
  const auto r = run_pipeline(cfg, &down);
  const auto& s3 = stage(r, "filter_stage3");
  EXPECT_EQ(s3.errored, s3.input);
  EXPECT_EQ(s3.kept + s3.dropped, 0u);
  EXPECT_EQ(down.calls.load(), static_cast<int>(2 * s3.input));
  EXPECT_EQ(r.final_count, 0u);
  EXPECT_TRUE(r.complete);
}

TEST(Pipeline, AbortPolicyWritesPartialReport) {
  TempDir dir;
  auto cfg = config_for(dir, synth_corpus(6, 150, {.clean = true}));
  DownAuditor down;
  EXPECT_THROW(run_pipeline(cfg, &down), AuditUnavailable);
  const auto report = read_json_file(cfg.output_dir / "report.json");
  EXPECT_FALSE(report.at("complete").get<bool>());
  EXPECT_EQ(report.at("stages").size(), 4u);
  EXPECT_EQ(report.at("stages").back().at("name"), "filter_stage2");
  EXPECT_FALSE(std::filesystem::exists(cfg.output_dir / "bench.json"));
}

TEST(Pipeline, MissingInputIsADataError) {
  TempDir dir;
  PipelineConfig cfg;
  cfg.input = dir / "absent.jsonl";
  cfg.output_dir = dir / "out";
  EXPECT_THROW(run_pipeline(cfg), DataError);
  EXPECT_TRUE(std::filesystem::exists(cfg.output_dir / "report.json"));
}

TEST(PipelineConfigJson, ParsesAndResolvesPaths) {
  const auto j = Json::parse(R"({
    "input": "data/in.jsonl", "output_dir": "/abs/out", "seed": 42, "workers": 4,
    "quota_per_level": 7, "on_audit_error": "skip", "audit_retries": 5,
    "align": {"fuzzy_threshold": 0.9},
    "filter": {"min_dim": 300, "aspect_range": [0.5, 2.0], "drop_rate_1box": 0.5}})");
  const auto c = pipeline_config_from_json(j, "/base");
  EXPECT_EQ(c.input, std::filesystem::path("/base/data/in.jsonl"));
  EXPECT_EQ(c.output_dir, std::filesystem::path("/abs/out"));
  EXPECT_EQ(c.filter.seed, 42u);
  EXPECT_EQ(c.bench_seed, 42u);
  EXPECT_EQ(c.workers, 4u);
  EXPECT_EQ(c.quota_per_level, 7u);
  EXPECT_EQ(c.on_audit_error, AuditErrorPolicy::kSkip);
  EXPECT_EQ(c.retry.max_attempts, 5);
  EXPECT_DOUBLE_EQ(c.align.fuzzy_threshold, 0.9);
  EXPECT_DOUBLE_EQ(c.align.partial_threshold, AlignConfig{}.partial_threshold);
  EXPECT_EQ(c.filter.min_dim, 300);
  EXPECT_DOUBLE_EQ(c.filter.aspect_min, 0.5);
  EXPECT_DOUBLE_EQ(c.filter.aspect_max, 2.0);
  EXPECT_DOUBLE_EQ(c.filter.drop_rate_1box, 0.5);
  EXPECT_DOUBLE_EQ(c.filter.drop_rate_2box, FilterConfig{}.drop_rate_2box);
}

TEST(PipelineConfigJson, RejectsBadValues) {
  EXPECT_THROW(pipeline_config_from_json(Json::parse(R"({"output_dir": "o"})")), UsageError);
  EXPECT_THROW(pipeline_config_from_json(Json::parse(R"({"input": "i", "output_dir": "o", "on_audit_error": "retry"})")),
               UsageError);
  EXPECT_THROW(
      pipeline_config_from_json(Json::parse(R"({"input": "i", "output_dir": "o", "filter": {"drop_rate_2box": 1.5}})")),
      UsageError);
  EXPECT_THROW(
      pipeline_config_from_json(Json::parse(R"({"input": "i", "output_dir": "o", "filter": {"aspect_range": [2, 1]}})")),
      UsageError);
}
