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
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "textground/aligner.hpp"
#include "textground/corpus_io.hpp"
#include "textground/filter.hpp"
#include "textground/stratifier.hpp"

namespace textground {

enum class AuditErrorPolicy { kSkip, kAbort };

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  AlignConfig align;
  FilterConfig filter;
  std::size_t quota_per_level = 100;
  std::uint64_t bench_seed = 0;
  std::size_t workers = 1;
  RetryPolicy retry;
  AuditErrorPolicy on_audit_error = AuditErrorPolicy::kAbort;
  /// Empty selects the in-process mock auditor; otherwise a make_transport spec.
  std::string auditor_endpoint;
};

/// Reads the "align" section of a config document; absent keys keep `base` values.
AlignConfig align_config_from_json(const Json& j, AlignConfig base = {});
/// Reads "seed" and the "filter" section of a config document.
FilterConfig filter_config_from_json(const Json& j, FilterConfig base = {});

/// Reads a JSON pipeline config. Relative paths resolve against the config's directory.
PipelineConfig pipeline_config_from_json(const Json& j, const std::filesystem::path& base_dir = {});

struct StageReport {
  std::string name;
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::size_t errored = 0;  // audit failures skipped under AuditErrorPolicy::kSkip
  std::map<std::string, std::size_t> reasons;
};

struct PipelineReport {
  std::vector<StageReport> stages;
  std::size_t final_count = 0;
  std::string corpus_digest;
  std::map<std::string, std::size_t> bench_counts;
  std::vector<std::string> notes;
  bool complete = false;
};

Json to_json(const PipelineReport& r);

/// Extracts the prompt's quoted spans, aligns them with the OCR words (sorted into
/// reading order first) and stores the resulting grounded spans on the sample.
AlignmentResult annotate(SampleRecord& sample, const AlignConfig& cfg);

/// Runs extract, align, the three filter stages and stratification over the input
/// corpus, writing corpus.jsonl (+ manifest), bench.json and report.json into the
/// output directory. Records are processed in id order and outputs depend only on
/// the inputs and seeds, never on the worker count. A stage failure writes the
/// partial report and rethrows.
PipelineReport run_pipeline(const PipelineConfig& cfg, VlmAuditClient* auditor = nullptr);

}  // namespace textground
