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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textground/sample.hpp"
#include "textground/stratifier.hpp"

namespace textground {

/// OCR output on a generated image. An entry may hold a single word or a whole line.
struct HypothesisOcr {
  std::vector<OcrWord> words;
};

/// Defaults shared by layout IoU gating and prompt coverage.
inline constexpr double kMatchSimilarity = 0.8;
inline constexpr std::size_t kMaxHypWindow = 6;

struct WordPair {
  std::size_t ref = 0;
  std::size_t hyp = 0;
};

/// Greedy one-to-one pairing of equal words; each ref takes the first unused equal hyp.
std::vector<WordPair> word_match(std::span<const std::string> refs, std::span<const std::string> hyps);

struct AccuracyF1 {
  double accuracy = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::size_t pairs = 0;
};

/// accuracy = recall = pairs / |refs|, precision = pairs / |hyps|. Both lists empty
/// scores 1; an empty reference with a non-empty hypothesis scores 0.
AccuracyF1 accuracy_f1(std::span<const std::string> refs, std::span<const std::string> hyps);

/// Character error rate of the space-joined word units of the hypothesis against
/// those of the reference, over max(1, reference length). Not clamped.
double cer(std::span<const std::string> ref_texts, std::span<const std::string> hyp_texts);

/// Mean IoU over reference spans. Hypothesis candidates are runs of up to
/// kMaxHypWindow reading-order entries (or the longest reference's word count), boxed by their quantized union; a pair is
/// eligible when the texts reach `gate` normalized similarity. Pairs are taken
/// greedily by descending IoU, one-to-one. Unpaired references count 0.
double layout_iou(std::span<const GroundedSpan> refs, const HypothesisOcr& hyp, int width,
                  int height, double gate = kMatchSimilarity);

struct CoverageResult {
  std::size_t total_spans = 0;
  std::size_t matched_spans = 0;
  std::vector<bool> matched_flags;

  /// matched / total; absent when there are no spans.
  std::optional<double> pc() const;
};

/// A span is covered when some run of up to `max_window` (or the span's word
/// count, if larger) reading-order hypothesis entries equals it after normalization or reaches `threshold` similarity.
CoverageResult prompt_coverage(std::span<const std::string> spans, const HypothesisOcr& hyp,
                               double threshold = kMatchSimilarity,
                               std::size_t max_window = kMaxHypWindow);

class ClipScoreClient {
 public:
  virtual ~ClipScoreClient() = default;
  /// Throws ClientError on failure.
  virtual double score(const std::string& image_ref, const std::string& prompt) = 0;
};

struct SampleMetrics {
  std::string id;
  Difficulty level = Difficulty::kEasy;
  double acc = 0.0;
  double f1 = 0.0;
  double cer = 0.0;
  double layout_iou = 0.0;
  std::optional<double> pc;
  std::optional<double> cs;
};

/// All metrics for one reference sample. Reference words come from the grounded
/// spans; coverage spans come from the quoted spans of the prompt.
SampleMetrics score_sample(const SampleRecord& reference, const HypothesisOcr& hyp);

struct LevelSummary {
  std::size_t samples = 0;
  double acc = 0.0;
  double f1 = 0.0;
  double cer = 0.0;
  double layout_iou = 0.0;
  std::optional<double> pc;  // mean over samples where coverage applies
  std::size_t pc_samples = 0;
  std::optional<double> cs;
};

struct EvalReport {
  std::vector<SampleMetrics> samples;  // manifest order: level, then id
  std::map<Difficulty, LevelSummary> levels;
  LevelSummary overall;
  std::vector<std::string> missing;  // bench ids without a hypothesis
  bool flagged = false;
};

struct EvalOptions {
  ClipScoreClient* scorer = nullptr;
  std::size_t workers = 1;
};

EvalReport evaluate(const BenchManifest& bench, std::span<const SampleRecord> corpus,
                    const std::map<std::string, HypothesisOcr>& hypotheses,
                    const EvalOptions& options = {});

/// Fixed-width table with one row per level: CS, Acc, F1, CER, IOU, PC. Rates are
/// shown both raw and scaled by 100.
std::string format_report_table(const EvalReport& report);

}  // namespace textground
