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

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textground/aligner.hpp"
#include "textground/error.hpp"
#include "textground/sample.hpp"

namespace textground {

enum class FilterReason {
  kMinDim,
  kAspectRatio,
  kTextArea,
  kLowConfidence,
  kSymbolOnly,
  kUnmatchedRatio,
  kDownsampled,
  kAuditSpanUngrounded,
  kAuditIncoherent,
};

std::string_view to_string(FilterReason r) noexcept;

enum class FilterDecision { kKeep, kDrop };

struct FilterVerdict {
  FilterDecision decision = FilterDecision::kKeep;
  std::vector<FilterReason> reasons;  // empty iff kept

  bool kept() const noexcept { return decision == FilterDecision::kKeep; }
  static FilterVerdict from_reasons(std::vector<FilterReason> reasons);
};

struct FilterConfig {
  int min_dim = 256;
  double aspect_min = 0.67;
  double aspect_max = 1.5;
  double min_text_area_ratio = 0.10;
  double min_ocr_confidence = 0.7;
  double max_unmatched_ratio = 0.70;
  double drop_rate_1box = 0.60;
  double drop_rate_2box = 0.40;
  std::uint64_t seed = 0;

  /// Throws UsageError when a ratio leaves [0, 1] or the aspect range is not ordered.
  void validate() const;
};

/// Exact area of the union of the boxes (coordinate-compression sweep).
double union_area(std::span<const PixelBox> boxes);

/// Union area of the word boxes, clipped to the image, over width * height.
double union_text_area_ratio(std::span<const OcrWord> words, int width, int height);

bool passes_confidence(const OcrWord& word, const FilterConfig& cfg) noexcept;

/// Image- and box-level heuristics. Words below the confidence floor are set aside,
/// then words with no letter or digit; the text-area test runs on what remains.
/// The unmatched-word ratio is taken over every OCR word. All violated reasons
/// are reported.
FilterVerdict stage1_filter(const SampleRecord& sample, const AlignmentResult& alignment,
                            const FilterConfig& cfg);

/// Uniform draw in [0, 1) determined only by (id, seed).
double downsample_draw(std::string_view id, std::uint64_t seed) noexcept;

/// Trivial-case pruning for one sample: 1-box samples drop when the draw is below
/// drop_rate_1box, 2-box samples below drop_rate_2box; larger samples always stay.
FilterVerdict stage2_verdict(const SampleRecord& sample, const FilterConfig& cfg) noexcept;

/// stage2_verdict over a batch; verdicts line up with the input.
std::vector<FilterVerdict> stage2_downsample(std::span<const SampleRecord> samples,
                                             const FilterConfig& cfg);

// Semantic audit --------------------------------------------------------------

/// What the auditor is shown. Carries the image size and OCR words in addition to
/// the caption and spans so box coherence can be checked.
struct AuditRequest {
  std::string sample_id;
  std::string image_ref;
  std::string caption;
  std::vector<std::string> spans;
  std::vector<GroundedSpan> grounded_spans;
  int width = 0;
  int height = 0;
  std::vector<OcrWord> ocr_words;
};

struct AuditResponse {
  std::vector<bool> span_grounded;  // one flag per request span
  bool coherent = true;
};

/// Implementations must tolerate concurrent calls or be wrapped by SerializedAuditClient.
class VlmAuditClient {
 public:
  virtual ~VlmAuditClient() = default;
  /// Throws ClientError on transport failure.
  virtual AuditResponse audit(const AuditRequest& request) = 0;
};

/// Rule-based in-process auditor: a span is grounded when an unused grounded span
/// carries the same normalized text; the sample is coherent when every grounded
/// box equals the quantized union of its source word boxes.
class MockVlmAuditor final : public VlmAuditClient {
 public:
  AuditResponse audit(const AuditRequest& request) override;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{0};
};

/// Raised once the retry budget is spent. The sample is neither kept nor dropped.
class AuditUnavailable : public ClientError {
 public:
  AuditUnavailable(std::string sample_id, const std::string& cause)
      : ClientError("audit of sample '" + sample_id + "' failed: " + cause),
        sample_id_(std::move(sample_id)) {}
  const std::string& sample_id() const noexcept { return sample_id_; }

 private:
  std::string sample_id_;
};

AuditRequest make_audit_request(const SampleRecord& sample);

FilterVerdict stage3_semantic_audit(const SampleRecord& sample, VlmAuditClient& auditor,
                                    const RetryPolicy& retry = {});

}  // namespace textground
