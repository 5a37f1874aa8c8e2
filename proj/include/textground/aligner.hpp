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
#include <span>
#include <string_view>
#include <vector>

#include "textground/sample.hpp"
#include "textground/text.hpp"

namespace textground {

enum class MatchStage { kExact, kPartial, kFuzzy };

std::string_view to_string(MatchStage stage) noexcept;

/// One caption span bound to a run of OCR words. `word_indices` index the
/// caller's word list, ascending, and form a contiguous run in reading order.
struct SpanMatch {
  std::size_t span_index = 0;
  std::vector<std::size_t> word_indices;
  MatchStage stage = MatchStage::kExact;
  double similarity = 1.0;

  friend bool operator==(const SpanMatch&, const SpanMatch&) = default;
};

struct AlignmentResult {
  std::vector<SpanMatch> matches;  // ordered by span_index
  std::vector<std::size_t> unmatched_span_indices;
  std::vector<std::size_t> unmatched_word_indices;
};

struct AlignConfig {
  double partial_threshold = 0.6;
  double fuzzy_threshold = 0.8;
  /// Windows hold at most (span token count + slack) words.
  std::size_t max_window_slack = 2;
};

/// Unit-cost edit distance over Unicode code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 - levenshtein / max length, computed on normalize_text of both sides;
/// 1 when both normalize to empty.
double normalized_similarity(std::string_view a, std::string_view b);

/// Multistage span-to-OCR alignment.
///
/// Every span is compared with each contiguous reading-order window of OCR words
/// (reading order sorts by y_min then x_min). A window's stage is the first that
/// fires: exact (normalized texts equal), partial (share of the span's word units
/// present in the window >= partial_threshold), fuzzy (normalized similarity
/// >= fuzzy_threshold). Candidates are then accepted greedily by stage, then
/// similarity, then span index, and a word is never claimed twice.
AlignmentResult align_spans(std::span<const QuotedSpan> spans, std::span<const OcrWord> words,
                            const AlignConfig& cfg = {});

/// One GroundedSpan per match, carrying the span text and the quantized union
/// of its words' pixel boxes.
std::vector<GroundedSpan> grounded_spans_from_alignment(const AlignmentResult& result,
                                                        std::span<const QuotedSpan> spans,
                                                        std::span<const OcrWord> words, int width,
                                                        int height);

}  // namespace textground
