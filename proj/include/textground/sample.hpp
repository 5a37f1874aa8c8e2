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
#include <optional>
#include <string>
#include <vector>

#include "textground/geometry.hpp"

namespace textground {

struct OcrWord {
  std::string text;
  PixelBox box;
  double confidence = 1.0;

  friend bool operator==(const OcrWord&, const OcrWord&) = default;
};

/// A prompt-entailed text region: the span text and its box on the [0, 512] grid.
struct GroundedSpan {
  std::string text;
  NormBox box;
  std::vector<std::size_t> source_word_indices;

  friend bool operator==(const GroundedSpan&, const GroundedSpan&) = default;
};

enum class SampleSource { kPublic, kMined };

struct SampleRecord {
  std::string id;
  std::string image_ref;
  int width = 0;
  int height = 0;
  std::string prompt;
  std::vector<OcrWord> ocr_words;
  std::vector<GroundedSpan> grounded_spans;
  SampleSource source = SampleSource::kPublic;
  std::optional<std::vector<std::string>> topic_path;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Checks the per-record invariants (dims, word text/confidence, span indices).
/// Throws DataError naming the first violation.
void validate(const SampleRecord& sample);

/// Stable permutation of word indices by (y_min, x_min), the reading order used
/// throughout the toolkit.
template <typename Range, typename BoxOf>
std::vector<std::size_t> reading_order(const Range& items, BoxOf box_of);

}  // namespace textground

#include <algorithm>
#include <numeric>

namespace textground {

template <typename Range, typename BoxOf>
std::vector<std::size_t> reading_order(const Range& items, BoxOf box_of) {
  std::vector<std::size_t> order(std::size(items));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ba = box_of(items[a]);
    const auto& bb = box_of(items[b]);
    if (ba.y_min() != bb.y_min()) return ba.y_min() < bb.y_min();
    return ba.x_min() < bb.x_min();
  });
  return order;
}

}  // namespace textground
