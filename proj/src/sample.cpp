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

#include "textground/sample.hpp"

#include "textground/error.hpp"

namespace textground {

void validate(const SampleRecord& sample) {
  const auto fail = [&](const std::string& what) {
    throw DataError("sample '" + sample.id + "': " + what);
  };
  if (sample.id.empty()) throw DataError("sample with empty id");
  if (sample.width < 1 || sample.height < 1) fail("width and height must be at least 1");
  for (std::size_t i = 0; i < sample.ocr_words.size(); ++i) {
    const auto& w = sample.ocr_words[i];
    if (w.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      fail("OCR word " + std::to_string(i) + " has blank text");
    }
    if (!(w.confidence >= 0.0 && w.confidence <= 1.0)) {
      fail("OCR word " + std::to_string(i) + " confidence outside [0, 1]");
    }
  }
  for (std::size_t s = 0; s < sample.grounded_spans.size(); ++s) {
    const auto& span = sample.grounded_spans[s];
    if (span.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      fail("grounded span " + std::to_string(s) + " has blank text");
    }
    if (span.source_word_indices.empty()) fail("grounded span " + std::to_string(s) + " has no source words");
    for (std::size_t k = 0; k < span.source_word_indices.size(); ++k) {
      const auto idx = span.source_word_indices[k];
      if (idx >= sample.ocr_words.size()) {
        fail("grounded span " + std::to_string(s) + " references missing word " + std::to_string(idx));
      }
      if (k > 0 && idx <= span.source_word_indices[k - 1]) {
        fail("grounded span " + std::to_string(s) + " source indices not strictly increasing");
      }
    }
  }
}

}  // namespace textground
