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
#include <string>
#include <string_view>
#include <vector>

namespace textground {

/// A quoted span found in a caption. `begin`/`end` are UTF-8 byte offsets of the
/// quoted region including both quote characters; `text` is the content between them.
struct QuotedSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const QuotedSpan&, const QuotedSpan&) = default;
};

struct SpanDiagnostic {
  std::size_t offset = 0;
  std::string message;
};

/// Scans a caption for quoted spans, left to right.
///
/// Recognized pairs are "..." (U+0022), “...” (U+201C/U+201D), '...' (U+0027) and
/// ‘...’ (U+2018/U+2019). A span closes only on the closer of its own family. A single
/// quote with a letter or digit on both sides is an apostrophe and never opens or closes
/// a span; a single-quote opener must not follow a letter or digit and a single-quote
/// closer must not precede one. Unterminated openers and blank spans produce
/// diagnostics instead of spans.
std::vector<QuotedSpan> extract_spans(std::string_view caption,
                                      std::vector<SpanDiagnostic>* diagnostics = nullptr);

/// NFC, full case folding, whitespace collapsed to single spaces, and leading/trailing
/// whitespace and punctuation stripped. Idempotent.
std::string normalize_text(std::string_view s);

/// Whitespace split of normalize_text(s).
std::vector<std::string> tokenize_words(std::string_view s);

/// tokenize_words followed by normalize_text on each token, dropping tokens that
/// become empty. This is the word unit used for matching ("Sale," and "SALE" agree).
std::vector<std::string> word_units(std::string_view s);

/// True when the text contains at least one letter or digit.
bool has_alnum(std::string_view s);

/// UTF-8 decoding to code points; invalid sequences decode to U+FFFD.
std::u32string to_code_points(std::string_view s);
std::string to_utf8(std::u32string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace textground
