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

#include "textground/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <optional>

#include "textground/error.hpp"

namespace textground {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset of the first code unit
  std::size_t length;  // UTF-8 code units
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t n = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, n, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({static_cast<char32_t>(c), static_cast<std::size_t>(start),
                   static_cast<std::size_t>(i - start)});
  }
  return out;
}

bool is_alnum(char32_t c) { return u_isalnum(static_cast<UChar32>(c)); }
bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

enum class Family { kStraightDouble, kCurlyDouble, kStraightSingle, kCurlySingle };

bool is_single_quote(char32_t c) { return c == U'\'' || c == U'‘' || c == U'’'; }

// Neighbor test helpers; out-of-range neighbors count as non-alphanumeric.
bool alnum_at(const std::vector<CodePoint>& cps, std::ptrdiff_t i) {
  return i >= 0 && i < static_cast<std::ptrdiff_t>(cps.size()) && is_alnum(cps[i].value);
}

bool is_apostrophe(const std::vector<CodePoint>& cps, std::size_t i) {
  const auto k = static_cast<std::ptrdiff_t>(i);
  return is_single_quote(cps[i].value) && alnum_at(cps, k - 1) && alnum_at(cps, k + 1);
}

std::optional<Family> opener_at(const std::vector<CodePoint>& cps, std::size_t i) {
  const char32_t c = cps[i].value;
  if (c == U'"') return Family::kStraightDouble;
  if (c == U'“') return Family::kCurlyDouble;
  if (c == U'\'' || c == U'‘') {
    if (is_apostrophe(cps, i) || alnum_at(cps, static_cast<std::ptrdiff_t>(i) - 1)) return std::nullopt;
    return c == U'\'' ? Family::kStraightSingle : Family::kCurlySingle;
  }
  return std::nullopt;
}

bool closes(const std::vector<CodePoint>& cps, std::size_t i, Family family) {
  const char32_t c = cps[i].value;
  switch (family) {
    case Family::kStraightDouble:
      return c == U'"';
    case Family::kCurlyDouble:
      return c == U'”';
    case Family::kStraightSingle:
    case Family::kCurlySingle: {
      const char32_t want = family == Family::kStraightSingle ? U'\'' : U'’';
      return c == want && !is_apostrophe(cps, i) &&
             !alnum_at(cps, static_cast<std::ptrdiff_t>(i) + 1);
    }
  }
  return false;
}

bool blank(std::string_view s) {
  for (const auto& cp : decode(s)) {
    if (!is_space(cp.value)) return false;
  }
  return true;
}

}  // namespace

std::u32string to_code_points(std::string_view s) {
  std::u32string out;
  for (const auto& cp : decode(s)) out.push_back(cp.value);
  return out;
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      len = 0;
      U8_APPEND_UNSAFE(buf, len, 0xFFFD);
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
  }
  return out;
}

std::vector<QuotedSpan> extract_spans(std::string_view caption,
                                      std::vector<SpanDiagnostic>* diagnostics) {
  const auto cps = decode(caption);
  std::vector<QuotedSpan> spans;
  const auto note = [&](std::size_t offset, std::string message) {
    if (diagnostics != nullptr) diagnostics->push_back({offset, std::move(message)});
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    const auto family = opener_at(cps, i);
    if (!family) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < cps.size() && !closes(cps, j, *family)) ++j;
    if (j == cps.size()) {
      // Unterminated: skip the opener and keep scanning so later spans survive.
      note(cps[i].offset, "unterminated quote");
      ++i;
      continue;
    }
    const std::size_t content_begin = cps[i].offset + cps[i].length;
    const std::size_t content_end = cps[j].offset;
    const auto content = caption.substr(content_begin, content_end - content_begin);
    if (blank(content)) {
      note(cps[i].offset, "empty quoted span");
    } else {
      spans.push_back({std::string(content), cps[i].offset, cps[j].offset + cps[j].length});
    }
    i = j + 1;
  }
  return spans;
}

std::string normalize_text(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");

  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u = nfc->normalize(u, status);
  u.foldCase();
  u = nfc->normalize(u, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");

  std::u32string collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) {
    const auto c = static_cast<char32_t>(u.char32At(i));
    if (is_space(c)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed.push_back(U' ');
    pending_space = false;
    collapsed.push_back(c);
  }

  std::size_t b = 0, e = collapsed.size();
  while (b < e && (is_space(collapsed[b]) || is_punct(collapsed[b]))) ++b;
  while (e > b && (is_space(collapsed[e - 1]) || is_punct(collapsed[e - 1]))) --e;
  return to_utf8(std::u32string_view(collapsed).substr(b, e - b));
}

std::vector<std::string> tokenize_words(std::string_view s) {
  const std::string norm = normalize_text(s);
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < norm.size()) {
    auto stop = norm.find(' ', start);
    if (stop == std::string::npos) stop = norm.size();
    if (stop > start) tokens.push_back(norm.substr(start, stop - start));
    start = stop + 1;
  }
  return tokens;
}

std::vector<std::string> word_units(std::string_view s) {
  std::vector<std::string> units;
  for (const auto& token : tokenize_words(s)) {
    auto unit = normalize_text(token);
    if (!unit.empty()) units.push_back(std::move(unit));
  }
  return units;
}

bool has_alnum(std::string_view s) {
  for (const auto& cp : decode(s)) {
    if (is_alnum(cp.value)) return true;
  }
  return false;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace textground
