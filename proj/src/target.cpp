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

#include "textground/target.hpp"

#include <algorithm>
#include <cmath>

#include "textground/text.hpp"

namespace textground {
namespace {

int quantize_coord(double v, int dim) {
  const double scaled = v * static_cast<double>(NormBox::kGrid) / static_cast<double>(dim);
  const auto rounded = static_cast<long long>(std::floor(scaled + 0.5));
  return static_cast<int>(std::clamp<long long>(rounded, 0, NormBox::kGrid));
}

void reopen(int& lo, int& hi) {
  if (lo != hi) return;
  if (hi < NormBox::kGrid) {
    ++hi;
  } else {
    --lo;
  }
}

std::vector<std::size_t> span_order(std::span<const GroundedSpan> spans) {
  return reading_order(spans, [](const GroundedSpan& s) -> const NormBox& { return s.box; });
}

}  // namespace

NormBox quantize_box(const PixelBox& box, int width, int height) {
  if (width < 1 || height < 1) throw UsageError("quantize_box: image dimensions must be positive");
  if (box.x_max() > width || box.y_max() > height) {
    throw DataError("quantize_box: box extends past the " + std::to_string(width) + "x" +
                    std::to_string(height) + " image");
  }
  int x0 = quantize_coord(box.x_min(), width), x1 = quantize_coord(box.x_max(), width);
  int y0 = quantize_coord(box.y_min(), height), y1 = quantize_coord(box.y_max(), height);
  reopen(x0, x1);
  reopen(y0, y1);
  return NormBox(x0, y0, x1, y1);
}

PixelBox dequantize_box(const NormBox& box, int width, int height) {
  const auto sx = static_cast<double>(width) / NormBox::kGrid;
  const auto sy = static_cast<double>(height) / NormBox::kGrid;
  return PixelBox(box.x_min() * sx, box.y_min() * sy, box.x_max() * sx, box.y_max() * sy);
}

VocabLayout::VocabLayout(int image_token_count, std::u32string charset)
    : image_count_(image_token_count), charset_(std::move(charset)) {
  if (image_count_ < 1) throw UsageError("vocab needs at least one image token");
  std::sort(charset_.begin(), charset_.end());
  charset_.erase(std::unique(charset_.begin(), charset_.end()), charset_.end());
  char_base_ = image_count_;
  coord_base_ = char_base_ + static_cast<int>(charset_.size());
  control_base_ = coord_base_ + kCoordTokens;
}

VocabLayout VocabLayout::ascii(int image_token_count) {
  std::u32string chars;
  for (char32_t c = 0x20; c <= 0x7E; ++c) chars.push_back(c);
  return VocabLayout(image_token_count, std::move(chars));
}

std::optional<TokenId> VocabLayout::char_token(char32_t c) const noexcept {
  const auto it = std::lower_bound(charset_.begin(), charset_.end(), c);
  if (it == charset_.end() || *it != c) return std::nullopt;
  return char_base_ + static_cast<TokenId>(it - charset_.begin());
}

std::optional<char32_t> VocabLayout::char_of(TokenId id) const noexcept {
  if (id < char_base_ || id >= coord_base_) return std::nullopt;
  return charset_[static_cast<std::size_t>(id - char_base_)];
}

TokenId VocabLayout::coord_token(int value) const {
  if (value < 0 || value > NormBox::kGrid) throw UsageError("coordinate outside [0, 512]");
  return coord_base_ + value;
}

std::optional<int> VocabLayout::coord_of(TokenId id) const noexcept {
  if (id < coord_base_ || id >= control_base_) return std::nullopt;
  return id - coord_base_;
}

TokenId VocabLayout::control(ControlToken c) const noexcept {
  return control_base_ + static_cast<TokenId>(c);
}

std::optional<ControlToken> VocabLayout::control_of(TokenId id) const noexcept {
  if (id < control_base_ || id >= size()) return std::nullopt;
  return static_cast<ControlToken>(id - control_base_);
}

std::string_view to_string(TargetVariant v) noexcept {
  switch (v) {
    case TargetVariant::kTextOnly:
      return "text";
    case TargetVariant::kBBoxOnly:
      return "bbox";
    case TargetVariant::kTextAndBBox:
      return "both";
  }
  return "unknown";
}

std::string_view to_string(TargetOrder o) noexcept {
  return o == TargetOrder::kPostImage ? "post" : "pre";
}

std::size_t target_length(std::size_t image_tokens, std::span<const GroundedSpan> spans,
                          TargetVariant variant) {
  std::size_t n = image_tokens + 1;
  for (const auto& s : spans) {
    n += 3;  // SPAN_START, BOX_SEP, SPAN_END
    if (variant != TargetVariant::kBBoxOnly) n += to_code_points(s.text).size();
    if (variant != TargetVariant::kTextOnly) n += 4;
  }
  return n;
}

TargetSequence build_target(std::span<const TokenId> image_tokens,
                            std::span<const GroundedSpan> spans, const BuildConfig& cfg,
                            const VocabLayout& vocab) {
  if (image_tokens.empty()) throw UsageError("build_target: image token list is empty");
  for (auto t : image_tokens) {
    if (!vocab.is_image(t)) throw UsageError("build_target: " + std::to_string(t) + " is not an image token");
  }

  std::vector<TokenId> text;
  for (auto idx : span_order(spans)) {
    const auto& span = spans[idx];
    text.push_back(vocab.control(ControlToken::kSpanStart));
    if (cfg.variant != TargetVariant::kBBoxOnly) {
      for (char32_t c : to_code_points(span.text)) {
        const auto id = vocab.char_token(c);
        if (!id) throw DataError("span '" + span.text + "' has a character outside the vocabulary");
        text.push_back(*id);
      }
    }
    text.push_back(vocab.control(ControlToken::kBoxSep));
    if (cfg.variant != TargetVariant::kTextOnly) {
      for (int v : {span.box.x_min(), span.box.y_min(), span.box.x_max(), span.box.y_max()}) {
        text.push_back(vocab.coord_token(v));
      }
    }
    text.push_back(vocab.control(ControlToken::kSpanEnd));
  }

  TargetSequence seq;
  const auto append = [&](std::span<const TokenId> part, bool is_image) {
    seq.tokens.insert(seq.tokens.end(), part.begin(), part.end());
    seq.img_mask.insert(seq.img_mask.end(), part.size(), is_image);
    seq.text_mask.insert(seq.text_mask.end(), part.size(), !is_image);
  };
  if (cfg.order == TargetOrder::kPostImage) {
    text.push_back(vocab.control(ControlToken::kSeqEnd));
    append(image_tokens, true);
    append(text, false);
  } else {
    text.push_back(vocab.control(ControlToken::kSeqEndText));
    append(text, false);
    append(image_tokens, true);
  }
  return seq;
}

std::vector<ParsedSpan> expected_spans(std::span<const GroundedSpan> spans, TargetVariant variant) {
  std::vector<ParsedSpan> out;
  for (auto idx : span_order(spans)) {
    ParsedSpan p;
    if (variant != TargetVariant::kBBoxOnly) p.text = spans[idx].text;
    if (variant != TargetVariant::kTextOnly) p.box = spans[idx].box;
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

class TargetParser {
 public:
  TargetParser(const TargetSequence& seq, const VocabLayout& vocab) : seq_(seq), vocab_(vocab) {}

  ParsedTarget parse() {
    if (seq_.img_mask.size() != seq_.tokens.size() || seq_.text_mask.size() != seq_.tokens.size()) {
      throw TargetParseError(0, "mask length differs from token count");
    }
    if (seq_.tokens.empty()) throw TargetParseError(0, "empty sequence");
    ParsedTarget out;
    if (vocab_.is_image(seq_.tokens.front())) {
      out.order = TargetOrder::kPostImage;
      out.image_tokens = images();
      blocks(out);
      expect(ControlToken::kSeqEnd, "SEQ_END");
    } else {
      out.order = TargetOrder::kPreImage;
      blocks(out);
      expect(ControlToken::kSeqEndText, "SEQ_END_TEXT");
      out.image_tokens = images();
      if (out.image_tokens.empty()) throw TargetParseError(pos_, "expected image tokens");
    }
    if (pos_ != seq_.tokens.size()) throw TargetParseError(pos_, "trailing tokens after sequence end");
    return out;
  }

 private:
  bool at(ControlToken c) const {
    return pos_ < seq_.tokens.size() && vocab_.control_of(seq_.tokens[pos_]) == c;
  }

  void expect(ControlToken c, const char* name) {
    if (!at(c)) throw TargetParseError(pos_, std::string("expected ") + name);
    check_mask(false);
    ++pos_;
  }

  void check_mask(bool image) const {
    if (seq_.img_mask[pos_] != image || seq_.text_mask[pos_] == image) {
      throw TargetParseError(pos_, "loss mask does not match token role");
    }
  }

  std::vector<TokenId> images() {
    std::vector<TokenId> out;
    while (pos_ < seq_.tokens.size() && vocab_.is_image(seq_.tokens[pos_])) {
      check_mask(true);
      out.push_back(seq_.tokens[pos_++]);
    }
    return out;
  }

  void blocks(ParsedTarget& out) {
    while (at(ControlToken::kSpanStart)) {
      const std::size_t block_start = pos_;
      expect(ControlToken::kSpanStart, "SPAN_START");
      std::u32string text;
      while (pos_ < seq_.tokens.size()) {
        const auto c = vocab_.char_of(seq_.tokens[pos_]);
        if (!c) break;
        check_mask(false);
        text.push_back(*c);
        ++pos_;
      }
      expect(ControlToken::kBoxSep, "BOX_SEP");
      ParsedSpan span;
      span.text = to_utf8(text);
      if (pos_ < seq_.tokens.size() && vocab_.coord_of(seq_.tokens[pos_])) {
        int v[4];
        for (int k = 0; k < 4; ++k) {
          const auto coord = pos_ < seq_.tokens.size() ? vocab_.coord_of(seq_.tokens[pos_]) : std::nullopt;
          if (!coord) throw TargetParseError(pos_, "expected coordinate token");
          check_mask(false);
          v[k] = *coord;
          ++pos_;
        }
        try {
          span.box = NormBox(v[0], v[1], v[2], v[3]);
        } catch (const DataError& e) {
          throw TargetParseError(pos_ - 4, e.what());
        }
      }
      expect(ControlToken::kSpanEnd, "SPAN_END");

      TargetVariant variant;
      if (!span.text.empty() && span.box) {
        variant = TargetVariant::kTextAndBBox;
      } else if (span.box) {
        variant = TargetVariant::kBBoxOnly;
      } else if (!span.text.empty()) {
        variant = TargetVariant::kTextOnly;
      } else {
        throw TargetParseError(block_start, "span block carries neither text nor box");
      }
      if (out.variant && *out.variant != variant) {
        throw TargetParseError(block_start, "span blocks mix supervision variants");
      }
      out.variant = variant;
      out.spans.push_back(std::move(span));
    }
  }

  const TargetSequence& seq_;
  const VocabLayout& vocab_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedTarget parse_target(const TargetSequence& seq, const VocabLayout& vocab) {
  return TargetParser(seq, vocab).parse();
}

}  // namespace textground
