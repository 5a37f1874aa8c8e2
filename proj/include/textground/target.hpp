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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textground/error.hpp"
#include "textground/geometry.hpp"
#include "textground/sample.hpp"

namespace textground {

/// Maps a pixel box onto the [0, 512] grid relative to the image size, rounding half
/// up. An edge collapsed by rounding is reopened by moving x_max/y_max up one unit
/// (or x_min/y_min down when already at 512). Throws DataError if the box leaves the
/// image.
NormBox quantize_box(const PixelBox& box, int width, int height);

/// Inverse scaling; exact up to half a grid cell per edge.
PixelBox dequantize_box(const NormBox& box, int width, int height);

using TokenId = std::int32_t;

enum class ControlToken { kSpanStart, kBoxSep, kSpanEnd, kSeqEnd, kSeqEndText };

/// Token id layout: image tokens, then one token per character, then the 513
/// coordinate tokens for 0..512, then the control tokens. Ranges never overlap.
class VocabLayout {
 public:
  static constexpr int kCoordTokens = NormBox::kGrid + 1;
  static constexpr int kControlTokens = 5;

  VocabLayout(int image_token_count, std::u32string charset);

  /// Printable ASCII (U+0020..U+007E) as the character set.
  static VocabLayout ascii(int image_token_count);

  int size() const noexcept { return control_base_ + kControlTokens; }
  int image_token_count() const noexcept { return image_count_; }
  const std::u32string& charset() const noexcept { return charset_; }

  bool is_image(TokenId id) const noexcept { return id >= 0 && id < image_count_; }
  std::optional<TokenId> char_token(char32_t c) const noexcept;
  std::optional<char32_t> char_of(TokenId id) const noexcept;
  TokenId coord_token(int value) const;
  std::optional<int> coord_of(TokenId id) const noexcept;
  TokenId control(ControlToken c) const noexcept;
  std::optional<ControlToken> control_of(TokenId id) const noexcept;

 private:
  int image_count_;
  std::u32string charset_;  // sorted, unique
  int char_base_;
  int coord_base_;
  int control_base_;
};

enum class TargetVariant { kTextOnly, kBBoxOnly, kTextAndBBox };
enum class TargetOrder { kPostImage, kPreImage };

std::string_view to_string(TargetVariant v) noexcept;
std::string_view to_string(TargetOrder o) noexcept;

struct BuildConfig {
  TargetVariant variant = TargetVariant::kTextAndBBox;
  TargetOrder order = TargetOrder::kPostImage;
  double alpha = 1.0;
};

/// Token sequence plus the two disjoint loss masks. Every position is in exactly
/// one mask.
struct TargetSequence {
  std::vector<TokenId> tokens;
  std::vector<bool> img_mask;
  std::vector<bool> text_mask;

  friend bool operator==(const TargetSequence&, const TargetSequence&) = default;
};

/// Appends supervision blocks for `spans` (emitted in reading order) around
/// `image_tokens`:
///   block     = SPAN_START chars* BOX_SEP [x_min y_min x_max y_max] SPAN_END
///   PostImage = image ++ blocks ++ SEQ_END
///   PreImage  = blocks ++ SEQ_END_TEXT ++ image
/// TextOnly omits the coordinates, BBoxOnly the characters.
TargetSequence build_target(std::span<const TokenId> image_tokens,
                            std::span<const GroundedSpan> spans, const BuildConfig& cfg,
                            const VocabLayout& vocab);

/// Closed-form length of build_target's output.
std::size_t target_length(std::size_t image_tokens, std::span<const GroundedSpan> spans,
                          TargetVariant variant);

class TargetParseError : public DataError {
 public:
  TargetParseError(std::size_t position, const std::string& what)
      : DataError("target token " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

struct ParsedSpan {
  std::string text;            // empty for BBoxOnly
  std::optional<NormBox> box;  // absent for TextOnly

  friend bool operator==(const ParsedSpan&, const ParsedSpan&) = default;
};

struct ParsedTarget {
  std::vector<TokenId> image_tokens;
  std::vector<ParsedSpan> spans;
  TargetOrder order = TargetOrder::kPostImage;
  /// Absent when the sequence carries no spans.
  std::optional<TargetVariant> variant;
};

/// Inverse of build_target. Throws TargetParseError on any grammar violation.
ParsedTarget parse_target(const TargetSequence& seq, const VocabLayout& vocab);

/// The spans as build_target will emit them: reading order, projected onto the variant.
std::vector<ParsedSpan> expected_spans(std::span<const GroundedSpan> spans, TargetVariant variant);

}  // namespace textground
