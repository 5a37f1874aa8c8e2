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

#include "textground/mock_ocr.hpp"

#include <algorithm>

#include "textground/error.hpp"
#include "textground/hashing.hpp"
#include "textground/target.hpp"
#include "textground/text.hpp"

namespace textground {
namespace {

char32_t substitute(char32_t c, SplitMix64& rng) {
  const auto rotate = [&](char32_t base, char32_t span) {
    const auto shift = 1 + static_cast<char32_t>(rng.below(span - 1));
    return base + (c - base + shift) % span;
  };
  if (c >= U'a' && c <= U'z') return rotate(U'a', 26);
  if (c >= U'A' && c <= U'Z') return rotate(U'A', 26);
  if (c >= U'0' && c <= U'9') return rotate(U'0', 10);
  return c == U'x' ? U'y' : U'x';
}

void jitter(double& lo, double& hi, double limit, double amount, SplitMix64& rng) {
  const double a = lo + (2.0 * rng.uniform() - 1.0) * amount;
  const double b = hi + (2.0 * rng.uniform() - 1.0) * amount;
  const double na = std::clamp(a, 0.0, limit);
  const double nb = std::clamp(b, 0.0, limit);
  if (na < nb) {
    lo = na;
    hi = nb;
  }
}

}  // namespace

HypothesisOcr mock_ocr(const SampleRecord& ground_truth, const OcrNoise& noise, std::uint64_t seed) {
  if (!(noise.char_sub_rate >= 0.0 && noise.char_sub_rate <= 1.0)) {
    throw UsageError("char_sub_rate must lie in [0, 1]");
  }
  if (!(noise.box_jitter_px >= 0.0)) throw UsageError("box_jitter_px must be non-negative");
  SplitMix64 rng(keyed_hash(ground_truth.id, seed));
  HypothesisOcr hyp;
  for (const auto& span : ground_truth.grounded_spans) {
    std::u32string text = to_code_points(span.text);
    for (auto& c : text) {
      if (rng.uniform() < noise.char_sub_rate) c = substitute(c, rng);
    }
    const auto box = dequantize_box(span.box, ground_truth.width, ground_truth.height);
    double x0 = box.x_min(), y0 = box.y_min(), x1 = box.x_max(), y1 = box.y_max();
    if (noise.box_jitter_px > 0.0) {
      jitter(x0, x1, ground_truth.width, noise.box_jitter_px, rng);
      jitter(y0, y1, ground_truth.height, noise.box_jitter_px, rng);
    }
    hyp.words.push_back({to_utf8(text), PixelBox(x0, y0, x1, y1), 1.0});
  }
  return hyp;
}

}  // namespace textground
