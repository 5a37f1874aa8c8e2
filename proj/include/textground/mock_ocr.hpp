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

#include <cstdint>

#include "textground/metrics.hpp"
#include "textground/sample.hpp"

namespace textground {

struct OcrNoise {
  double char_sub_rate = 0.0;  // per-character substitution probability
  double box_jitter_px = 0.0;  // each edge moves uniformly within +/- this many pixels
};

/// Stand-in OCR engine for generated images: reads back the sample's grounded spans
/// (text plus dequantized box) and perturbs them. Substituted characters always
/// differ from the original. Deterministic in (sample id, seed).
HypothesisOcr mock_ocr(const SampleRecord& ground_truth, const OcrNoise& noise, std::uint64_t seed);

}  // namespace textground
