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
#include <vector>

#include "textground/sample.hpp"

namespace textground {

struct SynthOptions {
  /// When set, every sample is well-formed: valid size, confident readable OCR, and
  /// every quoted span rendered verbatim. Otherwise a share of samples carries each
  /// defect the filters look for.
  bool clean = false;
};

/// Deterministic synthetic corpus of captioned images with OCR words laid out in
/// lines. grounded_spans are left empty; alignment fills them.
std::vector<SampleRecord> synth_corpus(std::uint64_t seed, std::size_t n, const SynthOptions& options = {});

}  // namespace textground
