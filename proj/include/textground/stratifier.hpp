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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textground/error.hpp"
#include "textground/sample.hpp"

namespace textground {

enum class Difficulty { kEasy, kMedium, kHard };

inline constexpr Difficulty kAllDifficulties[] = {Difficulty::kEasy, Difficulty::kMedium,
                                                  Difficulty::kHard};

std::string_view to_string(Difficulty d) noexcept;
Difficulty difficulty_from_string(std::string_view s);

struct DifficultyFeatures {
  int n_box = 0;  // number of grounded spans
  int w_max = 0;  // most whitespace words in any span
};

/// Raised for samples without grounded spans; they are excluded from the benchmark.
class NotBenchmarkable : public DataError {
 public:
  using DataError::DataError;
};

DifficultyFeatures features_of(const SampleRecord& sample);

/// Easy: n_box <= 2 and w_max <= 4. Hard: n_box >= 3 and w_max >= 5. Medium otherwise.
Difficulty classify(const DifficultyFeatures& f);

struct BenchManifest {
  std::map<Difficulty, std::vector<std::string>> levels;
  std::map<Difficulty, std::size_t> available;  // classified samples per level before sampling
  std::size_t quota_per_level = 0;
  std::uint64_t seed = 0;
  std::string corpus_digest;
  std::vector<std::string> notes;  // shortfalls, exclusions

  std::size_t count(Difficulty d) const;
};

/// Seeded selection of up to `quota_per_level` ids per level. Candidates are ranked
/// by keyed_hash(id, seed) with id as tie-break, so the result is independent of
/// corpus order.
BenchManifest build_bench(std::span<const SampleRecord> corpus, std::size_t quota_per_level,
                          std::uint64_t seed, std::string corpus_digest = {});

struct Histogram {
  std::map<int, std::size_t> counts;
  std::size_t total = 0;

  double percent(int key) const;
};

struct CorpusStats {
  Histogram box_counts;          // samples by n_box
  Histogram span_token_lengths;  // spans by word count
  std::map<int, Histogram> token_lengths_by_box_count;
};

CorpusStats corpus_stats(std::span<const SampleRecord> corpus);

}  // namespace textground
