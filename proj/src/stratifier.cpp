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

#include "textground/stratifier.hpp"

#include <algorithm>
#include <tuple>

#include "textground/hashing.hpp"
#include "textground/text.hpp"

namespace textground {

std::string_view to_string(Difficulty d) noexcept {
  switch (d) {
    case Difficulty::kEasy:
      return "easy";
    case Difficulty::kMedium:
      return "medium";
    case Difficulty::kHard:
      return "hard";
  }
  return "unknown";
}

Difficulty difficulty_from_string(std::string_view s) {
  for (auto d : kAllDifficulties) {
    if (to_string(d) == s) return d;
  }
  throw DataError("unknown difficulty level '" + std::string(s) + "'");
}

DifficultyFeatures features_of(const SampleRecord& sample) {
  DifficultyFeatures f;
  f.n_box = static_cast<int>(sample.grounded_spans.size());
  for (const auto& s : sample.grounded_spans) {
    f.w_max = std::max(f.w_max, static_cast<int>(tokenize_words(s.text).size()));
  }
  return f;
}

Difficulty classify(const DifficultyFeatures& f) {
  if (f.n_box < 1) throw NotBenchmarkable("sample has no grounded spans");
  if (f.w_max < 1) throw NotBenchmarkable("grounded spans contain no words");
  const bool many_boxes = f.n_box >= 3;
  const bool long_span = f.w_max >= 5;
  if (many_boxes && long_span) return Difficulty::kHard;
  if (many_boxes || long_span) return Difficulty::kMedium;
  return Difficulty::kEasy;
}

std::size_t BenchManifest::count(Difficulty d) const {
  const auto it = levels.find(d);
  return it == levels.end() ? 0 : it->second.size();
}

BenchManifest build_bench(std::span<const SampleRecord> corpus, std::size_t quota_per_level,
                          std::uint64_t seed, std::string corpus_digest) {
  BenchManifest m;
  m.quota_per_level = quota_per_level;
  m.seed = seed;
  m.corpus_digest = std::move(corpus_digest);

  std::map<Difficulty, std::vector<std::pair<std::uint64_t, std::string>>> pools;
  std::size_t excluded = 0;
  for (const auto& s : corpus) {
    try {
      pools[classify(features_of(s))].emplace_back(keyed_hash(s.id, seed), s.id);
    } catch (const NotBenchmarkable&) {
      ++excluded;
    }
  }
  if (excluded > 0) m.notes.push_back("excluded " + std::to_string(excluded) + " samples without grounded spans");

  for (auto d : kAllDifficulties) {
    auto& pool = pools[d];
    std::sort(pool.begin(), pool.end());
    m.available[d] = pool.size();
    auto& ids = m.levels[d];
    const std::size_t take = std::min(quota_per_level, pool.size());
    for (std::size_t i = 0; i < take; ++i) ids.push_back(pool[i].second);
    std::sort(ids.begin(), ids.end());
    if (quota_per_level > pool.size()) {
      m.notes.push_back(std::string(to_string(d)) + ": quota " + std::to_string(quota_per_level) +
                        " exceeds " + std::to_string(pool.size()) + " available samples");
    }
  }
  return m;
}

double Histogram::percent(int key) const {
  const auto it = counts.find(key);
  if (total == 0 || it == counts.end()) return 0.0;
  return 100.0 * static_cast<double>(it->second) / static_cast<double>(total);
}

CorpusStats corpus_stats(std::span<const SampleRecord> corpus) {
  CorpusStats stats;
  for (const auto& s : corpus) {
    const int n_box = static_cast<int>(s.grounded_spans.size());
    ++stats.box_counts.counts[n_box];
    ++stats.box_counts.total;
    for (const auto& span : s.grounded_spans) {
      const int len = static_cast<int>(tokenize_words(span.text).size());
      ++stats.span_token_lengths.counts[len];
      ++stats.span_token_lengths.total;
      auto& joint = stats.token_lengths_by_box_count[n_box];
      ++joint.counts[len];
      ++joint.total;
    }
  }
  return stats;
}

}  // namespace textground
