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

#include "textground/aligner.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>

#include "textground/target.hpp"

namespace textground {

std::string_view to_string(MatchStage stage) noexcept {
  switch (stage) {
    case MatchStage::kExact:
      return "exact";
    case MatchStage::kPartial:
      return "partial";
    case MatchStage::kFuzzy:
      return "fuzzy";
  }
  return "unknown";
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(to_code_points(a), to_code_points(b));
}

namespace {

double similarity_of_normalized(const std::u32string& a, const std::u32string& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

struct Window {
  std::size_t start = 0;   // position in reading order
  std::size_t length = 0;
  std::string norm;
  std::u32string norm_cps;
  std::set<std::string> units;
};

struct Candidate {
  std::size_t span = 0;
  std::size_t window = 0;
  MatchStage stage = MatchStage::kExact;
  double similarity = 0.0;
  double tie_break = 0.0;
};

}  // namespace

double normalized_similarity(std::string_view a, std::string_view b) {
  return similarity_of_normalized(to_code_points(normalize_text(a)),
                                  to_code_points(normalize_text(b)));
}

AlignmentResult align_spans(std::span<const QuotedSpan> spans, std::span<const OcrWord> words,
                            const AlignConfig& cfg) {
  const auto order = reading_order(words, [](const OcrWord& w) -> const PixelBox& { return w.box; });

  struct SpanInfo {
    std::string norm;
    std::u32string norm_cps;
    std::set<std::string> units;
    std::size_t max_window = 0;
  };
  std::vector<SpanInfo> info;
  std::size_t longest_window = 0;
  for (const auto& s : spans) {
    SpanInfo si;
    si.norm = normalize_text(s.text);
    si.norm_cps = to_code_points(si.norm);
    const auto units = word_units(s.text);
    si.units = {units.begin(), units.end()};
    si.max_window = std::min(words.size(), tokenize_words(s.text).size() + cfg.max_window_slack);
    longest_window = std::max(longest_window, si.max_window);
    info.push_back(std::move(si));
  }

  std::vector<Window> windows;
  for (std::size_t start = 0; start < order.size(); ++start) {
    std::string joined;
    for (std::size_t len = 1; len <= longest_window && start + len <= order.size(); ++len) {
      if (len > 1) joined.push_back(' ');
      joined += words[order[start + len - 1]].text;
      Window w;
      w.start = start;
      w.length = len;
      w.norm = normalize_text(joined);
      w.norm_cps = to_code_points(w.norm);
      const auto units = word_units(joined);
      w.units = {units.begin(), units.end()};
      windows.push_back(std::move(w));
    }
  }

  std::vector<Candidate> candidates;
  for (std::size_t s = 0; s < info.size(); ++s) {
    const auto& si = info[s];
    if (si.norm.empty()) continue;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
      const auto& w = windows[wi];
      if (w.length > si.max_window) continue;
      if (w.norm == si.norm) {
        candidates.push_back({s, wi, MatchStage::kExact, 1.0, 1.0});
        continue;
      }
      const double sim = similarity_of_normalized(si.norm_cps, w.norm_cps);
      if (!si.units.empty()) {
        std::size_t shared = 0;
        for (const auto& u : si.units) shared += w.units.count(u);
        const double overlap = static_cast<double>(shared) / static_cast<double>(si.units.size());
        if (overlap >= cfg.partial_threshold) {
          candidates.push_back({s, wi, MatchStage::kPartial, overlap, sim});
          continue;
        }
      }
      if (sim >= cfg.fuzzy_threshold) candidates.push_back({s, wi, MatchStage::kFuzzy, sim, sim});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    const auto key = [&](const Candidate& c) {
      return std::make_tuple(static_cast<int>(c.stage), -c.similarity, -c.tie_break, c.span,
                             windows[c.window].start, windows[c.window].length);
    };
    return key(a) < key(b);
  });

  std::vector<bool> span_done(spans.size(), false);
  std::vector<bool> word_used(words.size(), false);
  AlignmentResult result;
  for (const auto& c : candidates) {
    if (span_done[c.span]) continue;
    const auto& w = windows[c.window];
    bool free = true;
    for (std::size_t k = 0; k < w.length && free; ++k) free = !word_used[order[w.start + k]];
    if (!free) continue;
    SpanMatch m;
    m.span_index = c.span;
    m.stage = c.stage;
    m.similarity = c.similarity;
    for (std::size_t k = 0; k < w.length; ++k) {
      word_used[order[w.start + k]] = true;
      m.word_indices.push_back(order[w.start + k]);
    }
    std::sort(m.word_indices.begin(), m.word_indices.end());
    span_done[c.span] = true;
    result.matches.push_back(std::move(m));
  }

  std::sort(result.matches.begin(), result.matches.end(),
            [](const SpanMatch& a, const SpanMatch& b) { return a.span_index < b.span_index; });
  for (std::size_t s = 0; s < spans.size(); ++s) {
    if (!span_done[s]) result.unmatched_span_indices.push_back(s);
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!word_used[i]) result.unmatched_word_indices.push_back(i);
  }
  return result;
}

std::vector<GroundedSpan> grounded_spans_from_alignment(const AlignmentResult& result,
                                                        std::span<const QuotedSpan> spans,
                                                        std::span<const OcrWord> words, int width,
                                                        int height) {
  std::vector<GroundedSpan> grounded;
  grounded.reserve(result.matches.size());
  for (const auto& m : result.matches) {
    std::vector<PixelBox> boxes;
    boxes.reserve(m.word_indices.size());
    for (auto idx : m.word_indices) boxes.push_back(words[idx].box);
    grounded.push_back({spans[m.span_index].text,
                        quantize_box(box_union(boxes), width, height), m.word_indices});
  }
  return grounded;
}

}  // namespace textground
