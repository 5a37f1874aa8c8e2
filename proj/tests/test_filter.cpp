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

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "textground/aligner.hpp"
#include "textground/error.hpp"
#include "textground/filter.hpp"
#include "textground/target.hpp"

using namespace textground;

namespace {

bool has_reason(const FilterVerdict& v, FilterReason r) {
  return std::find(v.reasons.begin(), v.reasons.end(), r) != v.reasons.end();
}

// 512x512 sample whose two words are both quoted and cover 0.3 of the image.
SampleRecord good_sample() {
  SampleRecord s;
  s.id = "good";
  s.width = s.height = 512;
  s.prompt = R"(a banner that reads "GRAND OPENING")";
  s.ocr_words = {{"GRAND", PixelBox(0, 0, 256, 307.2), 0.95}, {"OPENING", PixelBox(256, 0, 512, 307.2), 0.9}};
  return s;
}

AlignmentResult align(const SampleRecord& s) {
  const auto spans = extract_spans(s.prompt);
  return align_spans(spans, s.ocr_words);
}

SampleRecord with_boxes(std::size_t n_box, std::string id) {
  SampleRecord s;
  s.id = std::move(id);
  s.width = s.height = 512;
  for (std::size_t i = 0; i < n_box; ++i) {
    s.grounded_spans.push_back({"W" + std::to_string(i), NormBox(0, int(i) * 10, 10, int(i) * 10 + 10), {i}});
  }
  return s;
}

class CountingFailClient : public VlmAuditClient {
 public:
  AuditResponse audit(const AuditRequest&) override {
    ++calls;
    throw ClientError("connection refused");
  }
  std::atomic<int> calls{0};
};

class FlakyClient : public VlmAuditClient {
 public:
  AuditResponse audit(const AuditRequest& r) override {
    if (++calls < 3) throw ClientError("timeout");
    return MockVlmAuditor().audit(r);
  }
  int calls = 0;
};

class WrongSizeClient : public VlmAuditClient {
 public:
  AuditResponse audit(const AuditRequest&) override { return {}; }
};

}  // namespace

TEST(FilterConfig, DefaultsAndValidation) {
  const FilterConfig cfg;
  EXPECT_EQ(cfg.min_dim, 256);
  EXPECT_DOUBLE_EQ(cfg.aspect_min, 0.67);
  EXPECT_DOUBLE_EQ(cfg.aspect_max, 1.5);
  EXPECT_DOUBLE_EQ(cfg.min_text_area_ratio, 0.10);
  EXPECT_DOUBLE_EQ(cfg.min_ocr_confidence, 0.7);
  EXPECT_DOUBLE_EQ(cfg.max_unmatched_ratio, 0.70);
  EXPECT_DOUBLE_EQ(cfg.drop_rate_1box, 0.60);
  EXPECT_DOUBLE_EQ(cfg.drop_rate_2box, 0.40);
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.drop_rate_1box = 1.2;
  EXPECT_THROW(bad.validate(), UsageError);
  bad = cfg;
  bad.aspect_min = 2.0;
  EXPECT_THROW(bad.validate(), UsageError);
}

TEST(UnionTextAreaRatio, Examples) {
  EXPECT_DOUBLE_EQ(union_text_area_ratio({}, 100, 100), 0.0);
  const std::vector<OcrWord> one{{"a", PixelBox(0, 0, 50, 50), 1.0}};
  EXPECT_DOUBLE_EQ(union_text_area_ratio(one, 100, 100), 0.25);
  const std::vector<OcrWord> twice{{"a", PixelBox(0, 0, 50, 50), 1.0}, {"b", PixelBox(0, 0, 50, 50), 1.0}};
  EXPECT_DOUBLE_EQ(union_text_area_ratio(twice, 100, 100), 0.25);
}

TEST(UnionTextAreaRatio, MatchesGridOracleAndNeverExceedsSumOfAreas) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = 8 + static_cast<int>(rng.below(40)), h = 8 + static_cast<int>(rng.below(40));
    std::vector<oracle::IntBox> boxes;
    std::vector<OcrWord> words;
    double sum = 0.0;
    const auto n = rng.below(8);
    for (std::size_t i = 0; i < n; ++i) {
      const int x0 = static_cast<int>(rng.below(w - 1)), y0 = static_cast<int>(rng.below(h - 1));
      const int x1 = x0 + 1 + static_cast<int>(rng.below(w - x0 - 1));
      const int y1 = y0 + 1 + static_cast<int>(rng.below(h - y0 - 1));
      boxes.push_back({x0, y0, x1, y1});
      words.push_back({"w", PixelBox(x0, y0, x1, y1), 1.0});
      sum += double(x1 - x0) * (y1 - y0);
    }
    const double ratio = union_text_area_ratio(words, w, h);
    EXPECT_DOUBLE_EQ(ratio, double(oracle::covered_cells(boxes, w, h)) / (double(w) * h));
    const double sum_ratio = sum / (double(w) * h);
    EXPECT_LE(ratio, sum_ratio + 1e-12);
    bool overlap = false;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        const auto &a = boxes[i], &b = boxes[j];
        overlap |= a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
      }
    }
    EXPECT_EQ(std::abs(ratio - sum_ratio) < 1e-12, !overlap);
  }
}

TEST(UnionTextAreaRatio, ClipsToImage) {
  const std::vector<OcrWord> spill{{"a", PixelBox(50, 50, 150, 150), 1.0}};
  EXPECT_DOUBLE_EQ(union_text_area_ratio(spill, 100, 100), 0.25);
}

TEST(Stage1, Examples) {
  auto s = good_sample();
  s.width = 200;
  s.height = 300;
  auto v = stage1_filter(s, align(s), {});
  EXPECT_FALSE(v.kept());
  EXPECT_TRUE(has_reason(v, FilterReason::kMinDim));

  s = good_sample();
  v = stage1_filter(s, align(s), {});
  EXPECT_TRUE(v.kept());
  EXPECT_TRUE(v.reasons.empty());

  // 8 of 10 OCR words are not in the caption.
  s = good_sample();
  for (int i = 0; i < 8; ++i) s.ocr_words.push_back({"NOISE" + std::to_string(i), PixelBox(10.0 * i, 400, 10.0 * i + 9, 420), 0.9});
  v = stage1_filter(s, align(s), {});
  EXPECT_EQ(v.reasons, std::vector<FilterReason>{FilterReason::kUnmatchedRatio});
}

TEST(Stage1, BoundariesAreExact) {
  const FilterConfig cfg;
  auto s = good_sample();
  const auto a = align(s);
  for (const auto& [w, h, keep] : std::vector<std::tuple<int, int, bool>>{{255, 255, false}, {256, 256, true}}) {
    s = good_sample();
    s.width = w;
    s.height = h;
    s.ocr_words = {{"GRAND", PixelBox(0, 0, 128, 128), 0.95}, {"OPENING", PixelBox(128, 0, 255, 128), 0.9}};
    const auto v = stage1_filter(s, align(s), cfg);
    EXPECT_EQ(has_reason(v, FilterReason::kMinDim), !keep) << w;
  }
  for (const auto& [w, keep] : std::vector<std::pair<int, bool>>{{669, false}, {670, true}, {1500, true}, {1501, false}}) {
    s = good_sample();
    s.width = w;
    s.height = 1000;
    EXPECT_EQ(has_reason(stage1_filter(s, a, cfg), FilterReason::kAspectRatio), !keep) << w;
  }
  for (const auto& [rows, keep] : std::vector<std::pair<int, bool>>{{99, false}, {100, true}}) {
    s = good_sample();
    s.width = s.height = 1000;
    s.ocr_words = {{"GRAND", PixelBox(0, 0, 500, rows), 0.95}, {"OPENING", PixelBox(500, 0, 1000, rows), 0.9}};
    EXPECT_EQ(has_reason(stage1_filter(s, align(s), cfg), FilterReason::kTextArea), !keep) << rows;
  }
  EXPECT_FALSE(passes_confidence({"a", PixelBox(0, 0, 1, 1), 0.69}, cfg));
  EXPECT_TRUE(passes_confidence({"a", PixelBox(0, 0, 1, 1), 0.70}, cfg));

  s = good_sample();
  s.ocr_words.resize(100, {"X", PixelBox(0, 0, 1, 1), 0.9});
  for (const auto& [unmatched, keep] : std::vector<std::pair<std::size_t, bool>>{{71, false}, {70, true}}) {
    AlignmentResult r;
    for (std::size_t i = 0; i < unmatched; ++i) r.unmatched_word_indices.push_back(i);
    EXPECT_EQ(has_reason(stage1_filter(s, r, cfg), FilterReason::kUnmatchedRatio), !keep) << unmatched;
  }
}

TEST(Stage1, ConfidenceAndSymbolRules) {
  auto s = good_sample();
  for (auto& w : s.ocr_words) w.confidence = 0.5;
  auto v = stage1_filter(s, align(s), {});
  EXPECT_TRUE(has_reason(v, FilterReason::kLowConfidence));

  // Readable words carry the area; a confident symbol-only word does not rescue it.
  s = good_sample();
  s.ocr_words = {{"***", PixelBox(0, 0, 512, 512), 0.99}};
  v = stage1_filter(s, align(s), {});
  EXPECT_TRUE(has_reason(v, FilterReason::kSymbolOnly));
  EXPECT_TRUE(has_reason(v, FilterReason::kTextArea));

  // One low-confidence word is removed; the remaining word still covers enough.
  s = good_sample();
  s.ocr_words[1].confidence = 0.3;
  v = stage1_filter(s, align(s), {});
  EXPECT_TRUE(v.kept());
}

TEST(Stage1, RaisingConfidenceNeverFlipsKeepToDrop) {
  SplitMix64 rng(42);
  const FilterConfig cfg;
  for (int trial = 0; trial < 1000; ++trial) {
    SampleRecord s;
    s.id = "m";
    s.width = 256 + static_cast<int>(rng.below(300));
    s.height = 256 + static_cast<int>(rng.below(300));
    const auto n = 1 + rng.below(6);
    std::string prompt = "a sign";
    for (std::size_t i = 0; i < n; ++i) {
      const auto text = rng.below(4) == 0 ? std::string("#") : oracle::random_word(rng, "ab", 1, 3);
      const double x = rng.uniform() * 200, y = rng.uniform() * 200;
      s.ocr_words.push_back({text, PixelBox(x, y, x + 20 + rng.uniform() * 200, y + 20 + rng.uniform() * 100),
                             rng.uniform()});
      if (rng.below(2)) prompt += " \"" + text + "\"";
    }
    s.prompt = prompt;
    const auto a = align(s);
    const auto before = stage1_filter(s, a, cfg);
    auto raised = s;
    auto& w = raised.ocr_words[rng.below(n)];
    w.confidence = std::min(1.0, w.confidence + rng.uniform());
    const auto after = stage1_filter(raised, a, cfg);
    if (before.kept()) {
      EXPECT_TRUE(after.kept());
    }
  }
}

TEST(FilterVerdict, DropsCarryReasonsKeepsCarryNone) {
  EXPECT_TRUE(FilterVerdict::from_reasons({}).kept());
  const auto v = FilterVerdict::from_reasons({FilterReason::kAspectRatio});
  EXPECT_FALSE(v.kept());
  EXPECT_EQ(to_string(FilterReason::kAspectRatio), "aspect_ratio");
  EXPECT_EQ(to_string(FilterReason::kAuditIncoherent), "audit_incoherent");
}

TEST(Stage2, ThreeOrMoreBoxesAlwaysKept) {
  for (int i = 0; i < 200; ++i) {
    EXPECT_TRUE(stage2_verdict(with_boxes(5, "id" + std::to_string(i)), {}).kept());
    EXPECT_TRUE(stage2_verdict(with_boxes(3, "id" + std::to_string(i)), {}).kept());
  }
}

TEST(Stage2, KeptFractionsAndDeterminism) {
  FilterConfig cfg;
  cfg.seed = 99;
  std::vector<SampleRecord> one, two;
  for (int i = 0; i < 10000; ++i) {
    one.push_back(with_boxes(1, "one-" + std::to_string(i)));
    two.push_back(with_boxes(2, "two-" + std::to_string(i)));
  }
  const auto kept_ids = [&](const std::vector<SampleRecord>& xs) {
    std::set<std::string> ids;
    const auto v = stage2_downsample(xs, cfg);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (v[i].kept()) {
        ids.insert(xs[i].id);
      } else {
        EXPECT_EQ(v[i].reasons, std::vector<FilterReason>{FilterReason::kDownsampled});
      }
    }
    return ids;
  };
  const auto k1 = kept_ids(one);
  const auto k2 = kept_ids(two);
  EXPECT_NEAR(k1.size() / 10000.0, 0.40, 0.02);
  EXPECT_NEAR(k2.size() / 10000.0, 0.60, 0.02);

  auto shuffled = one;
  SplitMix64 rng(5);
  for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
  EXPECT_EQ(kept_ids(shuffled), k1);
  EXPECT_EQ(kept_ids(one), k1);

  cfg.seed = 100;
  EXPECT_NE(kept_ids(one), k1);
}

TEST(Stage3, MockAuditorExamples) {
  MockVlmAuditor mock;
  auto s = good_sample();
  const auto spans = extract_spans(s.prompt);
  s.grounded_spans = grounded_spans_from_alignment(align(s), spans, s.ocr_words, s.width, s.height);
  EXPECT_TRUE(stage3_semantic_audit(s, mock).kept());

  auto ungrounded = s;
  ungrounded.prompt += R"( and "CLOSED")";
  EXPECT_EQ(stage3_semantic_audit(ungrounded, mock).reasons, std::vector<FilterReason>{FilterReason::kAuditSpanUngrounded});

  auto incoherent = s;
  incoherent.grounded_spans[0].box = NormBox(0, 0, 100, 100);
  EXPECT_EQ(stage3_semantic_audit(incoherent, mock).reasons, std::vector<FilterReason>{FilterReason::kAuditIncoherent});
}

TEST(Stage3, RetriesThenRaisesDistinguishedError) {
  const auto s = good_sample();
  CountingFailClient failing;
  EXPECT_THROW(stage3_semantic_audit(s, failing, {3, {}}), AuditUnavailable);
  EXPECT_EQ(failing.calls.load(), 3);

  FlakyClient flaky;
  EXPECT_NO_THROW(stage3_semantic_audit(s, flaky, {3, {}}));
  EXPECT_EQ(flaky.calls, 3);

  WrongSizeClient wrong;
  EXPECT_THROW(stage3_semantic_audit(s, wrong, {2, {}}), AuditUnavailable);
}
