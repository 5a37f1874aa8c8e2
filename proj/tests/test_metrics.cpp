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

#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "textground/aligner.hpp"
#include "textground/error.hpp"
#include "textground/metrics.hpp"
#include "textground/mock_ocr.hpp"
#include "textground/synth.hpp"
#include "textground/target.hpp"
#include "textground/pipeline.hpp"

using namespace textground;

namespace {

using Words = std::vector<std::string>;

HypothesisOcr hyp_of(const std::vector<std::pair<std::string, PixelBox>>& entries) {
  HypothesisOcr h;
  for (const auto& [t, b] : entries) h.words.push_back({t, b, 0.9});
  return h;
}

HypothesisOcr line(const Words& texts, double y = 0) {
  HypothesisOcr h;
  for (std::size_t i = 0; i < texts.size(); ++i) h.words.push_back({texts[i], PixelBox(60.0 * i, y, 60.0 * i + 50, y + 30), 0.9});
  return h;
}

class FixedScorer : public ClipScoreClient {
 public:
  double score(const std::string&, const std::string&) override { return 0.25; }
};

}  // namespace

TEST(WordMatch, Examples) {
  EXPECT_EQ(word_match(Words{"open"}, Words{"open"}).size(), 1u);
  EXPECT_EQ(word_match(Words{"sale", "sale"}, Words{"sale"}).size(), 1u);
  EXPECT_EQ(word_match(Words{"open"}, Words{"0pen"}).size(), 0u);
}

TEST(WordMatch, PairCountEqualsMultisetIntersection) {
  SplitMix64 rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    Words refs(rng.below(8)), hyps(rng.below(8));
    for (auto& w : refs) w = oracle::random_word(rng, "ab", 1, 2);
    for (auto& w : hyps) w = oracle::random_word(rng, "ab", 1, 2);
    std::map<std::string, int> cr, ch;
    for (const auto& w : refs) ++cr[w];
    for (const auto& w : hyps) ++ch[w];
    std::size_t expected = 0;
    for (const auto& [w, n] : cr) expected += std::min(n, ch[w]);
    const auto pairs = word_match(refs, hyps);
    EXPECT_EQ(pairs.size(), expected);
    std::set<std::size_t> used_r, used_h;
    for (const auto& p : pairs) {
      EXPECT_EQ(refs[p.ref], hyps[p.hyp]);
      EXPECT_TRUE(used_r.insert(p.ref).second);
      EXPECT_TRUE(used_h.insert(p.hyp).second);
    }
  }
}

TEST(AccuracyF1, Examples) {
  auto r = accuracy_f1(Words{"a", "b", "c"}, Words{"a", "b", "c"});
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.f1, 1.0);

  r = accuracy_f1(Words{"a", "b", "c", "d"}, Words{"a", "b", "x", "y"});
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);

  r = accuracy_f1(Words{"a"}, Words{});
  EXPECT_DOUBLE_EQ(r.accuracy, 0.0);
  EXPECT_DOUBLE_EQ(r.f1, 0.0);
}

TEST(AccuracyF1, EmptyReferenceConventions) {
  EXPECT_DOUBLE_EQ(accuracy_f1(Words{}, Words{}).accuracy, 1.0);
  EXPECT_DOUBLE_EQ(accuracy_f1(Words{}, Words{}).f1, 1.0);
  EXPECT_DOUBLE_EQ(accuracy_f1(Words{}, Words{"x"}).accuracy, 0.0);
  EXPECT_DOUBLE_EQ(accuracy_f1(Words{}, Words{"x"}).f1, 0.0);
}

TEST(AccuracyF1, Properties) {
  SplitMix64 rng(52);
  for (int trial = 0; trial < 1000; ++trial) {
    Words refs(1 + rng.below(6)), hyps(rng.below(6));
    for (auto& w : refs) w = oracle::random_word(rng, "abc", 1, 2);
    for (auto& w : hyps) w = oracle::random_word(rng, "abc", 1, 2);
    const auto r = accuracy_f1(refs, hyps);
    EXPECT_LE(r.f1, 1.0);
    EXPECT_EQ(r.f1 == 0.0, r.pairs == 0);
    EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(r.pairs) / refs.size());  // recall
  }
}

TEST(Cer, Examples) {
  EXPECT_DOUBLE_EQ(cer(Words{"open"}, Words{"open"}), 0.0);
  EXPECT_DOUBLE_EQ(cer(Words{"open"}, Words{"0pen"}), 0.25);
  EXPECT_DOUBLE_EQ(cer(Words{"open"}, Words{}), 1.0);
  EXPECT_DOUBLE_EQ(cer(Words{"ab"}, Words{"ab", "cdefgh"}), 7.0 / 2.0);  // unclamped
  EXPECT_DOUBLE_EQ(cer(Words{}, Words{"ab"}), 2.0);
}

TEST(Cer, ZeroIffNormalizedConcatenationsEqual) {
  SplitMix64 rng(53);
  for (int trial = 0; trial < 1000; ++trial) {
    Words refs(rng.below(4)), hyps(rng.below(4));
    for (auto& w : refs) w = oracle::random_word(rng, "aA!", 1, 2);
    for (auto& w : hyps) w = oracle::random_word(rng, "aA!", 1, 2);
    std::vector<std::string> rn, hn;
    for (const auto& w : refs) if (auto n = normalize_text(w); !n.empty()) rn.push_back(n);
    for (const auto& w : hyps) if (auto n = normalize_text(w); !n.empty()) hn.push_back(n);
    EXPECT_EQ(cer(refs, hyps) == 0.0, join(rn, " ") == join(hn, " "));
    EXPECT_GE(cer(refs, hyps), 0.0);
  }
}

TEST(LayoutIou, Examples) {
  const std::vector<GroundedSpan> refs{{"open", NormBox(0, 0, 100, 100), {0}}};
  EXPECT_DOUBLE_EQ(layout_iou(refs, hyp_of({{"open", PixelBox(0, 0, 100, 100)}}), 512, 512), 1.0);
  EXPECT_DOUBLE_EQ(layout_iou(refs, HypothesisOcr{}, 512, 512), 0.0);
  EXPECT_DOUBLE_EQ(layout_iou(refs, hyp_of({{"open", PixelBox(0, 0, 100, 100)}, {"open", PixelBox(200, 200, 300, 300)}}), 512, 512),
                   1.0);
  // Wrong text in the right place scores nothing.
  EXPECT_DOUBLE_EQ(layout_iou(refs, hyp_of({{"shut", PixelBox(0, 0, 100, 100)}}), 512, 512), 0.0);
  // Half the refs matched perfectly.
  const std::vector<GroundedSpan> two{{"open", NormBox(0, 0, 100, 100), {0}}, {"exit", NormBox(0, 200, 100, 300), {1}}};
  EXPECT_DOUBLE_EQ(layout_iou(two, hyp_of({{"open", PixelBox(0, 0, 100, 100)}}), 512, 512), 0.5);
  // Boxes are compared in the normalized grid.
  EXPECT_DOUBLE_EQ(layout_iou(refs, hyp_of({{"open", PixelBox(0, 0, 200, 200)}}), 1024, 1024), 1.0);
  // A multi-word span matches a run of hypothesis words.
  const std::vector<GroundedSpan> multi{{"grand opening", NormBox(0, 0, 200, 40), {0, 1}}};
  EXPECT_DOUBLE_EQ(layout_iou(multi, hyp_of({{"GRAND", PixelBox(0, 0, 90, 40)}, {"OPENING", PixelBox(100, 0, 200, 40)}}), 512, 512),
                   1.0);
}

TEST(LayoutIou, SpuriousFarHypothesesAreFree) {
  SplitMix64 rng(54);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<GroundedSpan> refs;
    HypothesisOcr hyp;
    const auto n = 1 + rng.below(4);
    for (std::size_t i = 0; i < n; ++i) {
      const int x = 50 * static_cast<int>(i), y = static_cast<int>(rng.below(100));
      const auto text = oracle::random_word(rng, "abc", 3, 5);
      refs.push_back({text, NormBox(x, y, x + 40, y + 20), {i}});
      if (rng.below(3)) hyp.words.push_back({text, PixelBox(x + rng.below(10), y, x + 40, y + 20), 0.9});
    }
    const double base = layout_iou(refs, hyp, 512, 512);
    auto extra = hyp;
    extra.words.push_back({"zzzzzzz", PixelBox(400, 400 + rng.below(50), 500, 500), 0.9});
    EXPECT_DOUBLE_EQ(layout_iou(refs, extra, 512, 512), base);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 1.0);
  }
}

TEST(LayoutIou, GreedyAgainstExhaustiveAssignment) {
  // Texts chosen so that only single-word windows pass the text gate.
  SplitMix64 rng(55);
  double gap_sum = 0.0;
  int instances = 0, differing = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n_ref = 1 + rng.below(4), n_hyp = 1 + rng.below(4);
    const std::vector<std::string> vocab{"aaaa", "bbbb"};
    std::vector<GroundedSpan> refs;
    HypothesisOcr hyp;
    for (std::size_t i = 0; i < n_ref; ++i) {
      const int x = static_cast<int>(rng.below(40)), y = static_cast<int>(rng.below(40));
      refs.push_back({vocab[rng.below(2)], NormBox(x, y, x + 10 + rng.below(30), y + 10 + rng.below(30)), {i}});
    }
    for (std::size_t i = 0; i < n_hyp; ++i) {
      const int x = static_cast<int>(rng.below(40)), y = static_cast<int>(rng.below(40));
      hyp.words.push_back({vocab[rng.below(2)], PixelBox(x, y, x + 10 + rng.below(30), y + 10 + rng.below(30)), 0.9});
    }
    std::vector<std::vector<double>> iou(n_ref, std::vector<double>(n_hyp));
    std::vector<std::vector<bool>> allowed(n_ref, std::vector<bool>(n_hyp));
    for (std::size_t r = 0; r < n_ref; ++r) {
      for (std::size_t h = 0; h < n_hyp; ++h) {
        const auto& b = hyp.words[h].box;
        iou[r][h] = box_iou(refs[r].box, NormBox(int(b.x_min()), int(b.y_min()), int(b.x_max()), int(b.y_max())));
        allowed[r][h] = refs[r].text == hyp.words[h].text;
      }
    }
    const double best = oracle::best_assignment(iou, allowed) / static_cast<double>(n_ref);
    const double greedy = layout_iou(refs, hyp, 512, 512);
    ASSERT_LE(greedy, best + 1e-12);
    gap_sum += best - greedy;
    differing += best - greedy > 1e-12;
    ++instances;
  }
  const double mean_gap = gap_sum / instances;
  RecordProperty("mean_gap", std::to_string(mean_gap));
  RecordProperty("differing_instances", differing);
  std::printf("greedy vs optimal: mean gap %.6f over %d instances, %d differ\n", mean_gap, instances, differing);
  EXPECT_LE(mean_gap, 0.1);
}

TEST(PromptCoverage, Examples) {
  auto r = prompt_coverage(Words{"OPEN", "EXIT"}, line({"OPEN", "EXIT"}));
  EXPECT_EQ(r.pc(), 1.0);
  r = prompt_coverage(Words{"OPEN", "EXIT"}, line({"OPEN"}));
  EXPECT_EQ(r.pc(), 0.5);
  EXPECT_EQ(r.matched_flags, (std::vector<bool>{true, false}));
  r = prompt_coverage(Words{"SUMMER"}, line({"SUMER"}));
  EXPECT_EQ(r.pc(), 1.0);
  r = prompt_coverage(Words{"OPEN"}, line({"SHUT"}));
  EXPECT_EQ(r.pc(), 0.0);
  EXPECT_FALSE(prompt_coverage(Words{}, line({"x"})).pc().has_value());
  // Multi-word spans match across a run of words.
  EXPECT_EQ(prompt_coverage(Words{"grand opening today"}, line({"GRAND", "OPENING", "TODAY"})).pc(), 1.0);
}

TEST(PromptCoverage, Monotonicity) {
  SplitMix64 rng(56);
  for (int trial = 0; trial < 1000; ++trial) {
    Words spans(1 + rng.below(4));
    for (auto& s : spans) s = oracle::random_word(rng, "abc", 2, 5);
    Words texts(rng.below(6));
    for (auto& t : texts) t = oracle::random_word(rng, "abc", 2, 5);
    const auto hyp = line(texts);
    const auto base = prompt_coverage(spans, hyp);
    EXPECT_LE(base.matched_spans, base.total_spans);

    // A word appended after every other word in reading order.
    auto more = hyp;
    more.words.push_back({oracle::random_word(rng, "abc", 2, 5), PixelBox(0, 100, 50, 130), 0.9});
    EXPECT_GE(*prompt_coverage(spans, more).pc(), *base.pc());

    // Dropping a reference span leaves every other span's verdict unchanged.
    if (spans.size() > 1) {
      const auto k = rng.below(spans.size());
      auto fewer = spans;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
      auto flags = base.matched_flags;
      flags.erase(flags.begin() + static_cast<std::ptrdiff_t>(k));
      EXPECT_EQ(prompt_coverage(fewer, hyp).matched_flags, flags);
    }
  }
}

TEST(ScoreSample, GroundTruthHypothesisScoresPerfectly) {
  auto corpus = synth_corpus(5, 50, {true});
  for (auto& s : corpus) {
    annotate(s, {});
    const auto m = score_sample(s, mock_ocr(s, {}, 0));
    EXPECT_DOUBLE_EQ(m.acc, 1.0) << s.id;
    EXPECT_DOUBLE_EQ(m.f1, 1.0) << s.id;
    EXPECT_DOUBLE_EQ(m.cer, 0.0) << s.id;
    EXPECT_DOUBLE_EQ(m.layout_iou, 1.0) << s.id;
    EXPECT_EQ(m.pc, 1.0) << s.id;
  }
}

TEST(Evaluate, AggregatesPerLevel) {
  auto corpus = synth_corpus(6, 120, {true});
  for (auto& s : corpus) annotate(s, {});
  const auto bench = build_bench(corpus, 10, 1);
  std::map<std::string, HypothesisOcr> perfect, empty;
  for (const auto& s : corpus) {
    perfect[s.id] = mock_ocr(s, {}, 0);
    empty[s.id] = {};
  }
  const auto good = evaluate(bench, corpus, perfect, {nullptr, 4});
  for (auto d : kAllDifficulties) {
    const auto& l = good.levels.at(d);
    EXPECT_EQ(l.samples, bench.count(d));
    if (l.samples == 0) continue;
    EXPECT_DOUBLE_EQ(l.acc, 1.0);
    EXPECT_DOUBLE_EQ(l.f1, 1.0);
    EXPECT_DOUBLE_EQ(l.cer, 0.0);
    EXPECT_DOUBLE_EQ(l.layout_iou, 1.0);
    EXPECT_EQ(l.pc, 1.0);
    EXPECT_FALSE(l.cs.has_value());
  }
  EXPECT_FALSE(good.flagged);

  const auto bad = evaluate(bench, corpus, empty);
  EXPECT_DOUBLE_EQ(bad.overall.acc, 0.0);
  EXPECT_DOUBLE_EQ(bad.overall.f1, 0.0);
  EXPECT_DOUBLE_EQ(bad.overall.layout_iou, 0.0);
  EXPECT_EQ(bad.overall.pc, 0.0);
  EXPECT_DOUBLE_EQ(bad.overall.cer, 1.0);

  // Single-sample level equals that sample, and a scorer fills CS.
  BenchManifest one;
  one.levels[Difficulty::kEasy] = {bench.levels.at(Difficulty::kEasy).front()};
  FixedScorer scorer;
  const auto single = evaluate(one, corpus, empty, {&scorer, 1});
  ASSERT_EQ(single.samples.size(), 1u);
  EXPECT_DOUBLE_EQ(single.levels.at(Difficulty::kEasy).cer, single.samples[0].cer);
  EXPECT_EQ(single.levels.at(Difficulty::kEasy).cs, 0.25);

  // Missing hypotheses are listed and flag the run.
  std::map<std::string, HypothesisOcr> partial = perfect;
  partial.erase(one.levels[Difficulty::kEasy][0]);
  const auto flagged = evaluate(one, corpus, partial);
  EXPECT_TRUE(flagged.flagged);
  EXPECT_EQ(flagged.missing, one.levels[Difficulty::kEasy]);
  EXPECT_EQ(flagged.overall.samples, 0u);

  BenchManifest unknown;
  unknown.levels[Difficulty::kHard] = {"no-such-id"};
  EXPECT_THROW(evaluate(unknown, corpus, perfect), DataError);
}

TEST(Evaluate, WorkerCountDoesNotChangeResults) {
  auto corpus = synth_corpus(7, 200, {});
  for (auto& s : corpus) annotate(s, {});
  const auto bench = build_bench(corpus, 50, 3);
  std::map<std::string, HypothesisOcr> hyps;
  for (const auto& s : corpus) hyps[s.id] = mock_ocr(s, {0.1, 4.0}, 9);
  const auto a = format_report_table(evaluate(bench, corpus, hyps, {nullptr, 1}));
  const auto b = format_report_table(evaluate(bench, corpus, hyps, {nullptr, 8}));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("scaled x100"), std::string::npos);
}

TEST(LayoutIou, SpansLongerThanTheDefaultWindowStayMatchable) {
  const Words texts{"NIGHT", "STREET", "HOTEL", "PHARMACY", "GRAND", "PHARMACY", "STOP"};
  HypothesisOcr hyp;
  std::vector<PixelBox> boxes;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    boxes.emplace_back(10.0 + 60.0 * i, 100, 60.0 + 60.0 * i, 140);
    hyp.words.push_back({texts[i], boxes.back(), 0.9});
  }
  const std::string joined = "NIGHT STREET HOTEL PHARMACY GRAND PHARMACY STOP";
  ASSERT_GT(texts.size(), kMaxHypWindow);
  const std::vector<GroundedSpan> refs{{joined, quantize_box(box_union(boxes), 512, 512), {0, 1, 2, 3, 4, 5, 6}}};
  EXPECT_DOUBLE_EQ(layout_iou(refs, hyp, 512, 512), 1.0);
  const Words spans{joined};
  EXPECT_EQ(prompt_coverage(spans, hyp).pc(), 1.0);
}

TEST(Cer, SpanAndWordGranularityAgree) {
  EXPECT_DOUBLE_EQ(cer(Words{"50% BOOKS"}, Words{"50%", "BOOKS"}), 0.0);
  EXPECT_DOUBLE_EQ(cer(Words{"\"SALE!\" today"}, Words{"sale", "TODAY"}), 0.0);
}
