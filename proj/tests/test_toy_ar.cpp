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

#include <cmath>
#include <numeric>
#include <vector>

#include "textground/error.hpp"
#include "textground/hashing.hpp"
#include "textground/toy_ar.hpp"

using namespace textground;

namespace {

ToyConfig random_init() {
  ToyConfig cfg;
  cfg.projection_init_scale = 0.3;
  cfg.seed = 5;
  return cfg;
}

double central_difference(ToyModel& model, const ToyExample& ex, double alpha, std::size_t i, double h) {
  auto p = model.parameters();
  const double saved = p[i];
  p[i] = saved + h;
  const double up = forward_nll(model, ex, alpha).total;
  p[i] = saved - h;
  const double down = forward_nll(model, ex, alpha).total;
  p[i] = saved;
  return (up - down) / (2 * h);
}

}  // namespace

TEST(ToyModel, UniformInitGivesLogVPerToken) {
  const auto task = make_glyph_task(1, 8);
  const ToyModel model(task.vocab.size(), {});
  for (const auto& ex : task.examples) {
    const auto l = forward_nll(model, ex, 1.0);
    const double expected = static_cast<double>(ex.target.tokens.size()) * std::log(model.vocab_size());
    EXPECT_NEAR(l.total, expected, 1e-6);
  }
}

TEST(ToyModel, SoftmaxNormalizedAtEveryPosition) {
  const auto task = make_glyph_task(2, 6);
  const ToyModel model(task.vocab.size(), random_init());
  for (const auto& ex : task.examples) {
    for (const auto& dist : target_distributions(model, ex)) {
      EXPECT_NEAR(std::accumulate(dist.begin(), dist.end(), 0.0), 1.0, 1e-9);
    }
  }
  const std::vector<TokenId> history{model.bos(), 0, 1};
  const auto d = model.next_token_distribution(history);
  EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-9);
  EXPECT_THROW(model.next_token_distribution(std::vector<TokenId>{0}), UsageError);
}

TEST(ForwardNll, AlphaFormula) {
  const auto task = make_glyph_task(3, 4);
  const ToyModel model(task.vocab.size(), random_init());
  for (const auto& ex : task.examples) {
    const auto zero = forward_nll(model, ex, 0.0);
    EXPECT_EQ(zero.total, zero.l_img);
    const auto one = forward_nll(model, ex, 1.0);
    EXPECT_EQ(one.total, one.l_img + one.l_text);
    const auto half = forward_nll(model, ex, 0.5);
    EXPECT_EQ(half.total, half.l_img + 0.5 * half.l_text);
    EXPECT_GT(one.l_img, 0.0);
    EXPECT_GT(one.l_text, 0.0);
  }
}

TEST(ForwardNll, AdditiveOverDisjointMasks) {
  const auto task = make_glyph_task(4, 5);
  const ToyModel model(task.vocab.size(), random_init());
  for (const auto& ex : task.examples) {
    const auto dists = target_distributions(model, ex);
    double single = 0.0;
    for (std::size_t t = 0; t < ex.target.tokens.size(); ++t) single -= std::log(dists[t][ex.target.tokens[t]]);
    EXPECT_NEAR(forward_nll(model, ex, 1.0).total, single, 1e-9);
  }
}

TEST(ForwardNll, RejectsOutOfVocabularyTokens) {
  const auto task = make_glyph_task(5, 1);
  const ToyModel model(task.vocab.size(), {});
  auto ex = task.examples[0];
  ex.target.tokens[0] = model.vocab_size();
  EXPECT_THROW(forward_nll(model, ex, 1.0), TokenOutOfRange);
}

TEST(Backward, MatchesCentralDifferences) {
  SplitMix64 rng(71);
  for (const auto variant : {TargetVariant::kTextAndBBox, TargetVariant::kTextOnly, TargetVariant::kBBoxOnly}) {
    for (const auto order : {TargetOrder::kPostImage, TargetOrder::kPreImage}) {
      const auto task = make_glyph_task(6, 2, {variant, order, 1.0});
      ToyModel model(task.vocab.size(), random_init());
      const auto& ex = task.examples[0];
      const double alpha = 0.7;
      const auto g = backward(model, ex, alpha);
      EXPECT_DOUBLE_EQ(g.loss.total, forward_nll(model, ex, alpha).total);
      int checked = 0;
      double worst = 0.0;
      while (checked < 50) {
        const auto i = rng.below(g.values.size());
        const double a = g.values[i];
        if (std::abs(a) < 1e-4) continue;
        const double n = central_difference(model, ex, alpha, i, 1e-5);
        worst = std::max(worst, std::abs(a - n) / std::max(std::abs(a), std::abs(n)));
        ++checked;
      }
      EXPECT_LE(worst, 1e-4);
    }
  }
}

TEST(Backward, LinearInAlpha) {
  const auto task = make_glyph_task(7, 2);
  const ToyModel model(task.vocab.size(), random_init());
  const auto& ex = task.examples[0];
  const auto g0 = backward(model, ex, 0.0);
  const auto g1 = backward(model, ex, 1.0);
  const auto g2 = backward(model, ex, 2.0);
  for (std::size_t i = 0; i < g0.values.size(); ++i) {
    const double text1 = g1.values[i] - g0.values[i];
    const double text2 = g2.values[i] - g0.values[i];
    EXPECT_NEAR(text2, 2.0 * text1, 1e-9 * (1.0 + std::abs(text1)));
  }
}

TEST(Backward, EmptyTextSegmentContributesNothing) {
  const auto task = make_glyph_task(8, 1);
  const ToyModel model(task.vocab.size(), random_init());
  auto ex = task.examples[0];
  // Keep only image positions supervised.
  for (std::size_t t = 0; t < ex.target.tokens.size(); ++t) ex.target.text_mask[t] = false;
  const auto a = backward(model, ex, 1.0);
  const auto b = backward(model, ex, 5.0);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.loss.l_text, 0.0);
}

TEST(GlyphTask, DeterministicAndParsable) {
  const auto a = make_glyph_task(9, 20);
  const auto b = make_glyph_task(9, 20);
  ASSERT_EQ(a.examples.size(), 20u);
  for (std::size_t i = 0; i < a.examples.size(); ++i) {
    EXPECT_EQ(a.examples[i].target, b.examples[i].target);
    EXPECT_EQ(a.examples[i].prompt, b.examples[i].prompt);
    const auto parsed = parse_target(a.examples[i].target, a.vocab);
    EXPECT_EQ(parsed.image_tokens.size(), static_cast<std::size_t>(kGlyphGrid * kGlyphGrid));
    EXPECT_GE(parsed.spans.size(), 1u);
    for (const auto& s : parsed.spans) {
      ASSERT_TRUE(s.box);
      EXPECT_EQ(s.box->x_max() - s.box->x_min(), 128);
      EXPECT_EQ(s.text.size(), 1u);
    }
  }
  EXPECT_TRUE(make_glyph_task(9, 0).examples.empty());
  EXPECT_NE(make_glyph_task(10, 20).examples[0].target, a.examples[0].target);
}

TEST(Train, PostImageImageDistributionsIgnoreSupervisionTokens) {
  const ToyModel model(make_glyph_task(11, 1).vocab.size(), random_init());
  const auto with = make_glyph_task(11, 5, {TargetVariant::kTextAndBBox, TargetOrder::kPostImage, 1.0});
  for (const auto& ex : with.examples) {
    const auto parsed = parse_target(ex.target, with.vocab);
    ToyExample plain{ex.prompt, build_target(parsed.image_tokens, {}, {}, with.vocab)};
    const auto d_with = target_distributions(model, ex);
    const auto d_plain = target_distributions(model, plain);
    for (std::size_t t = 0; t < parsed.image_tokens.size(); ++t) EXPECT_EQ(d_with[t], d_plain[t]);
  }
}

TEST(Train, TextOnlyTextLossCoversOnlyTextPositions) {
  const auto task = make_glyph_task(12, 4, {TargetVariant::kTextOnly, TargetOrder::kPostImage, 1.0});
  for (const auto& ex : task.examples) {
    for (std::size_t t = 0; t < ex.target.tokens.size(); ++t) {
      EXPECT_EQ(ex.target.text_mask[t], !task.vocab.is_image(ex.target.tokens[t]));
      EXPECT_FALSE(task.vocab.coord_of(ex.target.tokens[t]).has_value());
    }
  }
}

TEST(Train, ReducesLossAndIsDeterministic) {
  const BuildConfig build;
  const auto task = make_glyph_task(1, 64, build);
  ToyConfig cfg;
  ToyModel a(task.vocab.size(), cfg), b(task.vocab.size(), cfg);
  const auto ra = train(a, task.examples, 200, build, cfg);
  const auto rb = train(b, task.examples, 200, build, cfg);
  ASSERT_EQ(ra.curve.size(), 200u);
  for (std::size_t i = 0; i < ra.curve.size(); ++i) {
    EXPECT_EQ(ra.curve[i].total, rb.curve[i].total);
    EXPECT_EQ(ra.curve[i].l_img, rb.curve[i].l_img);
  }
  EXPECT_LT(ra.final.total, 0.6 * ra.initial.total);
  EXPECT_THROW(train(a, std::span<const ToyExample>{}, 1, build, cfg), UsageError);
}

TEST(Train, FullBatchStepIgnoresDatasetOrder) {
  const BuildConfig build;
  auto data = make_glyph_task(13, 12, build).examples;
  ToyConfig cfg = random_init();
  cfg.batch_size = 0;
  const auto vocab = make_glyph_task(13, 1).vocab.size();
  ToyModel a(vocab, cfg), b(vocab, cfg);
  train(a, data, 1, build, cfg);
  std::reverse(data.begin(), data.end());
  train(b, data, 1, build, cfg);
  for (std::size_t i = 0; i < a.parameters().size(); ++i) EXPECT_NEAR(a.parameters()[i], b.parameters()[i], 1e-12);
  EXPECT_NEAR(dataset_loss(a, data, 1.0).total, dataset_loss(b, data, 1.0).total, 1e-9);
}

TEST(Train, DivergenceIsReported) {
  const BuildConfig build;
  const auto task = make_glyph_task(14, 16, build);
  ToyConfig cfg;
  cfg.learning_rate = 50.0;
  ToyModel model(task.vocab.size(), cfg);
  EXPECT_THROW(train(model, task.examples, 500, build, cfg), TrainingDiverged);
}
