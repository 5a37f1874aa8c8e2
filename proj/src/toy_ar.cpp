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

#include "textground/toy_ar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "textground/hashing.hpp"

namespace textground {

ToyModel::ToyModel(int target_vocab_size, const ToyConfig& cfg)
    : vocab_(target_vocab_size + 1), dim_(cfg.embed_dim), context_(cfg.context) {
  if (target_vocab_size < 1 || dim_ < 1 || context_ < 1) {
    throw UsageError("toy model needs positive vocab, dim and context");
  }
  params_.resize(2 * static_cast<std::size_t>(vocab_) * dim_);
  SplitMix64 rng(mix64(cfg.seed));
  for (std::size_t i = 0; i < embedding_size(); ++i) params_[i] = cfg.embedding_init_scale * rng.normal();
  for (std::size_t i = embedding_size(); i < params_.size(); ++i) {
    params_[i] = cfg.projection_init_scale == 0.0 ? 0.0 : cfg.projection_init_scale * rng.normal();
  }
}

namespace {

// Stream positions: stream[0] = BOS, then prompt, then target. Target position t
// sits at stream index offset + t and is predicted from the tokens before it.
struct Stream {
  std::vector<TokenId> tokens;
  std::size_t offset = 0;
};

Stream make_stream(const ToyModel& model, const ToyExample& ex) {
  Stream s;
  s.tokens.reserve(1 + ex.prompt.size() + ex.target.tokens.size());
  s.tokens.push_back(model.bos());
  s.tokens.insert(s.tokens.end(), ex.prompt.begin(), ex.prompt.end());
  s.offset = s.tokens.size();
  s.tokens.insert(s.tokens.end(), ex.target.tokens.begin(), ex.target.tokens.end());
  for (auto t : s.tokens) {
    if (t < 0 || t >= model.vocab_size()) {
      throw TokenOutOfRange("token " + std::to_string(t) + " outside vocabulary of " +
                            std::to_string(model.vocab_size()));
    }
  }
  return s;
}

// Mean context embedding for predicting stream[pos].
std::size_t context_start(const ToyModel& model, std::size_t pos) {
  const auto c = static_cast<std::size_t>(model.context());
  return pos > c ? pos - c : 0;
}

void hidden_state(const ToyModel& model, std::span<const TokenId> stream, std::size_t pos,
                  std::vector<double>& h) {
  h.assign(model.dim(), 0.0);
  const std::size_t begin = context_start(model, pos);
  for (std::size_t j = begin; j < pos; ++j) {
    for (int k = 0; k < model.dim(); ++k) h[k] += model.embedding(stream[j], k);
  }
  const double inv = 1.0 / static_cast<double>(pos - begin);
  for (auto& v : h) v *= inv;
}

// Log-softmax of h . W, written into logp.
void log_probs(const ToyModel& model, const std::vector<double>& h, std::vector<double>& logp) {
  const int V = model.vocab_size();
  logp.assign(V, 0.0);
  for (int k = 0; k < model.dim(); ++k) {
    const double hk = h[k];
    if (hk == 0.0) continue;
    for (int v = 0; v < V; ++v) logp[v] += hk * model.projection(k, v);
  }
  const double mx = *std::max_element(logp.begin(), logp.end());
  double sum = 0.0;
  for (double l : logp) sum += std::exp(l - mx);
  const double lse = mx + std::log(sum);
  for (auto& l : logp) l -= lse;
}

double position_weight(const TargetSequence& target, std::size_t t, double alpha) {
  if (target.img_mask[t]) return 1.0;
  if (target.text_mask[t]) return alpha;
  return 0.0;
}

void check_masks(const TargetSequence& target) {
  if (target.img_mask.size() != target.tokens.size() || target.text_mask.size() != target.tokens.size()) {
    throw UsageError("target masks do not match the token count");
  }
}

}  // namespace

std::vector<double> ToyModel::next_token_distribution(std::span<const TokenId> history) const {
  if (history.empty() || history.front() != bos()) throw UsageError("history must start with BOS");
  std::vector<double> h, logp;
  hidden_state(*this, history, history.size(), h);
  log_probs(*this, h, logp);
  for (auto& l : logp) l = std::exp(l);
  return logp;
}

SegmentedLoss forward_nll(const ToyModel& model, const ToyExample& example, double alpha) {
  check_masks(example.target);
  const auto stream = make_stream(model, example);
  SegmentedLoss loss;
  loss.alpha = alpha;
  std::vector<double> h, logp;
  for (std::size_t t = 0; t < example.target.tokens.size(); ++t) {
    const std::size_t pos = stream.offset + t;
    if (!example.target.img_mask[t] && !example.target.text_mask[t]) continue;
    hidden_state(model, stream.tokens, pos, h);
    log_probs(model, h, logp);
    const double nll = -logp[stream.tokens[pos]];
    if (example.target.img_mask[t]) {
      loss.l_img += nll;
    } else {
      loss.l_text += nll;
    }
  }
  loss.total = loss.l_img + alpha * loss.l_text;
  return loss;
}

std::vector<std::vector<double>> target_distributions(const ToyModel& model, const ToyExample& example) {
  const auto stream = make_stream(model, example);
  std::vector<std::vector<double>> out;
  std::vector<double> h, logp;
  for (std::size_t t = 0; t < example.target.tokens.size(); ++t) {
    hidden_state(model, stream.tokens, stream.offset + t, h);
    log_probs(model, h, logp);
    for (auto& l : logp) l = std::exp(l);
    out.push_back(logp);
  }
  return out;
}

Gradient backward(const ToyModel& model, const ToyExample& example, double alpha) {
  check_masks(example.target);
  const auto stream = make_stream(model, example);
  const int V = model.vocab_size();
  const int D = model.dim();
  const std::size_t e_size = model.embedding_size();

  Gradient g;
  g.loss.alpha = alpha;
  g.values.assign(model.parameters().size(), 0.0);
  std::vector<double> h, logp, dh(D);
  for (std::size_t t = 0; t < example.target.tokens.size(); ++t) {
    const double w = position_weight(example.target, t, alpha);
    if (!example.target.img_mask[t] && !example.target.text_mask[t]) continue;
    const std::size_t pos = stream.offset + t;
    const TokenId y = stream.tokens[pos];
    hidden_state(model, stream.tokens, pos, h);
    log_probs(model, h, logp);
    const double nll = -logp[y];
    (example.target.img_mask[t] ? g.loss.l_img : g.loss.l_text) += nll;
    if (w == 0.0) continue;

    // d(w * nll)/dlogit_v = w * (p_v - [v == y])
    std::fill(dh.begin(), dh.end(), 0.0);
    for (int v = 0; v < V; ++v) {
      const double dz = w * (std::exp(logp[v]) - (v == y ? 1.0 : 0.0));
      for (int k = 0; k < D; ++k) {
        g.values[e_size + static_cast<std::size_t>(k) * V + v] += h[k] * dz;
        dh[k] += model.projection(k, v) * dz;
      }
    }
    const std::size_t begin = context_start(model, pos);
    const double inv = 1.0 / static_cast<double>(pos - begin);
    for (std::size_t j = begin; j < pos; ++j) {
      const auto row = static_cast<std::size_t>(stream.tokens[j]) * D;
      for (int k = 0; k < D; ++k) g.values[row + k] += dh[k] * inv;
    }
  }
  g.loss.total = g.loss.l_img + alpha * g.loss.l_text;
  return g;
}

GlyphTask make_glyph_task(std::uint64_t seed, std::size_t n_samples, const BuildConfig& cfg) {
  constexpr int kGlyphs = 8;
  constexpr int kCell = kGlyphImageSize / kGlyphGrid;
  std::u32string letters;
  for (int g = 0; g < kGlyphs; ++g) letters.push_back(U'A' + g);
  GlyphTask task{VocabLayout(kGlyphs + 1, letters), {}};

  SplitMix64 rng(mix64(seed ^ 0x676c797068ULL));
  for (std::size_t n = 0; n < n_samples; ++n) {
    std::vector<TokenId> image(kGlyphGrid * kGlyphGrid, 0);  // 0 = blank cell
    const auto n_spans = 1 + static_cast<int>(rng.below(3));
    std::vector<int> cells;
    while (static_cast<int>(cells.size()) < n_spans) {
      const int c = static_cast<int>(rng.below(kGlyphGrid * kGlyphGrid));
      if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
    }
    std::vector<GroundedSpan> spans;
    for (int cell : cells) {
      const int glyph = static_cast<int>(rng.below(kGlyphs));
      image[cell] = 1 + glyph;
      const int row = cell / kGlyphGrid, col = cell % kGlyphGrid;
      const PixelBox px(col * kCell, row * kCell, (col + 1) * kCell, (row + 1) * kCell);
      spans.push_back({std::string(1, static_cast<char>('A' + glyph)),
                       quantize_box(px, kGlyphImageSize, kGlyphImageSize),
                       {static_cast<std::size_t>(spans.size())}});
    }
    ToyExample ex;
    ex.target = build_target(image, spans, cfg, task.vocab);
    for (auto i : reading_order(spans, [](const GroundedSpan& s) -> const NormBox& { return s.box; })) {
      ex.prompt.push_back(*task.vocab.char_token(static_cast<char32_t>(spans[i].text[0])));
    }
    task.examples.push_back(std::move(ex));
  }
  return task;
}

SegmentedLoss dataset_loss(const ToyModel& model, std::span<const ToyExample> data, double alpha) {
  SegmentedLoss mean;
  mean.alpha = alpha;
  if (data.empty()) return mean;
  for (const auto& ex : data) {
    const auto l = forward_nll(model, ex, alpha);
    mean.l_img += l.l_img;
    mean.l_text += l.l_text;
  }
  const double n = static_cast<double>(data.size());
  mean.l_img /= n;
  mean.l_text /= n;
  mean.total = mean.l_img + alpha * mean.l_text;
  return mean;
}

TrainResult train(ToyModel& model, std::span<const ToyExample> data, std::size_t steps,
                  const BuildConfig& build, const ToyConfig& cfg) {
  if (data.empty()) throw UsageError("train: dataset is empty");
  TrainResult result;
  result.initial = dataset_loss(model, data, build.alpha);

  SplitMix64 rng(mix64(cfg.seed ^ 0x747261696eULL));
  const bool full_batch = cfg.batch_size == 0 || cfg.batch_size >= data.size();
  const std::size_t batch = full_batch ? data.size() : cfg.batch_size;
  auto params = model.parameters();
  std::vector<double> grad(params.size());

  for (std::size_t step = 0; step < steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    StepLoss sl;
    sl.step = step;
    for (std::size_t b = 0; b < batch; ++b) {
      const auto& ex = full_batch ? data[b] : data[rng.below(data.size())];
      const auto g = backward(model, ex, build.alpha);
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g.values[i];
      sl.l_img += g.loss.l_img;
      sl.l_text += g.loss.l_text;
    }
    const double inv = 1.0 / static_cast<double>(batch);
    sl.l_img *= inv;
    sl.l_text *= inv;
    sl.total = sl.l_img + build.alpha * sl.l_text;
    if (!std::isfinite(sl.total)) {
      std::ostringstream msg;
      msg << "training diverged at step " << step << ": l_img=" << sl.l_img << " l_text=" << sl.l_text
          << " (learning rate " << cfg.learning_rate << ")";
      throw TrainingDiverged(msg.str());
    }
    result.curve.push_back(sl);
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= cfg.learning_rate * inv * grad[i];
  }
  result.final = dataset_loss(model, data, build.alpha);
  return result;
}

}  // namespace textground
