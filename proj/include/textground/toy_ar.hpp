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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "textground/target.hpp"

namespace textground {

struct ToyConfig {
  int embed_dim = 16;
  int context = 4;
  double learning_rate = 0.05;
  std::size_t batch_size = 8;
  double embedding_init_scale = 1.0;
  /// 0 gives a uniform next-token distribution at initialization.
  double projection_init_scale = 0.0;
  std::uint64_t seed = 1;
};

/// Next-token model: the mean embedding of the previous `context` tokens is
/// projected to vocabulary logits and passed through a softmax. The token stream
/// seen by the model is BOS ++ prompt ++ target; BOS is the last vocabulary id.
class ToyModel {
 public:
  ToyModel(int target_vocab_size, const ToyConfig& cfg);

  int vocab_size() const noexcept { return vocab_; }
  int dim() const noexcept { return dim_; }
  int context() const noexcept { return context_; }
  TokenId bos() const noexcept { return vocab_ - 1; }

  /// Embedding (vocab x dim, row-major) followed by projection (dim x vocab).
  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::size_t embedding_size() const noexcept { return static_cast<std::size_t>(vocab_) * dim_; }

  double embedding(int token, int k) const noexcept { return params_[static_cast<std::size_t>(token) * dim_ + k]; }
  double projection(int k, int token) const noexcept {
    return params_[embedding_size() + static_cast<std::size_t>(k) * vocab_ + token];
  }

  /// Next-token distribution after `history` (which must start with BOS).
  std::vector<double> next_token_distribution(std::span<const TokenId> history) const;

 private:
  int vocab_;
  int dim_;
  int context_;
  std::vector<double> params_;
};

struct ToyExample {
  std::vector<TokenId> prompt;
  TargetSequence target;
};

/// Summed negative log-likelihoods over the two masks; total = l_img + alpha * l_text.
struct SegmentedLoss {
  double l_img = 0.0;
  double l_text = 0.0;
  double total = 0.0;
  double alpha = 1.0;
};

/// Raised when a token is outside the model vocabulary.
class TokenOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

SegmentedLoss forward_nll(const ToyModel& model, const ToyExample& example, double alpha);

/// Per-position next-token distributions over the target positions.
std::vector<std::vector<double>> target_distributions(const ToyModel& model, const ToyExample& example);

struct Gradient {
  SegmentedLoss loss;
  std::vector<double> values;  // same layout as ToyModel::parameters()
};

/// Analytic gradient of forward_nll(...).total with respect to every parameter.
Gradient backward(const ToyModel& model, const ToyExample& example, double alpha);

struct GlyphTask {
  VocabLayout vocab;
  std::vector<ToyExample> examples;
};

inline constexpr int kGlyphGrid = 4;
inline constexpr int kGlyphImageSize = 512;

/// Synthetic stand-in for real samples: a 4x4 grid of glyph cells rendered as 16
/// image tokens. One to three cells hold a glyph; each becomes a span whose text is
/// the glyph letter and whose box is the cell. The prompt lists the glyph letters.
GlyphTask make_glyph_task(std::uint64_t seed, std::size_t n_samples, const BuildConfig& cfg = {});

struct StepLoss {
  std::size_t step = 0;
  double l_img = 0.0;
  double l_text = 0.0;
  double total = 0.0;
};

struct TrainResult {
  std::vector<StepLoss> curve;
  SegmentedLoss initial;  // mean over the dataset before the first step
  SegmentedLoss final;    // mean over the dataset after the last step
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean per-example loss over the dataset.
SegmentedLoss dataset_loss(const ToyModel& model, std::span<const ToyExample> data, double alpha);

/// Minibatch SGD. Batches are drawn with replacement from a SplitMix64 stream
/// seeded by cfg.seed; a batch_size covering the dataset takes full-batch steps.
TrainResult train(ToyModel& model, std::span<const ToyExample> data, std::size_t steps,
                  const BuildConfig& build, const ToyConfig& cfg);

}  // namespace textground
