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

#include "textground/filter.hpp"

#include <algorithm>
#include <thread>
#include <utility>

#include "textground/hashing.hpp"
#include "textground/target.hpp"
#include "textground/text.hpp"

namespace textground {

std::string_view to_string(FilterReason r) noexcept {
  switch (r) {
    case FilterReason::kMinDim:
      return "min_dim";
    case FilterReason::kAspectRatio:
      return "aspect_ratio";
    case FilterReason::kTextArea:
      return "text_area";
    case FilterReason::kLowConfidence:
      return "low_confidence";
    case FilterReason::kSymbolOnly:
      return "symbol_only";
    case FilterReason::kUnmatchedRatio:
      return "unmatched_ratio";
    case FilterReason::kDownsampled:
      return "downsampled";
    case FilterReason::kAuditSpanUngrounded:
      return "audit_span_ungrounded";
    case FilterReason::kAuditIncoherent:
      return "audit_incoherent";
  }
  return "unknown";
}

FilterVerdict FilterVerdict::from_reasons(std::vector<FilterReason> reasons) {
  FilterVerdict v;
  v.decision = reasons.empty() ? FilterDecision::kKeep : FilterDecision::kDrop;
  v.reasons = std::move(reasons);
  return v;
}

void FilterConfig::validate() const {
  const auto ratio = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError(std::string(name) + " must lie in [0, 1]");
  };
  ratio(min_text_area_ratio, "min_text_area_ratio");
  ratio(min_ocr_confidence, "min_ocr_confidence");
  ratio(max_unmatched_ratio, "max_unmatched_ratio");
  ratio(drop_rate_1box, "drop_rate_1box");
  ratio(drop_rate_2box, "drop_rate_2box");
  if (!(aspect_min > 0.0 && aspect_min <= aspect_max)) {
    throw UsageError("aspect range must be positive and ordered");
  }
  if (min_dim < 0) throw UsageError("min_dim must be non-negative");
}

double union_area(std::span<const PixelBox> boxes) {
  std::vector<double> xs;
  xs.reserve(2 * boxes.size());
  for (const auto& b : boxes) {
    xs.push_back(b.x_min());
    xs.push_back(b.x_max());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double area = 0.0;
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i], x1 = xs[i + 1];
    spans.clear();
    for (const auto& b : boxes) {
      if (b.x_min() <= x0 && b.x_max() >= x1) spans.emplace_back(b.y_min(), b.y_max());
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    double covered = 0.0;
    double lo = spans.front().first, hi = spans.front().second;
    for (const auto& [a, b] : spans) {
      if (a > hi) {
        covered += hi - lo;
        lo = a;
        hi = b;
      } else {
        hi = std::max(hi, b);
      }
    }
    covered += hi - lo;
    area += covered * (x1 - x0);
  }
  return area;
}

double union_text_area_ratio(std::span<const OcrWord> words, int width, int height) {
  if (width < 1 || height < 1) throw UsageError("image dimensions must be positive");
  std::vector<PixelBox> clipped;
  clipped.reserve(words.size());
  for (const auto& w : words) {
    const double x1 = std::min<double>(w.box.x_max(), width);
    const double y1 = std::min<double>(w.box.y_max(), height);
    if (w.box.x_min() < x1 && w.box.y_min() < y1) clipped.emplace_back(w.box.x_min(), w.box.y_min(), x1, y1);
  }
  return union_area(clipped) / (static_cast<double>(width) * static_cast<double>(height));
}

bool passes_confidence(const OcrWord& word, const FilterConfig& cfg) noexcept {
  return word.confidence >= cfg.min_ocr_confidence;
}

FilterVerdict stage1_filter(const SampleRecord& sample, const AlignmentResult& alignment,
                            const FilterConfig& cfg) {
  std::vector<FilterReason> reasons;
  if (std::min(sample.width, sample.height) < cfg.min_dim) reasons.push_back(FilterReason::kMinDim);
  const double aspect = static_cast<double>(sample.width) / static_cast<double>(sample.height);
  if (aspect < cfg.aspect_min || aspect > cfg.aspect_max) reasons.push_back(FilterReason::kAspectRatio);

  std::vector<OcrWord> confident;
  for (const auto& w : sample.ocr_words) {
    if (passes_confidence(w, cfg)) confident.push_back(w);
  }
  if (!sample.ocr_words.empty() && confident.empty()) reasons.push_back(FilterReason::kLowConfidence);

  std::vector<OcrWord> readable;
  for (const auto& w : confident) {
    if (has_alnum(normalize_text(w.text))) readable.push_back(w);
  }
  if (!confident.empty() && readable.empty()) reasons.push_back(FilterReason::kSymbolOnly);

  if (union_text_area_ratio(readable, sample.width, sample.height) < cfg.min_text_area_ratio) {
    reasons.push_back(FilterReason::kTextArea);
  }

  if (!sample.ocr_words.empty()) {
    const double unmatched = static_cast<double>(alignment.unmatched_word_indices.size()) /
                             static_cast<double>(sample.ocr_words.size());
    if (unmatched > cfg.max_unmatched_ratio) reasons.push_back(FilterReason::kUnmatchedRatio);
  }
  return FilterVerdict::from_reasons(std::move(reasons));
}

double downsample_draw(std::string_view id, std::uint64_t seed) noexcept {
  return to_unit_interval(keyed_hash(id, seed));
}

FilterVerdict stage2_verdict(const SampleRecord& sample, const FilterConfig& cfg) noexcept {
  const auto n_box = sample.grounded_spans.size();
  double drop_rate = 0.0;
  if (n_box == 1) drop_rate = cfg.drop_rate_1box;
  if (n_box == 2) drop_rate = cfg.drop_rate_2box;
  if (drop_rate > 0.0 && downsample_draw(sample.id, cfg.seed) < drop_rate) {
    return FilterVerdict::from_reasons({FilterReason::kDownsampled});
  }
  return {};
}

std::vector<FilterVerdict> stage2_downsample(std::span<const SampleRecord> samples,
                                             const FilterConfig& cfg) {
  std::vector<FilterVerdict> verdicts;
  verdicts.reserve(samples.size());
  for (const auto& s : samples) verdicts.push_back(stage2_verdict(s, cfg));
  return verdicts;
}

AuditResponse MockVlmAuditor::audit(const AuditRequest& request) {
  AuditResponse response;
  std::vector<bool> used(request.grounded_spans.size(), false);
  for (const auto& span : request.spans) {
    const auto norm = normalize_text(span);
    bool grounded = false;
    for (std::size_t g = 0; g < request.grounded_spans.size() && !grounded; ++g) {
      if (!used[g] && normalize_text(request.grounded_spans[g].text) == norm) {
        used[g] = true;
        grounded = true;
      }
    }
    response.span_grounded.push_back(grounded);
  }

  for (const auto& g : request.grounded_spans) {
    std::vector<PixelBox> boxes;
    for (auto idx : g.source_word_indices) {
      if (idx >= request.ocr_words.size()) {
        response.coherent = false;
        break;
      }
      boxes.push_back(request.ocr_words[idx].box);
    }
    if (!response.coherent || boxes.empty()) {
      response.coherent = false;
      break;
    }
    try {
      if (!(quantize_box(box_union(boxes), request.width, request.height) == g.box)) {
        response.coherent = false;
        break;
      }
    } catch (const DataError&) {
      response.coherent = false;
      break;
    }
  }
  return response;
}

AuditRequest make_audit_request(const SampleRecord& sample) {
  AuditRequest req;
  req.sample_id = sample.id;
  req.image_ref = sample.image_ref;
  req.caption = sample.prompt;
  for (const auto& s : extract_spans(sample.prompt)) req.spans.push_back(s.text);
  req.grounded_spans = sample.grounded_spans;
  req.width = sample.width;
  req.height = sample.height;
  req.ocr_words = sample.ocr_words;
  return req;
}

FilterVerdict stage3_semantic_audit(const SampleRecord& sample, VlmAuditClient& auditor,
                                    const RetryPolicy& retry) {
  const auto request = make_audit_request(sample);
  std::string last_error = "no attempts made";
  for (int attempt = 0; attempt < std::max(1, retry.max_attempts); ++attempt) {
    if (attempt > 0 && retry.backoff.count() > 0) std::this_thread::sleep_for(retry.backoff * attempt);
    try {
      const auto response = auditor.audit(request);
      if (response.span_grounded.size() != request.spans.size()) {
        last_error = "auditor returned " + std::to_string(response.span_grounded.size()) +
                     " span flags for " + std::to_string(request.spans.size()) + " spans";
        continue;
      }
      std::vector<FilterReason> reasons;
      if (std::find(response.span_grounded.begin(), response.span_grounded.end(), false) !=
          response.span_grounded.end()) {
        reasons.push_back(FilterReason::kAuditSpanUngrounded);
      }
      if (!response.coherent) reasons.push_back(FilterReason::kAuditIncoherent);
      return FilterVerdict::from_reasons(std::move(reasons));
    } catch (const ClientError& e) {
      last_error = e.what();
    }
  }
  throw AuditUnavailable(sample.id, last_error);
}

}  // namespace textground
