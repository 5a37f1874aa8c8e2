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

#include "textground/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "textground/aligner.hpp"
#include "textground/error.hpp"
#include "textground/parallel.hpp"
#include "textground/target.hpp"
#include "textground/text.hpp"

namespace textground {

std::vector<WordPair> word_match(std::span<const std::string> refs,
                                 std::span<const std::string> hyps) {
  std::vector<WordPair> pairs;
  std::vector<bool> used(hyps.size(), false);
  for (std::size_t r = 0; r < refs.size(); ++r) {
    for (std::size_t h = 0; h < hyps.size(); ++h) {
      if (!used[h] && hyps[h] == refs[r]) {
        used[h] = true;
        pairs.push_back({r, h});
        break;
      }
    }
  }
  return pairs;
}

AccuracyF1 accuracy_f1(std::span<const std::string> refs, std::span<const std::string> hyps) {
  AccuracyF1 out;
  if (refs.empty()) {
    if (hyps.empty()) out.accuracy = out.precision = out.f1 = 1.0;
    return out;
  }
  out.pairs = word_match(refs, hyps).size();
  const double p = static_cast<double>(out.pairs);
  out.accuracy = p / static_cast<double>(refs.size());
  out.precision = hyps.empty() ? 0.0 : p / static_cast<double>(hyps.size());
  const double sum = out.precision + out.accuracy;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.accuracy / sum : 0.0;
  return out;
}

namespace {

std::u32string joined_normalized(std::span<const std::string> texts) {
  // Word units on both sides: spans and single words must normalize alike.
  std::vector<std::string> parts;
  for (const auto& t : texts) {
    for (auto& u : word_units(t)) parts.push_back(std::move(u));
  }
  return to_code_points(join(parts, " "));
}

double similarity(const std::u32string& a, const std::u32string& b) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

struct HypWindow {
  std::size_t start = 0;
  std::size_t length = 0;
  std::string norm;
  std::u32string cps;
  std::optional<NormBox> box;
};

std::optional<PixelBox> clip_to_image(const PixelBox& b, int width, int height) {
  const double x1 = std::min<double>(b.x_max(), width);
  const double y1 = std::min<double>(b.y_max(), height);
  if (!(b.x_min() < x1 && b.y_min() < y1)) return std::nullopt;
  return PixelBox(b.x_min(), b.y_min(), x1, y1);
}

// Runs of consecutive reading-order entries. Boxes are filled only when the
// image size is known (width > 0).
std::vector<HypWindow> hyp_windows(const HypothesisOcr& hyp, const std::vector<std::size_t>& order,
                                   std::size_t max_window, int width, int height) {
  std::vector<HypWindow> out;
  for (std::size_t start = 0; start < order.size(); ++start) {
    std::string joined;
    std::vector<PixelBox> boxes;
    for (std::size_t len = 1; len <= max_window && start + len <= order.size(); ++len) {
      const auto& w = hyp.words[order[start + len - 1]];
      if (len > 1) joined.push_back(' ');
      joined += w.text;
      if (width > 0) {
        if (auto c = clip_to_image(w.box, width, height)) boxes.push_back(*c);
      }
      HypWindow win;
      win.start = start;
      win.length = len;
      win.norm = normalize_text(joined);
      win.cps = to_code_points(win.norm);
      if (!boxes.empty()) win.box = quantize_box(box_union(boxes), width, height);
      out.push_back(std::move(win));
    }
  }
  return out;
}

std::vector<std::size_t> hyp_order(const HypothesisOcr& hyp) {
  return reading_order(hyp.words, [](const OcrWord& w) -> const PixelBox& { return w.box; });
}

// Never shorter than the longest reference, so a verbatim long span stays matchable.
template <typename Range, typename TextOf>
std::size_t window_limit(std::size_t base, const Range& refs, TextOf text_of) {
  for (const auto& r : refs) base = std::max(base, word_units(text_of(r)).size());
  return base;
}

}  // namespace

double cer(std::span<const std::string> ref_texts, std::span<const std::string> hyp_texts) {
  const auto ref = joined_normalized(ref_texts);
  const auto hyp = joined_normalized(hyp_texts);
  return static_cast<double>(levenshtein(ref, hyp)) /
         static_cast<double>(std::max<std::size_t>(1, ref.size()));
}

double layout_iou(std::span<const GroundedSpan> refs, const HypothesisOcr& hyp, int width,
                  int height, double gate) {
  if (refs.empty()) return 1.0;
  const auto order = hyp_order(hyp);
  const auto limit = window_limit(kMaxHypWindow, refs, [](const GroundedSpan& g) -> const std::string& { return g.text; });
  const auto windows = hyp_windows(hyp, order, limit, width, height);

  struct Candidate {
    double iou;
    std::size_t ref;
    std::size_t window;
  };
  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < refs.size(); ++r) {
    const auto ref_cps = to_code_points(normalize_text(refs[r].text));
    for (std::size_t w = 0; w < windows.size(); ++w) {
      if (!windows[w].box) continue;
      if (similarity(ref_cps, windows[w].cps) < gate) continue;
      const double iou = box_iou(refs[r].box, *windows[w].box);
      if (iou > 0.0) candidates.push_back({iou, r, w});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    return std::make_tuple(-a.iou, a.ref, windows[a.window].start, windows[a.window].length) <
           std::make_tuple(-b.iou, b.ref, windows[b.window].start, windows[b.window].length);
  });

  std::vector<bool> ref_used(refs.size(), false);
  std::vector<bool> entry_used(order.size(), false);
  double total = 0.0;
  for (const auto& c : candidates) {
    if (ref_used[c.ref]) continue;
    const auto& w = windows[c.window];
    bool free = true;
    for (std::size_t k = w.start; k < w.start + w.length && free; ++k) free = !entry_used[k];
    if (!free) continue;
    for (std::size_t k = w.start; k < w.start + w.length; ++k) entry_used[k] = true;
    ref_used[c.ref] = true;
    total += c.iou;
  }
  return total / static_cast<double>(refs.size());
}

std::optional<double> CoverageResult::pc() const {
  if (total_spans == 0) return std::nullopt;
  return static_cast<double>(matched_spans) / static_cast<double>(total_spans);
}

CoverageResult prompt_coverage(std::span<const std::string> spans, const HypothesisOcr& hyp,
                               double threshold, std::size_t max_window) {
  const auto limit = window_limit(max_window, spans, [](const std::string& t) -> const std::string& { return t; });
  const auto windows = hyp_windows(hyp, hyp_order(hyp), limit, 0, 0);
  CoverageResult out;
  out.total_spans = spans.size();
  for (const auto& span : spans) {
    const auto norm = normalize_text(span);
    const auto cps = to_code_points(norm);
    bool matched = false;
    for (const auto& w : windows) {
      if (w.norm == norm || similarity(cps, w.cps) >= threshold) {
        matched = true;
        break;
      }
    }
    out.matched_flags.push_back(matched);
    if (matched) ++out.matched_spans;
  }
  return out;
}

SampleMetrics score_sample(const SampleRecord& reference, const HypothesisOcr& hyp) {
  SampleMetrics m;
  m.id = reference.id;
  try {
    m.level = classify(features_of(reference));
  } catch (const NotBenchmarkable&) {
    m.level = Difficulty::kEasy;
  }

  const auto& spans = reference.grounded_spans;
  const auto span_order = reading_order(spans, [](const GroundedSpan& s) -> const NormBox& { return s.box; });
  std::vector<std::string> ref_texts, ref_words;
  for (auto i : span_order) {
    ref_texts.push_back(spans[i].text);
    for (auto& u : word_units(spans[i].text)) ref_words.push_back(std::move(u));
  }
  std::vector<std::string> hyp_texts, hyp_words;
  for (auto i : hyp_order(hyp)) {
    hyp_texts.push_back(hyp.words[i].text);
    for (auto& u : word_units(hyp.words[i].text)) hyp_words.push_back(std::move(u));
  }

  const auto af = accuracy_f1(ref_words, hyp_words);
  m.acc = af.accuracy;
  m.f1 = af.f1;
  m.cer = cer(ref_texts, hyp_texts);
  m.layout_iou = layout_iou(spans, hyp, reference.width, reference.height);

  std::vector<std::string> quoted;
  for (const auto& q : extract_spans(reference.prompt)) quoted.push_back(q.text);
  m.pc = prompt_coverage(quoted, hyp).pc();
  return m;
}

namespace {

LevelSummary summarize(std::span<const SampleMetrics* const> samples) {
  LevelSummary s;
  s.samples = samples.size();
  if (samples.empty()) return s;
  double pc_sum = 0.0, cs_sum = 0.0;
  std::size_t cs_count = 0;
  for (const auto* m : samples) {
    s.acc += m->acc;
    s.f1 += m->f1;
    s.cer += m->cer;
    s.layout_iou += m->layout_iou;
    if (m->pc) {
      pc_sum += *m->pc;
      ++s.pc_samples;
    }
    if (m->cs) {
      cs_sum += *m->cs;
      ++cs_count;
    }
  }
  const double n = static_cast<double>(samples.size());
  s.acc /= n;
  s.f1 /= n;
  s.cer /= n;
  s.layout_iou /= n;
  if (s.pc_samples > 0) s.pc = pc_sum / static_cast<double>(s.pc_samples);
  if (cs_count > 0) s.cs = cs_sum / static_cast<double>(cs_count);
  return s;
}

}  // namespace

EvalReport evaluate(const BenchManifest& bench, std::span<const SampleRecord> corpus,
                    const std::map<std::string, HypothesisOcr>& hypotheses,
                    const EvalOptions& options) {
  std::map<std::string, const SampleRecord*> by_id;
  for (const auto& s : corpus) by_id.emplace(s.id, &s);

  struct Job {
    Difficulty level;
    const SampleRecord* sample;
    const HypothesisOcr* hyp;
  };
  std::vector<Job> jobs;
  EvalReport report;
  for (const auto& [level, ids] : bench.levels) {
    for (const auto& id : ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw DataError("bench id '" + id + "' is not in the corpus");
      const auto h = hypotheses.find(id);
      if (h == hypotheses.end()) {
        report.missing.push_back(id);
        continue;
      }
      jobs.push_back({level, it->second, &h->second});
    }
  }
  report.flagged = !report.missing.empty();

  report.samples.resize(jobs.size());
  parallel_for(jobs.size(), options.workers, [&](std::size_t i) {
    auto m = score_sample(*jobs[i].sample, *jobs[i].hyp);
    m.level = jobs[i].level;
    if (options.scorer != nullptr) m.cs = options.scorer->score(jobs[i].sample->image_ref, jobs[i].sample->prompt);
    report.samples[i] = std::move(m);
  });

  std::vector<const SampleMetrics*> all;
  for (auto d : kAllDifficulties) {
    std::vector<const SampleMetrics*> level;
    for (const auto& m : report.samples) {
      if (m.level == d) level.push_back(&m);
    }
    report.levels[d] = summarize(level);
    all.insert(all.end(), level.begin(), level.end());
  }
  report.overall = summarize(all);
  return report;
}

std::string format_report_table(const EvalReport& report) {
  std::string out;
  char line[256];
  const auto cell = [](const std::optional<double>& v, double scale) {
    char buf[32];
    if (!v) return std::string("     n/a");
    std::snprintf(buf, sizeof buf, "%8.2f", *v * scale);
    return std::string(buf);
  };
  const auto rows = [&](const char* title, double scale) {
    std::snprintf(line, sizeof line, "%s\n%-8s %6s %8s %8s %8s %8s %8s %8s\n", title, "level", "n",
                  "CS", "Acc", "F1", "CER", "IOU", "PC");
    out += line;
    const auto row = [&](std::string_view name, const LevelSummary& s) {
      std::snprintf(line, sizeof line, "%-8.*s %6zu %s %s %s %s %s %s\n",
                    static_cast<int>(name.size()), name.data(), s.samples, cell(s.cs, 1.0).c_str(),
                    cell(s.acc, scale).c_str(), cell(s.f1, scale).c_str(),
                    cell(s.cer, scale).c_str(), cell(s.layout_iou, scale).c_str(),
                    cell(s.pc, scale).c_str());
      out += line;
    };
    for (auto d : kAllDifficulties) row(to_string(d), report.levels.at(d));
    row("all", report.overall);
  };
  rows("raw [0, 1]", 1.0);
  out += "\n";
  rows("scaled x100", 100.0);
  if (!report.missing.empty()) {
    out += "\nmissing hypotheses: " + std::to_string(report.missing.size()) + "\n";
  }
  return out;
}

}  // namespace textground
