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

#include "textground/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>

#include "textground/hashing.hpp"
#include "textground/text.hpp"

namespace textground {
namespace {

constexpr std::array<const char*, 40> kWords = {
    "SUMMER", "SALE",   "OPEN",    "EXIT",   "PIZZA",  "COFFEE", "FRESH",   "BAKERY", "HOTEL",  "PARKING",
    "STOP",   "WELCOME", "GRAND",  "OPENING", "FREE",  "WIFI",   "HAPPY",   "BIRTHDAY", "CLOSED", "SPECIAL",
    "OFFER",  "50%",    "OFF",     "TODAY",  "ONLY",   "MARKET", "STREET",  "NORTH",  "SOUTH",  "CITY",
    "LIBRARY", "BOOKS", "MUSIC",   "LIVE",   "NIGHT",  "DINER",  "BURGERS", "TACOS",  "PHARMACY", "GARDEN"};

constexpr std::array<const char*, 10> kNoise = {"www", "shop", "2024", "tel", "ltd", "no", "co", "→", "***", "#"};

constexpr std::array<const char*, 8> kScenes = {"storefront", "poster", "street sign", "flyer",
                                                "billboard",  "menu board", "book cover", "banner"};

struct Quote {
  const char* open;
  const char* close;
};
constexpr std::array<Quote, 4> kQuotes = {{{"\"", "\""}, {"“", "”"}, {"'", "'"}, {"‘", "’"}}};

std::string pick_span(SplitMix64& rng, std::size_t words) {
  std::string s;
  for (std::size_t i = 0; i < words; ++i) {
    if (i > 0) s.push_back(' ');
    s += kWords[rng.below(kWords.size())];
  }
  return s;
}

// Word lengths in code points drive the rendered widths.
std::size_t length_of(const std::string& s) { return to_code_points(s).size(); }

std::string drop_one_char(const std::string& word, SplitMix64& rng) {
  auto cps = to_code_points(word);
  if (cps.size() < 5) return word;
  cps.erase(cps.begin() + 1 + static_cast<std::ptrdiff_t>(rng.below(cps.size() - 2)));
  return to_utf8(cps);
}

}  // namespace

std::vector<SampleRecord> synth_corpus(std::uint64_t seed, std::size_t n, const SynthOptions& options) {
  std::vector<SampleRecord> corpus;
  corpus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "s%06zu", i);
    SplitMix64 rng(keyed_hash(id, seed));
    SampleRecord s;
    s.id = id;
    s.image_ref = std::string("synthetic://") + id + ".png";

    // Defect selection; a clean corpus never draws one.
    const double roll = options.clean ? 1.0 : rng.uniform();
    const bool small = roll < 0.06;
    const bool skewed = roll >= 0.06 && roll < 0.10;
    const bool low_conf = roll >= 0.10 && roll < 0.13;
    const bool cluttered = roll >= 0.13 && roll < 0.18;
    const bool ungrounded = roll >= 0.18 && roll < 0.23;
    const bool typo = roll >= 0.23 && roll < 0.33;

    const int base = small ? 128 + static_cast<int>(rng.below(120)) : 384 + static_cast<int>(rng.below(640));
    s.width = base;
    s.height = skewed ? base * 2 : static_cast<int>(base * (0.8 + 0.4 * rng.uniform()));
    if (rng.below(4) == 0) {
      s.source = SampleSource::kMined;
      s.topic_path = std::vector<std::string>{"commerce", "retail", kScenes[rng.below(kScenes.size())]};
    }

    // Span count skews small, like real captions.
    const double r = rng.uniform();
    const std::size_t n_spans = r < 0.35 ? 1 : r < 0.60 ? 2 : r < 0.80 ? 3 : r < 0.92 ? 4 : 5;
    std::vector<std::string> spans;
    for (std::size_t k = 0; k < n_spans; ++k) {
      const double lr = rng.uniform();
      const std::size_t words = lr < 0.45 ? 1 : lr < 0.70 ? 2 : lr < 0.85 ? 3 : lr < 0.93 ? 4 : 5 + rng.below(3);
      spans.push_back(pick_span(rng, words));
    }

    std::string prompt = std::string("A ") + kScenes[rng.below(kScenes.size())] + " that reads ";
    for (std::size_t k = 0; k < spans.size(); ++k) {
      const auto& q = kQuotes[rng.below(kQuotes.size())];
      if (k > 0) prompt += k + 1 == spans.size() ? " and " : ", ";
      prompt += std::string(q.open) + spans[k] + q.close;
    }
    prompt += ".";
    s.prompt = prompt;

    // Rendered lines: every span that made it into the image, then scene-text noise.
    std::vector<std::vector<std::string>> lines;
    for (std::size_t k = 0; k < spans.size(); ++k) {
      if (ungrounded && k == spans.size() - 1) continue;
      std::vector<std::string> raw;
      std::size_t start = 0;
      const auto& text = spans[k];
      while (start < text.size()) {
        auto stop = text.find(' ', start);
        if (stop == std::string::npos) stop = text.size();
        raw.push_back(text.substr(start, stop - start));
        start = stop + 1;
      }
      if (typo && k == 0) {
        for (auto& w : raw) {
          if (length_of(w) >= 5) {
            w = drop_one_char(w, rng);
            break;
          }
        }
      }
      lines.push_back(std::move(raw));
    }
    const std::size_t noise_lines = cluttered ? 4 + rng.below(3) : options.clean ? 0 : rng.below(2);
    for (std::size_t k = 0; k < noise_lines; ++k) {
      std::vector<std::string> line;
      const std::size_t words = cluttered ? 3 + rng.below(3) : 1;
      for (std::size_t w = 0; w < words; ++w) line.push_back(kNoise[rng.below(kNoise.size())]);
      lines.push_back(std::move(line));
    }

    const double margin = 0.05 * s.width;
    // Clean layouts scale with the image so the text-area floor always holds.
    const double fit_h = s.height / (1.5 * static_cast<double>(lines.size()) + 1.0);
    const double line_h = options.clean ? fit_h : std::min(96.0, fit_h);
    double y = 0.05 * s.height;
    for (const auto& line : lines) {
      std::size_t chars = 0;
      for (const auto& w : line) chars += length_of(w);
      const double gaps = static_cast<double>(line.size() - 1);
      double cw = 0.6 * line_h;
      const double needed = cw * (static_cast<double>(chars) + gaps);
      if (needed > s.width - 2 * margin) cw *= (s.width - 2 * margin) / needed;
      double x = margin + rng.uniform() * std::max(0.0, s.width - 2 * margin - cw * (chars + gaps));
      for (const auto& w : line) {
        const double wpx = cw * static_cast<double>(length_of(w));
        const double conf = low_conf ? 0.3 + 0.3 * rng.uniform() : 0.8 + 0.2 * rng.uniform();
        s.ocr_words.push_back({w, PixelBox(x, y, x + wpx, y + line_h), conf});
        x += wpx + cw;
      }
      y += 1.5 * line_h;
    }
    corpus.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace textground
