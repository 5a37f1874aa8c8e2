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

#include "textground/queries.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <tuple>

#include "textground/error.hpp"
#include "textground/text.hpp"

namespace textground {
namespace {

constexpr std::array<std::string_view, 18> kPrepositions = {
    "on",    "in",    "at",     "with",   "near",   "under",   "over",    "inside",  "by",
    "along", "beside", "above", "below",  "behind", "outside", "across", "against", "atop"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool starts_with_preposition(const std::string& context) {
  const auto first = context.substr(0, context.find(' '));
  std::string lower;
  for (char c : first) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return std::find(kPrepositions.begin(), kPrepositions.end(), lower) != kPrepositions.end();
}

std::vector<std::string> template_queries(const Subtopic& s, std::uint64_t seed) {
  std::vector<std::string> modifiers{""};
  modifiers.insert(modifiers.end(), s.modifiers.begin(), s.modifiers.end());
  std::vector<std::string> contexts = s.contexts;
  if (contexts.empty()) contexts.emplace_back();

  std::set<std::string> unique;
  for (const auto& m : modifiers) {
    for (const auto& o : s.objects) {
      for (const auto& c : contexts) unique.insert(compose_query(o, c, m));
    }
  }
  std::vector<std::pair<std::uint64_t, std::string>> ranked;
  for (const auto& q : unique) ranked.emplace_back(keyed_hash(q, seed), q);
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> out;
  for (auto& [h, q] : ranked) out.push_back(std::move(q));
  return out;
}

std::vector<std::string> json_strings(const Json& j, const char* key) {
  return j.value(key, std::vector<std::string>{});
}

}  // namespace

void QueryTaxonomy::validate() const {
  for (const auto& d : domains) {
    if (trim(d.name).empty()) throw DataError("taxonomy domain with empty name");
    for (const auto& t : d.topics) {
      if (trim(t.name).empty()) throw DataError("taxonomy topic with empty name under '" + d.name + "'");
      for (const auto& s : t.subtopics) {
        if (trim(s.name).empty()) throw DataError("taxonomy subtopic with empty name under '" + t.name + "'");
        if (s.objects.empty()) throw DataError("subtopic '" + s.name + "' lists no key objects");
        for (const auto* list : {&s.objects, &s.contexts, &s.modifiers}) {
          for (const auto& label : *list) {
            if (trim(label).empty()) throw DataError("subtopic '" + s.name + "' has an empty label");
          }
        }
      }
    }
  }
}

QueryTaxonomy taxonomy_from_json(const Json& j) {
  QueryTaxonomy tax;
  try {
    for (const auto& dj : j.at("domains")) {
      Domain d{dj.at("name").get<std::string>(), {}};
      for (const auto& tj : dj.value("topics", Json::array())) {
        Topic t{tj.at("name").get<std::string>(), {}};
        for (const auto& sj : tj.value("subtopics", Json::array())) {
          t.subtopics.push_back({sj.at("name").get<std::string>(), json_strings(sj, "objects"),
                                 json_strings(sj, "contexts"), json_strings(sj, "modifiers")});
        }
        d.topics.push_back(std::move(t));
      }
      tax.domains.push_back(std::move(d));
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("taxonomy: ") + e.what());
  }
  tax.validate();
  return tax;
}

std::string compose_query(const std::string& object, const std::string& context,
                          const std::string& modifier) {
  std::string q = trim(modifier);
  if (!q.empty()) q.push_back(' ');
  q += trim(object);
  const auto ctx = trim(context);
  if (!ctx.empty()) q += (starts_with_preposition(ctx) ? " " : " on a ") + ctx;
  if (!q.empty()) q[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(q[0])));
  return q;
}

QueryGeneration generate_queries(const QueryTaxonomy& taxonomy, std::size_t per_subtopic,
                                 std::uint64_t seed, LlmClient* expander) {
  taxonomy.validate();
  QueryGeneration out;
  std::set<std::string> seen;
  if (per_subtopic == 0) return out;
  for (const auto& d : taxonomy.domains) {
    for (const auto& t : d.topics) {
      for (const auto& s : t.subtopics) {
        const auto path = d.name + "/" + t.name + "/" + s.name;
        std::vector<std::string> picked;
        if (expander != nullptr) {
          try {
            for (const auto& raw : expander->expand({d.name, t.name, &s}, per_subtopic)) {
              auto q = trim(raw);
              if (!q.empty() && std::find(picked.begin(), picked.end(), q) == picked.end()) picked.push_back(q);
            }
            if (picked.empty()) out.warnings.push_back(path + ": expander returned no usable queries; using templates");
          } catch (const ClientError& e) {
            out.warnings.push_back(path + ": expander failed (" + e.what() + "); using templates");
            picked.clear();
          }
        }
        if (picked.empty()) picked = template_queries(s, keyed_hash(path, seed));
        std::size_t taken = 0;
        for (auto& q : picked) {
          if (taken == per_subtopic) break;
          if (seen.insert(q).second) {
            out.queries.push_back(std::move(q));
            ++taken;
          }
        }
      }
    }
  }
  return out;
}

Candidate candidate_from_json(const Json& j) {
  try {
    return {j.at("id").get<std::string>(), j.value("context_text", std::string()),
            j.value("ocr_text", std::string()), j.value("width", 0), j.value("height", 0)};
  } catch (const Json::exception& e) {
    throw DataError(std::string("candidate: ") + e.what());
  }
}

std::vector<RetrievalMatch> retrieve(const std::string& query, std::span<const Candidate> pool,
                                     const RetrievalGate& gate, std::size_t top_k) {
  const auto q = word_units(query);
  const std::set<std::string> query_units(q.begin(), q.end());
  std::vector<RetrievalMatch> matches;
  for (const auto& c : pool) {
    if (std::min(c.width, c.height) < gate.min_resolution) continue;
    if (word_units(c.ocr_text).size() < gate.min_ocr_words) continue;
    const auto units = word_units(c.context_text + " " + c.ocr_text);
    const std::set<std::string> cand(units.begin(), units.end());
    std::size_t score = 0;
    for (const auto& u : query_units) score += cand.count(u);
    if (score > 0) matches.push_back({c.id, score});
  }
  std::sort(matches.begin(), matches.end(), [](const RetrievalMatch& a, const RetrievalMatch& b) {
    return std::tie(b.score, a.candidate_id) < std::tie(a.score, b.candidate_id);
  });
  if (top_k > 0 && matches.size() > top_k) matches.resize(top_k);
  return matches;
}

}  // namespace textground
