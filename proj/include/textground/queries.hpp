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
#include <string>
#include <vector>

#include "textground/corpus_io.hpp"

namespace textground {

struct Subtopic {
  std::string name;
  std::vector<std::string> objects;
  std::vector<std::string> contexts;
  std::vector<std::string> modifiers;
};

struct Topic {
  std::string name;
  std::vector<Subtopic> subtopics;
};

struct Domain {
  std::string name;
  std::vector<Topic> topics;
};

/// domain -> topic -> subtopic tree with per-subtopic vocabulary for query templates.
struct QueryTaxonomy {
  std::vector<Domain> domains;

  /// Throws DataError on empty labels or a subtopic without objects.
  void validate() const;
};

QueryTaxonomy taxonomy_from_json(const Json& j);

/// Where a subtopic sits in the taxonomy; passed to query expanders.
struct SubtopicContext {
  std::string domain;
  std::string topic;
  const Subtopic* subtopic = nullptr;
};

/// External query expander (an LLM behind the shared transport contract).
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  /// Throws ClientError on failure.
  virtual std::vector<std::string> expand(const SubtopicContext& ctx, std::size_t n) = 0;
};

/// "[modifier ]object <context>", first letter capitalized. A context that does not
/// start with a preposition is joined with "on a".
std::string compose_query(const std::string& object, const std::string& context,
                          const std::string& modifier = {});

struct QueryGeneration {
  std::vector<std::string> queries;
  std::vector<std::string> warnings;
};

/// Up to `per_subtopic` distinct queries per subtopic. Without an expander, template
/// compositions are ranked by keyed_hash(query, seed). Expander output is trimmed,
/// emptied entries dropped, and deduplicated; an expander failure falls back to the
/// templates for that subtopic with a warning.
QueryGeneration generate_queries(const QueryTaxonomy& taxonomy, std::size_t per_subtopic,
                                 std::uint64_t seed, LlmClient* expander = nullptr);

struct Candidate {
  std::string id;
  std::string context_text;
  std::string ocr_text;
  int width = 0;
  int height = 0;
};

Candidate candidate_from_json(const Json& j);

struct RetrievalGate {
  int min_resolution = 512;  // applied to min(width, height)
  std::size_t min_ocr_words = 3;
};

struct RetrievalMatch {
  std::string candidate_id;
  std::size_t score = 0;  // shared word units between query and candidate text
};

/// Candidates that pass the gate, ranked by lexical overlap with the query (most
/// shared word units first, ties by id). Zero-overlap candidates are omitted.
std::vector<RetrievalMatch> retrieve(const std::string& query, std::span<const Candidate> pool,
                                     const RetrievalGate& gate = {}, std::size_t top_k = 10);

}  // namespace textground
