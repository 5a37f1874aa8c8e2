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

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "textground/aligner.hpp"
#include "textground/clients.hpp"
#include "textground/corpus_io.hpp"
#include "textground/error.hpp"
#include "textground/filter.hpp"
#include "textground/hashing.hpp"
#include "textground/parallel.hpp"
#include "textground/metrics.hpp"
#include "textground/mock_ocr.hpp"
#include "textground/pipeline.hpp"
#include "textground/queries.hpp"
#include "textground/stratifier.hpp"
#include "textground/synth.hpp"
#include "textground/target.hpp"
#include "textground/text.hpp"
#include "textground/toy_ar.hpp"

namespace fs = std::filesystem;
using namespace textground;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kClient = 3 };

struct Globals {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config;
  std::size_t workers = 1;
};

Json load_config(const Globals& g) { return g.config.empty() ? Json::object() : read_json_file(g.config); }

std::uint64_t effective_seed(const Globals& g, const Json& config) {
  return g.seed_set ? g.seed : config.value("seed", std::uint64_t{0});
}

class LineWriter {
 public:
  explicit LineWriter(const fs::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw DataError("cannot open '" + path.string() + "' for writing");
  }
  void write(const Json& j) { out_ << to_line(j) << '\n'; }

 private:
  std::ofstream out_;
};

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

Json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return Json::parse(line);
  } catch (const Json::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

TargetVariant parse_variant(const std::string& s) {
  if (s == "text") return TargetVariant::kTextOnly;
  if (s == "bbox") return TargetVariant::kBBoxOnly;
  return TargetVariant::kTextAndBBox;
}

TargetOrder parse_order(const std::string& s) { return s == "pre" ? TargetOrder::kPreImage : TargetOrder::kPostImage; }

Json stats_json(const CorpusStats& stats) {
  const auto hist = [](const Histogram& h) {
    Json rows = Json::array();
    for (const auto& [k, n] : h.counts) rows.push_back({{"value", k}, {"count", n}, {"percent", h.percent(k)}});
    return Json{{"total", h.total}, {"buckets", rows}};
  };
  Json joint = Json::object();
  for (const auto& [n_box, h] : stats.token_lengths_by_box_count) joint[std::to_string(n_box)] = hist(h);
  return {{"v", kSchemaVersion},
          {"kind", "corpus_stats"},
          {"box_counts", hist(stats.box_counts)},
          {"span_token_lengths", hist(stats.span_token_lengths)},
          {"token_lengths_by_box_count", joint}};
}

void add_align_flags(CLI::App* cmd, AlignConfig& cfg) {
  cmd->add_option("--partial-threshold", cfg.partial_threshold, "token-overlap share for a partial match")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--fuzzy-threshold", cfg.fuzzy_threshold, "normalized similarity for a fuzzy match")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-window-slack", cfg.max_window_slack, "extra OCR words allowed per window");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"textground: prompt-grounded text rendering data and evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { g.seed = s; g.seed_set = true; }, "global seed");
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);

  std::function<void()> action;

  // extract -----------------------------------------------------------------
  std::string in_path, out_path;
  auto* extract = app.add_subcommand("extract", "list quoted spans of every caption");
  extract->add_option("--in", in_path, "input corpus")->required();
  extract->add_option("--out", out_path, "output spans JSONL")->required();
  extract->callback([&] {
    action = [&] {
      LineWriter out(out_path);
      CorpusReader reader(in_path);
      while (auto s = reader.next()) {
        std::vector<SpanDiagnostic> diags;
        Json spans = Json::array(), notes = Json::array();
        for (const auto& q : extract_spans(s->prompt, &diags)) {
          spans.push_back({{"text", q.text}, {"begin", q.begin}, {"end", q.end}});
        }
        for (const auto& d : diags) notes.push_back({{"offset", d.offset}, {"message", d.message}});
        out.write({{"v", kSchemaVersion}, {"id", s->id}, {"spans", spans}, {"diagnostics", notes}});
      }
    };
  });

  // align -------------------------------------------------------------------
  AlignConfig align_cfg;
  std::string alignments_path;
  auto* align = app.add_subcommand("align", "ground caption spans on OCR words");
  align->add_option("--in", in_path, "input corpus")->required();
  align->add_option("--out", out_path, "output corpus with grounded spans")->required();
  align->add_option("--alignments", alignments_path, "optional alignment detail JSONL");
  add_align_flags(align, align_cfg);
  align->callback([&] {
    action = [&] {
      const auto config = load_config(g);
      const auto cfg = align_config_from_json(config, align_cfg);
      auto samples = read_corpus(in_path);
      std::vector<AlignmentResult> results(samples.size());
      parallel_for(samples.size(), g.workers, [&](std::size_t i) { results[i] = annotate(samples[i], cfg); });
      write_corpus(out_path, samples);
      if (!alignments_path.empty()) {
        LineWriter out(alignments_path);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          Json matches = Json::array();
          for (const auto& m : results[i].matches) {
            matches.push_back({{"span", m.span_index}, {"words", m.word_indices},
                               {"stage", to_string(m.stage)}, {"similarity", m.similarity}});
          }
          out.write({{"v", kSchemaVersion}, {"id", samples[i].id}, {"matches", matches},
                     {"unmatched_spans", results[i].unmatched_span_indices},
                     {"unmatched_words", results[i].unmatched_word_indices}});
        }
      }
    };
  });

  // filter ------------------------------------------------------------------
  std::string verdicts_path, auditor_endpoint, on_audit_error = "abort";
  int audit_retries = 3;
  auto* filter = app.add_subcommand("filter", "align, then apply the three filter stages");
  filter->add_option("--in", in_path, "input corpus")->required();
  filter->add_option("--out", out_path, "kept corpus")->required();
  filter->add_option("--verdicts", verdicts_path, "per-sample verdict JSONL");
  filter->add_option("--auditor", auditor_endpoint, "exec:<cmd> or http://host:port/path (default: mock)");
  filter->add_option("--on-audit-error", on_audit_error, "skip or abort")->check(CLI::IsMember({"skip", "abort"}));
  filter->add_option("--audit-retries", audit_retries)->check(CLI::PositiveNumber);
  add_align_flags(filter, align_cfg);
  filter->callback([&] {
    action = [&] {
      const auto config = load_config(g);
      const auto acfg = align_config_from_json(config, align_cfg);
      auto fcfg = filter_config_from_json(config);
      fcfg.seed = effective_seed(g, config);
      auto samples = read_corpus(in_path);
      std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

      std::unique_ptr<JsonTransport> transport;
      std::unique_ptr<VlmAuditClient> auditor;
      if (auditor_endpoint.empty()) {
        auditor = std::make_unique<MockVlmAuditor>();
      } else {
        transport = make_transport(auditor_endpoint);
        auditor = std::make_unique<RemoteAuditClient>(*transport);
      }
      RetryPolicy retry;
      retry.max_attempts = audit_retries;

      struct Outcome {
        int stage = 0;  // 0 = kept, else the stage that dropped it, -1 = audit error
        FilterVerdict verdict;
        std::string error;
      };
      std::vector<Outcome> outcomes(samples.size());
      parallel_for(samples.size(), g.workers, [&](std::size_t i) {
        auto& o = outcomes[i];
        const auto alignment = annotate(samples[i], acfg);
        o.verdict = stage1_filter(samples[i], alignment, fcfg);
        if (!o.verdict.kept()) {
          o.stage = 1;
          return;
        }
        o.verdict = stage2_verdict(samples[i], fcfg);
        if (!o.verdict.kept()) {
          o.stage = 2;
          return;
        }
        try {
          o.verdict = stage3_semantic_audit(samples[i], *auditor, retry);
          o.stage = o.verdict.kept() ? 0 : 3;
        } catch (const AuditUnavailable& e) {
          if (on_audit_error == "abort") throw;
          o.stage = -1;
          o.error = e.what();
        }
      });

      std::unique_ptr<LineWriter> verdicts;
      if (!verdicts_path.empty()) verdicts = std::make_unique<LineWriter>(verdicts_path);
      CorpusWriter kept(out_path);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& o = outcomes[i];
        if (o.stage == 0) kept.write(samples[i]);
        if (verdicts) {
          Json reasons = Json::array();
          for (auto r : o.verdict.reasons) reasons.push_back(to_string(r));
          Json rec = {{"v", kSchemaVersion}, {"id", samples[i].id},
                      {"decision", o.stage == 0 ? "keep" : o.stage < 0 ? "error" : "drop"},
                      {"stage", o.stage}, {"reasons", reasons}};
          if (!o.error.empty()) rec["error"] = o.error;
          verdicts->write(rec);
        }
      }
      kept.close();
    };
  });

  // stratify ----------------------------------------------------------------
  std::size_t quota = 100;
  std::string stats_path;
  auto* stratify = app.add_subcommand("stratify", "classify difficulty and sample a benchmark manifest");
  stratify->add_option("--in", in_path, "aligned corpus")->required();
  stratify->add_option("--out", out_path, "bench manifest JSON")->required();
  stratify->add_option("--quota", quota, "samples per level");
  stratify->add_option("--stats", stats_path, "optional corpus statistics JSON");
  stratify->callback([&] {
    action = [&] {
      const auto config = load_config(g);
      const auto samples = read_corpus(in_path);
      std::string digest;
      if (const auto mp = manifest_path(in_path); fs::exists(mp)) digest = read_json_file(mp).value("digest", "");
      const auto bench = build_bench(samples, quota, effective_seed(g, config), digest);
      write_json_file(out_path, to_json(bench));
      if (!stats_path.empty()) write_json_file(stats_path, stats_json(corpus_stats(samples)));
    };
  });

  auto* stats = app.add_subcommand("stats", "box-count and span-length distributions");
  stats->add_option("--in", in_path, "aligned corpus")->required();
  stats->add_option("--out", out_path, "statistics JSON")->required();
  stats->callback([&] { action = [&] { write_json_file(out_path, stats_json(corpus_stats(read_corpus(in_path)))); }; });

  // build-targets -----------------------------------------------------------
  std::string variant = "both", order = "post", charset = "ascii";
  int image_tokens = 64, image_vocab = 1024;
  double alpha = 1.0;
  auto* targets = app.add_subcommand("build-targets", "training token sequences with loss masks");
  targets->add_option("--in", in_path, "aligned corpus")->required();
  targets->add_option("--out", out_path, "targets JSONL")->required();
  targets->add_option("--variant", variant)->check(CLI::IsMember({"text", "bbox", "both"}));
  targets->add_option("--order", order)->check(CLI::IsMember({"pre", "post"}));
  targets->add_option("--charset", charset, "ascii, or corpus to collect every span character")
      ->check(CLI::IsMember({"ascii", "corpus"}));
  targets->add_option("--image-tokens", image_tokens, "placeholder image tokens per sample")->check(CLI::PositiveNumber);
  targets->add_option("--image-vocab", image_vocab, "image token vocabulary size")->check(CLI::PositiveNumber);
  targets->callback([&] {
    action = [&] {
      const auto samples = read_corpus(in_path);
      std::u32string chars;
      if (charset == "corpus") {
        std::set<char32_t> seen;
        for (const auto& s : samples) {
          for (const auto& span : s.grounded_spans) {
            for (char32_t c : to_code_points(span.text)) seen.insert(c);
          }
        }
        chars.assign(seen.begin(), seen.end());
      }
      const auto vocab = charset == "corpus" ? VocabLayout(image_vocab, chars) : VocabLayout::ascii(image_vocab);
      BuildConfig cfg{parse_variant(variant), parse_order(order), alpha};
      LineWriter out(out_path);
      for (const auto& s : samples) {
        // Opaque stand-ins for VQ codes, fixed by the sample id.
        SplitMix64 rng(keyed_hash(s.id, 0));
        std::vector<TokenId> img(static_cast<std::size_t>(image_tokens));
        for (auto& t : img) t = static_cast<TokenId>(rng.below(static_cast<std::uint64_t>(image_vocab)));
        auto rec = to_json(build_target(img, s.grounded_spans, cfg, vocab));
        rec["v"] = kSchemaVersion;
        rec["id"] = s.id;
        rec["variant"] = to_string(cfg.variant);
        rec["order"] = to_string(cfg.order);
        out.write(rec);
      }
      fs::path vocab_path = out_path;
      vocab_path += ".vocab.json";
      write_json_file(vocab_path, {{"v", kSchemaVersion},
                                   {"image_tokens", vocab.image_token_count()},
                                   {"charset", to_utf8(vocab.charset())},
                                   {"coord_base", vocab.coord_token(0)},
                                   {"control_base", vocab.control(ControlToken::kSpanStart)},
                                   {"controls", {"SPAN_START", "BOX_SEP", "SPAN_END", "SEQ_END", "SEQ_END_TEXT"}},
                                   {"size", vocab.size()}});
    };
  });

  // evaluate ----------------------------------------------------------------
  std::string bench_path, corpus_path, hyp_path, table_path, clip_endpoint;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score OCR of generated images against the benchmark");
  evaluate_cmd->add_option("--bench", bench_path, "bench manifest")->required();
  evaluate_cmd->add_option("--corpus", corpus_path, "reference corpus")->required();
  evaluate_cmd->add_option("--hyp", hyp_path, "hypothesis OCR JSONL")->required();
  evaluate_cmd->add_option("--out", out_path, "report JSON")->required();
  evaluate_cmd->add_option("--table", table_path, "text table (default: <out>.txt)");
  evaluate_cmd->add_option("--clip", clip_endpoint, "CLIP scorer endpoint");
  evaluate_cmd->callback([&] {
    action = [&] {
      const auto bench = read_bench(bench_path);
      const auto corpus = read_corpus(corpus_path);
      const auto hyps = read_hypotheses(hyp_path);
      std::unique_ptr<JsonTransport> transport;
      std::unique_ptr<ClipScoreClient> scorer;
      if (!clip_endpoint.empty()) {
        transport = make_transport(clip_endpoint);
        scorer = std::make_unique<RemoteClipScoreClient>(*transport);
      }
      const auto report = evaluate(bench, corpus, hyps, {scorer.get(), g.workers});
      write_json_file(out_path, to_json(report));
      const auto table = format_report_table(report);
      std::ofstream(table_path.empty() ? out_path + ".txt" : table_path) << table;
      std::cout << table;
      if (report.flagged) std::cerr << "warning: " << report.missing.size() << " bench samples had no hypothesis\n";
    };
  });

  // mock-ocr ----------------------------------------------------------------
  double sub_rate = 0.0, jitter = 0.0;
  auto* mock = app.add_subcommand("mock-ocr", "simulated OCR of ideal renders of each sample");
  mock->add_option("--corpus", corpus_path, "aligned corpus")->required();
  mock->add_option("--out", out_path, "hypothesis JSONL")->required();
  mock->add_option("--char-sub-rate", sub_rate)->check(CLI::Range(0.0, 1.0));
  mock->add_option("--box-jitter", jitter, "pixels")->check(CLI::NonNegativeNumber);
  mock->callback([&] {
    action = [&] {
      const auto config = load_config(g);
      std::map<std::string, HypothesisOcr> hyps;
      for (const auto& s : read_corpus(corpus_path)) hyps[s.id] = mock_ocr(s, {sub_rate, jitter}, effective_seed(g, config));
      write_hypotheses(out_path, hyps);
    };
  });

  // train-toy ---------------------------------------------------------------
  ToyConfig toy;
  std::size_t steps = 500, samples_n = 64;
  std::string curve_path = "loss_curve.csv", summary_path;
  auto* train_cmd = app.add_subcommand("train-toy", "train the toy autoregressive model on the glyph task");
  train_cmd->add_option("--variant", variant)->check(CLI::IsMember({"text", "bbox", "both"}));
  train_cmd->add_option("--order", order)->check(CLI::IsMember({"pre", "post"}));
  train_cmd->add_option("--alpha", alpha, "text loss weight")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--steps", steps);
  train_cmd->add_option("--samples", samples_n);
  train_cmd->add_option("--lr", toy.learning_rate)->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch", toy.batch_size);
  train_cmd->add_option("--out-csv", curve_path, "loss curve CSV");
  train_cmd->add_option("--summary", summary_path, "summary JSON (default: stdout)");
  train_cmd->callback([&] {
    action = [&] {
      const auto config = load_config(g);
      toy.seed = effective_seed(g, config);
      const BuildConfig cfg{parse_variant(variant), parse_order(order), alpha};
      const auto task = make_glyph_task(toy.seed, samples_n, cfg);
      ToyModel model(task.vocab.size(), toy);
      const auto result = train(model, task.examples, steps, cfg, toy);
      std::ofstream csv(curve_path);
      csv << "step,l_img,l_text,total\n";
      char line[128];
      for (const auto& s : result.curve) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", s.step, s.l_img, s.l_text, s.total);
        csv << line;
      }
      const Json summary = {{"v", kSchemaVersion},   {"variant", to_string(cfg.variant)},
                            {"order", to_string(cfg.order)}, {"alpha", alpha},
                            {"steps", steps},         {"samples", samples_n},
                            {"seed", toy.seed},       {"vocab_size", model.vocab_size()},
                            {"initial", {{"l_img", result.initial.l_img}, {"l_text", result.initial.l_text}, {"total", result.initial.total}}},
                            {"final", {{"l_img", result.final.l_img}, {"l_text", result.final.l_text}, {"total", result.final.total}}},
                            {"ratio", result.initial.total > 0 ? result.final.total / result.initial.total : 0.0}};
      if (summary_path.empty()) {
        std::cout << summary.dump(2) << '\n';
      } else {
        write_json_file(summary_path, summary);
      }
    };
  });

  // mine --------------------------------------------------------------------
  std::string taxonomy_path, pool_path, expander_endpoint;
  std::size_t per_subtopic = 5, top_k = 10;
  RetrievalGate gate;
  auto* mine = app.add_subcommand("mine", "compose search queries and rank a candidate pool");
  mine->add_option("--taxonomy", taxonomy_path, "taxonomy JSON")->required();
  mine->add_option("--pool", pool_path, "candidate pool JSONL");
  mine->add_option("--out", out_path, "queries and matches JSONL")->required();
  mine->add_option("--per-subtopic", per_subtopic);
  mine->add_option("--top-k", top_k);
  mine->add_option("--min-resolution", gate.min_resolution);
  mine->add_option("--min-ocr-words", gate.min_ocr_words);
  mine->add_option("--expander", expander_endpoint, "LLM expander endpoint");
  mine->callback([&] {
    action = [&] {
      const auto config = load_config(g);
      const auto taxonomy = taxonomy_from_json(read_json_file(taxonomy_path));
      std::unique_ptr<JsonTransport> transport;
      std::unique_ptr<LlmClient> expander;
      if (!expander_endpoint.empty()) {
        transport = make_transport(expander_endpoint);
        expander = std::make_unique<RemoteLlmClient>(*transport);
      }
      const auto gen = generate_queries(taxonomy, per_subtopic, effective_seed(g, config), expander.get());
      for (const auto& w : gen.warnings) std::cerr << "warning: " << w << '\n';
      std::vector<Candidate> pool;
      if (!pool_path.empty()) {
        const auto lines = read_lines(pool_path);
        for (std::size_t i = 0; i < lines.size(); ++i) pool.push_back(candidate_from_json(parse_line(lines[i], i + 1)));
      }
      LineWriter out(out_path);
      for (const auto& q : gen.queries) {
        Json matches = Json::array();
        for (const auto& m : retrieve(q, pool, gate, top_k)) matches.push_back({{"id", m.candidate_id}, {"score", m.score}});
        out.write({{"v", kSchemaVersion}, {"query", q}, {"matches", matches}});
      }
    };
  });

  // run-pipeline ------------------------------------------------------------
  auto* run = app.add_subcommand("run-pipeline", "extract, align, filter and stratify a corpus");
  run->callback([&] {
    action = [&] {
      if (g.config.empty()) throw UsageError("run-pipeline needs --config");
      auto cfg = pipeline_config_from_json(read_json_file(g.config), fs::path(g.config).parent_path());
      if (g.seed_set) cfg.filter.seed = cfg.bench_seed = g.seed;
      if (app.count("--workers") > 0) cfg.workers = g.workers;
      const auto report = run_pipeline(cfg);
      std::cout << to_json(report).dump(2) << '\n';
    };
  });

  // synth -------------------------------------------------------------------
  std::size_t n = 2000;
  bool clean = false;
  auto* synth = app.add_subcommand("synth", "write a synthetic captioned-OCR corpus");
  synth->add_option("--n", n, "number of samples");
  synth->add_option("--out", out_path, "corpus path")->required();
  synth->add_flag("--clean", clean, "no filter-triggering defects");
  synth->callback([&] {
    action = [&] {
      const auto config = load_config(g);
      write_corpus(out_path, synth_corpus(effective_seed(g, config), n, {clean}));
    };
  });

  // serve-mock --------------------------------------------------------------
  int port = 0;
  auto* serve = app.add_subcommand("serve-mock", "answer audit, clip_score and expand_queries requests with mocks");
  serve->add_option("--port", port, "serve HTTP on this port instead of stdio");
  serve->callback([&] {
    action = [&] {
      if (port > 0) {
        httplib::Server server;
        server.Post(".*", [](const httplib::Request& req, httplib::Response& res) {
          try {
            res.set_content(to_line(handle_mock_request(Json::parse(req.body))), "application/json");
          } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(to_line({{"error", e.what()}}), "application/json");
          }
        });
        server.listen("127.0.0.1", port);
        return;
      }
      for (std::string line; std::getline(std::cin, line);) {
        if (line.empty()) continue;
        Json response;
        try {
          response = handle_mock_request(Json::parse(line));
        } catch (const std::exception& e) {
          response = {{"error", e.what()}};
        }
        std::cout << to_line(response) << std::endl;
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (action) action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ClientError& e) {
    std::cerr << "client error: " << e.what() << '\n';
    return kClient;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
