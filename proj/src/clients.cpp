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

#include "textground/clients.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <httplib.h>
#include <regex>
#include <sstream>

#include "textground/error.hpp"

namespace textground {

SubprocessTransport::SubprocessTransport(std::vector<std::string> argv) {
  if (argv.empty()) throw UsageError("subprocess transport needs a program");
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) throw ClientError(std::string("pipe: ") + std::strerror(errno));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw ClientError(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> args;
  for (auto& a : argv) args.push_back(a.data());
  args.push_back(nullptr);

  pid_ = fork();
  if (pid_ < 0) throw ClientError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
  from_child_ = fdopen(out_pipe[0], "r");
  // A dead child must surface as a failed write, not a signal.
  signal(SIGPIPE, SIG_IGN);
}

SubprocessTransport::~SubprocessTransport() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ != nullptr) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

Json SubprocessTransport::call(const Json& request) {
  std::lock_guard lock(mutex_);
  std::string line = to_line(request);
  line.push_back('\n');
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = write(to_child_, line.data() + written, line.size() - written);
    if (n <= 0) throw ClientError("subprocess transport: write failed");
    written += static_cast<std::size_t>(n);
  }
  char* buf = nullptr;
  std::size_t cap = 0;
  const auto n = getline(&buf, &cap, from_child_);
  std::string response = n > 0 ? std::string(buf, static_cast<std::size_t>(n)) : std::string();
  std::free(buf);
  if (n <= 0) throw ClientError("subprocess transport: no response");
  try {
    return Json::parse(response);
  } catch (const Json::exception& e) {
    throw ClientError(std::string("subprocess transport: malformed response: ") + e.what());
  }
}

HttpTransport::HttpTransport(const std::string& url, std::chrono::seconds timeout) : timeout_(timeout) {
  static const std::regex pattern(R"(http://([^/:]+)(?::(\d+))?(/.*)?)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) throw UsageError("unsupported endpoint '" + url + "'");
  host_ = m[1];
  port_ = m[2].matched ? std::stoi(m[2]) : 80;
  path_ = m[3].matched ? std::string(m[3]) : "/";
}

Json HttpTransport::call(const Json& request) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  const auto res = client.Post(path_, to_line(request), "application/json");
  if (!res) throw ClientError("http transport: " + httplib::to_string(res.error()));
  if (res->status != 200) throw ClientError("http transport: status " + std::to_string(res->status));
  try {
    return Json::parse(res->body);
  } catch (const Json::exception& e) {
    throw ClientError(std::string("http transport: malformed response: ") + e.what());
  }
}

std::unique_ptr<JsonTransport> make_transport(const std::string& spec) {
  if (spec.rfind("http://", 0) == 0) return std::make_unique<HttpTransport>(spec);
  if (spec.rfind("exec:", 0) == 0) {
    std::istringstream in(spec.substr(5));
    std::vector<std::string> argv;
    for (std::string a; in >> a;) argv.push_back(a);
    return std::make_unique<SubprocessTransport>(std::move(argv));
  }
  throw UsageError("endpoint must start with exec: or http://, got '" + spec + "'");
}

Json to_json(const AuditRequest& r) {
  Json spans = Json::array(), words = Json::array();
  for (const auto& g : r.grounded_spans) spans.push_back(to_json(g));
  for (const auto& w : r.ocr_words) words.push_back(to_json(w));
  return {{"kind", "audit"},       {"id", r.sample_id}, {"image_ref", r.image_ref},
          {"caption", r.caption},  {"spans", r.spans},  {"grounded_spans", spans},
          {"width", r.width},      {"height", r.height}, {"ocr_words", words}};
}

AuditRequest audit_request_from_json(const Json& j) {
  AuditRequest r;
  r.sample_id = j.value("id", std::string());
  r.image_ref = j.value("image_ref", std::string());
  r.caption = j.value("caption", std::string());
  r.spans = j.at("spans").get<std::vector<std::string>>();
  for (const auto& g : j.value("grounded_spans", Json::array())) r.grounded_spans.push_back(grounded_span_from_json(g));
  r.width = j.value("width", 0);
  r.height = j.value("height", 0);
  for (const auto& w : j.value("ocr_words", Json::array())) r.ocr_words.push_back(ocr_word_from_json(w));
  return r;
}

Json to_json(const AuditResponse& r) {
  return {{"span_grounded", r.span_grounded}, {"coherent", r.coherent}};
}

AuditResponse audit_response_from_json(const Json& j) {
  AuditResponse r;
  r.span_grounded = j.at("span_grounded").get<std::vector<bool>>();
  r.coherent = j.at("coherent").get<bool>();
  return r;
}

AuditResponse RemoteAuditClient::audit(const AuditRequest& request) {
  const auto response = transport_.call(to_json(request));
  try {
    return audit_response_from_json(response);
  } catch (const Json::exception& e) {
    throw ClientError(std::string("auditor response: ") + e.what());
  }
}

double RemoteClipScoreClient::score(const std::string& image_ref, const std::string& prompt) {
  const auto response = transport_.call({{"kind", "clip_score"}, {"image_ref", image_ref}, {"prompt", prompt}});
  try {
    return response.at("score").get<double>();
  } catch (const Json::exception& e) {
    throw ClientError(std::string("clip scorer response: ") + e.what());
  }
}

std::vector<std::string> RemoteLlmClient::expand(const SubtopicContext& ctx, std::size_t n) {
  const auto& s = *ctx.subtopic;
  const auto response = transport_.call({{"kind", "expand_queries"},
                                         {"domain", ctx.domain},
                                         {"topic", ctx.topic},
                                         {"subtopic", s.name},
                                         {"objects", s.objects},
                                         {"contexts", s.contexts},
                                         {"modifiers", s.modifiers},
                                         {"n", n}});
  try {
    return response.at("queries").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw ClientError(std::string("query expander response: ") + e.what());
  }
}

Json handle_mock_request(const Json& request) {
  const auto kind = request.value("kind", std::string());
  if (kind == "audit") {
    MockVlmAuditor auditor;
    return to_json(auditor.audit(audit_request_from_json(request)));
  }
  if (kind == "clip_score") {
    // Deterministic placeholder in the CLIP score range; not a real similarity.
    const auto h = keyed_hash(request.value("image_ref", std::string()) + "\n" +
                                  request.value("prompt", std::string()),
                              0);
    return {{"score", 20.0 + 10.0 * to_unit_interval(h)}};
  }
  if (kind == "expand_queries") {
    std::vector<std::string> queries;
    const auto objects = request.value("objects", std::vector<std::string>{});
    const auto contexts = request.value("contexts", std::vector<std::string>{});
    const auto n = request.value("n", std::size_t{0});
    for (const auto& o : objects) {
      for (const auto& c : contexts) {
        if (queries.size() < n) queries.push_back(compose_query(o, c));
      }
    }
    return {{"queries", queries}};
  }
  return {{"error", "unknown request kind '" + kind + "'"}};
}

}  // namespace textground
