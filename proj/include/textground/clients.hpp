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

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "textground/corpus_io.hpp"
#include "textground/filter.hpp"
#include "textground/metrics.hpp"
#include "textground/queries.hpp"

namespace textground {

/// Shared contract for every external service: one single-line JSON request in,
/// one single-line JSON response out. Failures raise ClientError.
class JsonTransport {
 public:
  virtual ~JsonTransport() = default;
  virtual Json call(const Json& request) = 0;
};

/// Long-lived child process speaking line-delimited JSON on stdin/stdout.
/// Calls are serialized internally.
class SubprocessTransport final : public JsonTransport {
 public:
  explicit SubprocessTransport(std::vector<std::string> argv);
  ~SubprocessTransport() override;
  SubprocessTransport(const SubprocessTransport&) = delete;
  SubprocessTransport& operator=(const SubprocessTransport&) = delete;

  Json call(const Json& request) override;

 private:
  std::mutex mutex_;
  int pid_ = -1;
  int to_child_ = -1;
  std::FILE* from_child_ = nullptr;
};

/// POSTs the request as application/json to http://host:port/path.
class HttpTransport final : public JsonTransport {
 public:
  explicit HttpTransport(const std::string& url,
                         std::chrono::seconds timeout = std::chrono::seconds(30));
  Json call(const Json& request) override;

 private:
  std::string host_;
  int port_ = 80;
  std::string path_;
  std::chrono::seconds timeout_;
};

/// "exec:<program> [args...]" or "http://host:port/path".
std::unique_ptr<JsonTransport> make_transport(const std::string& spec);

Json to_json(const AuditRequest& r);
AuditRequest audit_request_from_json(const Json& j);
Json to_json(const AuditResponse& r);
AuditResponse audit_response_from_json(const Json& j);

class RemoteAuditClient final : public VlmAuditClient {
 public:
  explicit RemoteAuditClient(JsonTransport& transport) : transport_(transport) {}
  AuditResponse audit(const AuditRequest& request) override;

 private:
  JsonTransport& transport_;
};

/// Wraps an auditor that is not safe for concurrent use.
class SerializedAuditClient final : public VlmAuditClient {
 public:
  explicit SerializedAuditClient(VlmAuditClient& inner) : inner_(inner) {}
  AuditResponse audit(const AuditRequest& request) override {
    std::lock_guard lock(mutex_);
    return inner_.audit(request);
  }

 private:
  VlmAuditClient& inner_;
  std::mutex mutex_;
};

class RemoteClipScoreClient final : public ClipScoreClient {
 public:
  explicit RemoteClipScoreClient(JsonTransport& transport) : transport_(transport) {}
  double score(const std::string& image_ref, const std::string& prompt) override;

 private:
  JsonTransport& transport_;
};

class RemoteLlmClient final : public LlmClient {
 public:
  explicit RemoteLlmClient(JsonTransport& transport) : transport_(transport) {}
  std::vector<std::string> expand(const SubtopicContext& ctx, std::size_t n) override;

 private:
  JsonTransport& transport_;
};

/// Answers audit, clip_score and expand_queries requests with the in-process mocks.
/// Used by `textground serve-mock` so the transports can be exercised end to end.
Json handle_mock_request(const Json& request);

}  // namespace textground
