// Copyright 2026 The effcorp Authors.
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

// HTTP+JSON boundary for the annotation tool.
//
//   GET  /api/task/next?annotator=<id>
//   POST /api/annotations
//   GET  /api/abstracts/<pmid>
//   GET  /api/stats
//   GET  /api/agreement?a=<id>&b=<id>
//   GET  /                 static UI bundle
//
// Errors are {"error": {"code": ..., "message": ...}}.

#ifndef EFFCORP_SERVICE_H_
#define EFFCORP_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "effcorp/annotation.h"
#include "effcorp/text.h"

namespace effcorp {

struct ServiceConfig {
  AnnotationPolicy policy;
  bool suggestions = true;         // best-sentence hint in task views
  bool show_title_phrase = true;   // effect phrase span in task views
  std::optional<uint64_t> shuffle_seed;
  std::optional<std::string> ui_dir;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

ServiceResponse ErrorResponse(int status, const std::string &code, const std::string &message);

// Request handlers without any transport. All state changes go through
// AnnotationStore::Record.
class AnnotationService {
 public:
  AnnotationService(CorpusIndex corpus, AnnotationStore *store, ServiceConfig config = {},
                    StopwordSet stopwords = DefaultStopwords());

  ServiceResponse NextTask(const std::string &annotator) const;
  ServiceResponse Submit(const std::string &body);
  ServiceResponse Abstract(const std::string &pmid) const;
  ServiceResponse Stats() const;
  ServiceResponse Agreement(const std::string &a, const std::string &b) const;

  // Pmids in the order they are served to `annotator`: ascending, or a
  // per-annotator seeded shuffle when configured.
  std::vector<std::string> TaskOrder(const std::string &annotator) const;

  nlohmann::json TaskView(const AbstractRecord &record) const;

  const CorpusIndex &corpus() const { return corpus_; }
  const ServiceConfig &config() const { return config_; }

 private:
  nlohmann::json Progress(const std::string &annotator,
                          const std::vector<AnnotationRecord> &latest) const;

  CorpusIndex corpus_;
  AnnotationStore *store_;
  ServiceConfig config_;
  StopwordSet stopwords_;
};

// Binds the routes of `service` to an HTTP server.
class HttpServer {
 public:
  explicit HttpServer(AnnotationService *service);
  ~HttpServer();

  // Binds to host:port (port 0 picks a free port) and returns the port.
  // Throws IoError when binding fails.
  int Bind(const std::string &host, int port);
  // Serves until Stop(); call after Bind.
  void Listen();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace effcorp

#endif  // EFFCORP_SERVICE_H_
