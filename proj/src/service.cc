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

#include "effcorp/service.h"

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "httplib.h"

#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/evaluate.h"
#include "effcorp/random.h"
#include "effcorp/title_grammar.h"

namespace effcorp {

namespace {

constexpr char kJsonType[] = "application/json; charset=utf-8";

constexpr char kPlaceholderPage[] =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>effcorp</title></head>\n"
    "<body><p>No UI bundle configured. Start the server with --ui-dir to serve one.</p>\n"
    "<p>API: /api/task/next?annotator=ID, /api/annotations, /api/abstracts/PMID,\n"
    "/api/stats, /api/agreement?a=ID&amp;b=ID</p></body></html>\n";

}  // namespace

ServiceResponse ErrorResponse(int status, const std::string &code, const std::string &message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

AnnotationService::AnnotationService(CorpusIndex corpus, AnnotationStore *store,
                                     ServiceConfig config, StopwordSet stopwords)
    : corpus_(std::move(corpus)),
      store_(store),
      config_(std::move(config)),
      stopwords_(std::move(stopwords)) {}

std::vector<std::string> AnnotationService::TaskOrder(const std::string &annotator) const {
  std::vector<std::string> order;
  order.reserve(corpus_.size());
  for (const AbstractRecord &r : corpus_.records()) order.push_back(r.pmid);
  if (config_.shuffle_seed) {
    std::mt19937_64 rng(*config_.shuffle_seed ^ Fnv1a64(annotator));
    SeededShuffle(&order, &rng);
  }
  return order;
}

nlohmann::json AnnotationService::Progress(const std::string &annotator,
                                           const std::vector<AnnotationRecord> &latest) const {
  std::size_t done = 0;
  for (const AnnotationRecord &r : latest) {
    done += r.annotator_id == annotator && corpus_.Find(r.pmid) != nullptr;
  }
  return {{"done", done}, {"total", corpus_.size()}};
}

nlohmann::json AnnotationService::TaskView(const AbstractRecord &record) const {
  nlohmann::json view;
  view["done"] = false;
  view["pmid"] = record.pmid;
  view["title"] = record.title;
  nlohmann::json phrase = nullptr;
  if (config_.show_title_phrase) {
    if (auto parse = ParseTitle(record.title)) {
      phrase = {{"start", parse->match_start},
                {"end", parse->match_end},
                {"polarity", std::string(PolarityName(parse->polarity))},
                {"text", record.title.substr(parse->match_start,
                                             parse->match_end - parse->match_start)}};
    }
  }
  view["title_phrase"] = phrase;

  nlohmann::json sections = nlohmann::json::array();
  for (std::size_t s = 0; s < record.sections.size(); ++s) {
    const Section &section = record.sections[s];
    nlohmann::json labels = nlohmann::json::array();
    for (CanonicalLabel l : section.label_canonical.labels()) labels.push_back(std::string(LabelName(l)));
    nlohmann::json sentences = nlohmann::json::array();
    for (std::size_t i = 0; i < section.sentence_spans.size(); ++i) {
      const Span &span = section.sentence_spans[i];
      sentences.push_back({{"id", {s, i}},
                           {"start", span.begin},
                           {"end", span.end},
                           {"text", section.text.substr(span.begin, span.length())}});
    }
    sections.push_back({{"index", s},
                        {"label_raw", section.label_raw},
                        {"labels", labels},
                        {"text", section.text},
                        {"sentences", sentences}});
  }
  view["sections"] = sections;

  if (config_.suggestions) {
    auto best = BestSentence(record, DefaultBestSentenceScope(), stopwords_);
    view["suggested_sentence"] =
        best ? nlohmann::json({best->ref.section, best->ref.sentence}) : nlohmann::json(nullptr);
  }

  nlohmann::json abbreviations = nlohmann::json::array();
  for (const AbbrevPair &pair : ExtractAbbreviations(record)) {
    abbreviations.push_back({{"short_form", pair.short_form}, {"long_form", pair.long_form}});
  }
  view["abbreviations"] = abbreviations;
  view["policy"] = AnnotationPolicyToJson(config_.policy);
  return view;
}

ServiceResponse AnnotationService::NextTask(const std::string &annotator) const {
  if (annotator.empty()) return ErrorResponse(400, "missing_parameter", "annotator is required");
  if (corpus_.size() == 0) return ErrorResponse(503, "not_ready", "no corpus loaded");
  std::vector<AnnotationRecord> latest = store_->LatestAll();
  std::set<std::string> annotated;
  for (const AnnotationRecord &r : latest) {
    if (r.annotator_id == annotator) annotated.insert(r.pmid);
  }
  nlohmann::json progress = Progress(annotator, latest);
  for (const std::string &pmid : TaskOrder(annotator)) {
    if (annotated.contains(pmid)) continue;
    nlohmann::json view = TaskView(*corpus_.Find(pmid));
    view["progress"] = progress;
    return {200, view};
  }
  return {200, {{"done", true}, {"progress", progress}}};
}

ServiceResponse AnnotationService::Submit(const std::string &body) {
  if (corpus_.size() == 0) return ErrorResponse(503, "not_ready", "no corpus loaded");
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error &e) {
    return ErrorResponse(400, "bad_json", e.what());
  }
  try {
    AnnotationRecord submission = AnnotationFromJson(json);
    submission.seq = 0;
    submission.timestamp.clear();
    AnnotationRecord stored = store_->Record(submission, corpus_, config_.policy);
    return {200,
            {{"annotation", AnnotationToJson(stored)},
             {"progress", Progress(stored.annotator_id, store_->LatestAll())}}};
  } catch (const ValidationError &e) {
    ServiceResponse r = ErrorResponse(400, "rejected", e.what());
    r.body["error"]["reasons"] = e.violations();
    return r;
  } catch (const IoError &e) {
    return ErrorResponse(500, "storage_failure", e.what());
  }
}

ServiceResponse AnnotationService::Abstract(const std::string &pmid) const {
  const AbstractRecord *record = corpus_.Find(pmid);
  if (!record) return ErrorResponse(404, "not_found", "unknown pmid " + pmid);
  return {200, TaskView(*record)};
}

ServiceResponse AnnotationService::Stats() const {
  std::vector<AnnotationRecord> latest = store_->LatestAll();
  nlohmann::json corpus_counts = {{"positive", 0}, {"negative", 0}, {"neutral", 0}};
  std::size_t unparsed = 0;
  for (const AbstractRecord &r : corpus_.records()) {
    if (auto parse = ParseTitle(r.title)) {
      corpus_counts[std::string(PolarityName(parse->polarity))] =
          corpus_counts[std::string(PolarityName(parse->polarity))].get<std::size_t>() + 1;
    } else {
      ++unparsed;
    }
  }
  nlohmann::json gold_counts = {{"positive", 0}, {"negative", 0}, {"neutral", 0}};
  for (const GoldRow &row : ExportGold(latest, false)) {
    std::string name(PolarityName(row.polarity));
    gold_counts[name] = gold_counts[name].get<std::size_t>() + 1;
  }
  std::set<std::string> names;
  for (const AnnotationRecord &r : latest) names.insert(r.annotator_id);
  nlohmann::json annotators = nlohmann::json::array();
  for (const std::string &name : names) {
    annotators.push_back({{"annotator_id", name}, {"progress", Progress(name, latest)}});
  }
  nlohmann::json agreement = nlohmann::json::array();
  std::vector<std::string> list(names.begin(), names.end());
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      agreement.push_back(AgreementReportToJson(ComputeAgreement(latest, list[i], list[j])));
    }
  }
  return {200,
          {{"corpus_size", corpus_.size()},
           {"corpus_class_counts", corpus_counts},
           {"corpus_unparsed_titles", unparsed},
           {"gold_class_counts", gold_counts},
           {"annotations", store_->size()},
           {"annotators", annotators},
           {"agreement", list.size() >= 2 ? agreement : nlohmann::json(nullptr)}}};
}

ServiceResponse AnnotationService::Agreement(const std::string &a, const std::string &b) const {
  if (a.empty() || b.empty()) {
    return ErrorResponse(400, "missing_parameter", "parameters a and b are required");
  }
  return {200, AgreementReportToJson(ComputeAgreement(store_->LatestAll(), a, b))};
}

// ---------------------------------------------------------------------------
// HttpServer

struct HttpServer::Impl {
  AnnotationService *service;
  httplib::Server server;
};

namespace {

void Reply(httplib::Response &res, const ServiceResponse &r) {
  res.status = r.status;
  res.set_content(r.body.dump(), kJsonType);
}

}  // namespace

HttpServer::HttpServer(AnnotationService *service) : impl_(std::make_unique<Impl>()) {
  impl_->service = service;
  httplib::Server &server = impl_->server;
  AnnotationService *svc = service;

  server.Get("/api/task/next", [svc](const httplib::Request &req, httplib::Response &res) {
    Reply(res, svc->NextTask(req.get_param_value("annotator")));
  });
  server.Post("/api/annotations", [svc](const httplib::Request &req, httplib::Response &res) {
    Reply(res, svc->Submit(req.body));
  });
  server.Get(R"(/api/abstracts/([^/]+))",
             [svc](const httplib::Request &req, httplib::Response &res) {
               Reply(res, svc->Abstract(req.matches[1]));
             });
  server.Get("/api/stats", [svc](const httplib::Request &, httplib::Response &res) {
    Reply(res, svc->Stats());
  });
  server.Get("/api/agreement", [svc](const httplib::Request &req, httplib::Response &res) {
    Reply(res, svc->Agreement(req.get_param_value("a"), req.get_param_value("b")));
  });

  const auto &ui_dir = service->config().ui_dir;
  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    server.set_mount_point("/", *ui_dir);
  } else {
    server.Get("/", [](const httplib::Request &, httplib::Response &res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
  server.set_error_handler([](const httplib::Request &req, httplib::Response &res) {
    if (!res.body.empty()) return;
    std::string code = res.status == 404 ? "not_found" : "http_error";
    Reply(res, ErrorResponse(res.status, code, "cannot serve " + req.method + " " + req.path));
  });
  server.set_exception_handler(
      [](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception &e) {
          message = e.what();
        } catch (...) {
        }
        Reply(res, ErrorResponse(500, "internal", message));
      });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string &host, int port) {
  bool ok;
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    ok = bound > 0;
  } else {
    ok = impl_->server.bind_to_port(host, port);
  }
  if (!ok) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace effcorp
