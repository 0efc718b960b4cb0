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

#include "effcorp/annotation.h"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <mutex>

#include "effcorp/corpus_io.h"
#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/text.h"
#include "effcorp/unicode.h"

namespace effcorp {

// ---------------------------------------------------------------------------
// JSON

nlohmann::json RationaleToJson(const RationaleSet &rationale) {
  nlohmann::json out = nlohmann::json::array();
  for (const SentenceRef &ref : rationale) out.push_back({ref.section, ref.sentence});
  return out;
}

RationaleSet RationaleFromJson(const nlohmann::json &json) {
  if (!json.is_array()) throw ValidationError("rationale_sentences must be an array");
  RationaleSet out;
  for (const nlohmann::json &ref : json) {
    if (!ref.is_array() || ref.size() != 2 || !ref[0].is_number_unsigned() ||
        !ref[1].is_number_unsigned()) {
      throw ValidationError("sentence id must be [section, sentence], got " + ref.dump());
    }
    out.insert({ref[0].get<std::size_t>(), ref[1].get<std::size_t>()});
  }
  return out;
}

nlohmann::json AnnotationToJson(const AnnotationRecord &r) {
  return {{"seq", r.seq},
          {"pmid", r.pmid},
          {"annotator_id", r.annotator_id},
          {"polarity", std::string(PolarityName(r.polarity))},
          {"rationale_sentences", RationaleToJson(r.rationale_sentences)},
          {"note", r.note ? nlohmann::json(*r.note) : nlohmann::json(nullptr)},
          {"timestamp", r.timestamp}};
}

AnnotationRecord AnnotationFromJson(const nlohmann::json &j) {
  if (!j.is_object()) throw ValidationError("annotation must be a JSON object");
  static const std::set<std::string> kKeys = {"seq",   "pmid", "annotator_id", "polarity",
                                              "rationale_sentences", "note", "timestamp"};
  for (const auto &item : j.items()) {
    if (!kKeys.contains(item.key())) throw ValidationError("unknown field '" + item.key() + "'");
  }
  AnnotationRecord r;
  try {
    if (j.contains("seq")) r.seq = j["seq"].get<uint64_t>();
    const nlohmann::json &pmid = j.at("pmid");
    r.pmid = pmid.is_string() ? pmid.get<std::string>() : pmid.dump();
    r.annotator_id = j.at("annotator_id").get<std::string>();
    std::string polarity = j.at("polarity").get<std::string>();
    auto p = ParsePolarity(polarity);
    if (!p) throw ValidationError("unknown polarity '" + polarity + "'");
    r.polarity = *p;
    if (j.contains("rationale_sentences")) {
      r.rationale_sentences = RationaleFromJson(j["rationale_sentences"]);
    }
    if (j.contains("note") && !j["note"].is_null()) r.note = j["note"].get<std::string>();
    if (j.contains("timestamp")) r.timestamp = j["timestamp"].get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("bad annotation: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------
// CorpusIndex

CorpusIndex::CorpusIndex(std::vector<AbstractRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const AbstractRecord &a, const AbstractRecord &b) { return PmidLess(a.pmid, b.pmid); });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    AbstractRecord &r = records_[i];
    bool missing = std::any_of(r.sections.begin(), r.sections.end(), [](const Section &s) {
      return s.sentence_spans.empty() && !Trim(s.text).empty();
    });
    if (missing) FillSentenceSpans(&r);
    if (!index_.emplace(r.pmid, i).second) {
      throw ValidationError("duplicate pmid " + r.pmid + " in corpus");
    }
  }
}

const AbstractRecord *CorpusIndex::Find(const std::string &pmid) const {
  auto it = index_.find(pmid);
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::optional<std::string> CorpusIndex::CheckReference(const std::string &pmid,
                                                       SentenceRef ref) const {
  const AbstractRecord *r = Find(pmid);
  if (!r) return "unknown pmid " + pmid;
  std::string id = "[" + std::to_string(ref.section) + "," + std::to_string(ref.sentence) + "]";
  if (ref.section >= r->sections.size()) {
    return "sentence " + id + ": record " + pmid + " has " +
           std::to_string(r->sections.size()) + " sections";
  }
  std::size_t n = r->sections[ref.section].sentence_spans.size();
  if (ref.sentence >= n) {
    return "sentence " + id + ": section " + std::to_string(ref.section) + " has " +
           std::to_string(n) + " sentences";
  }
  return std::nullopt;
}

nlohmann::json AnnotationPolicyToJson(const AnnotationPolicy &policy) {
  return {{"max_rationales", policy.max_rationales ? nlohmann::json(*policy.max_rationales)
                                                   : nlohmann::json(nullptr)},
          {"polarity_only", policy.polarity_only}};
}

std::string UtcNow() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

// ---------------------------------------------------------------------------
// AnnotationStore

AnnotationStore::AnnotationStore(Clock clock) : clock_(std::move(clock)) {}

AnnotationStore::~AnnotationStore() {
  if (file_) std::fclose(file_);
}

std::vector<AnnotationRecord> AnnotationStore::ReadLog(const std::string &path) {
  std::vector<AnnotationRecord> records;
  if (!std::filesystem::exists(path)) return records;
  std::string contents = ReadFile(path);
  std::size_t line_no = 0;
  uint64_t last = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    AnnotationRecord r;
    try {
      r = AnnotationFromJson(nlohmann::json::parse(line));
    } catch (const std::exception &e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    if (r.seq <= last) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": seq " +
                            std::to_string(r.seq) + " does not increase");
    }
    last = r.seq;
    records.push_back(std::move(r));
  }
  return records;
}

std::unique_ptr<AnnotationStore> AnnotationStore::Open(const std::string &path, Clock clock) {
  auto store = std::make_unique<AnnotationStore>(std::move(clock));
  for (AnnotationRecord &r : ReadLog(path)) store->Apply(std::move(r));
  store->file_ = std::fopen(path.c_str(), "ab");
  if (!store->file_) {
    throw IoError("cannot open annotation log " + path + ": " + std::strerror(errno));
  }
  store->path_ = path;
  return store;
}

std::vector<std::string> AnnotationStore::Check(const AnnotationRecord &s,
                                                const CorpusIndex &corpus,
                                                const AnnotationPolicy &policy) {
  std::vector<std::string> reasons;
  if (Trim(s.annotator_id).empty()) reasons.push_back("annotator_id is required");
  if (!corpus.Find(s.pmid)) {
    reasons.push_back("unknown pmid " + s.pmid);
    return reasons;
  }
  for (const SentenceRef &ref : s.rationale_sentences) {
    if (auto reason = corpus.CheckReference(s.pmid, ref)) reasons.push_back(*reason);
  }
  if (s.rationale_sentences.empty() && !policy.polarity_only) {
    reasons.push_back("at least one rationale sentence is required");
  }
  if (policy.max_rationales && s.rationale_sentences.size() > *policy.max_rationales) {
    reasons.push_back("at most " + std::to_string(*policy.max_rationales) +
                      " rationale sentences allowed, got " +
                      std::to_string(s.rationale_sentences.size()));
  }
  return reasons;
}

AnnotationRecord AnnotationStore::Record(const AnnotationRecord &submission,
                                         const CorpusIndex &corpus,
                                         const AnnotationPolicy &policy) {
  std::vector<std::string> reasons = Check(submission, corpus, policy);
  if (!reasons.empty()) {
    std::string message = "annotation rejected: " + reasons.front();
    for (std::size_t i = 1; i < reasons.size(); ++i) message += "; " + reasons[i];
    throw ValidationError(message, reasons);
  }
  std::unique_lock lock(mu_);
  AnnotationRecord r = submission;
  r.seq = last_seq_ + 1;
  r.timestamp = clock_();
  if (file_) {
    std::string line = AnnotationToJson(r).dump() + "\n";
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() ||
        std::fflush(file_) != 0) {
      throw IoError("cannot append to annotation log " + path_.value_or("") + ": " +
                    std::strerror(errno));
    }
  }
  Apply(r);
  return r;
}

void AnnotationStore::Apply(AnnotationRecord record) {
  latest_[{record.annotator_id, record.pmid}] = log_.size();
  last_seq_ = record.seq;
  log_.push_back(std::move(record));
}

std::vector<AnnotationRecord> AnnotationStore::Log() const {
  std::shared_lock lock(mu_);
  return log_;
}

std::optional<AnnotationRecord> AnnotationStore::Latest(const std::string &annotator,
                                                        const std::string &pmid) const {
  std::shared_lock lock(mu_);
  auto it = latest_.find({annotator, pmid});
  if (it == latest_.end()) return std::nullopt;
  return log_[it->second];
}

namespace {

void SortByPmid(std::vector<AnnotationRecord> *records) {
  std::sort(records->begin(), records->end(),
            [](const AnnotationRecord &a, const AnnotationRecord &b) {
              if (a.pmid != b.pmid) return PmidLess(a.pmid, b.pmid);
              return a.annotator_id < b.annotator_id;
            });
}

}  // namespace

std::vector<AnnotationRecord> AnnotationStore::LatestAll() const {
  std::vector<AnnotationRecord> out;
  {
    std::shared_lock lock(mu_);
    for (const auto &[key, index] : latest_) out.push_back(log_[index]);
  }
  SortByPmid(&out);
  return out;
}

std::vector<AnnotationRecord> LatestOf(const std::vector<AnnotationRecord> &log) {
  std::map<std::pair<std::string, std::string>, const AnnotationRecord *> latest;
  for (const AnnotationRecord &r : log) {
    const AnnotationRecord *&slot = latest[{r.annotator_id, r.pmid}];
    if (!slot || slot->seq < r.seq) slot = &r;
  }
  std::vector<AnnotationRecord> out;
  for (const auto &[key, r] : latest) out.push_back(*r);
  SortByPmid(&out);
  return out;
}

std::vector<std::string> AnnotationStore::Annotators() const {
  std::shared_lock lock(mu_);
  std::set<std::string> names;
  for (const auto &[key, index] : latest_) names.insert(key.first);
  return {names.begin(), names.end()};
}

std::size_t AnnotationStore::size() const {
  std::shared_lock lock(mu_);
  return log_.size();
}

// ---------------------------------------------------------------------------
// Agreement

double CohenKappa(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  if (a.size() != b.size()) {
    throw ValidationError("label lists differ in length: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  if (a.empty()) throw ValidationError("kappa needs at least one label pair");
  std::map<std::string, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    agree += a[i] == b[i];
  }
  const double n = static_cast<double>(a.size());
  std::size_t chance = 0;
  for (const auto &[label, counts] : marginals) chance += counts.first * counts.second;
  const double p_o = static_cast<double>(agree) / n;
  const double p_e = static_cast<double>(chance) / (n * n);
  if (chance == a.size() * a.size()) {
    if (agree == a.size()) return 1.0;
    throw ValidationError("kappa undefined: chance agreement is 1 but observed agreement is not");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

RationaleAgreementResult RationaleAgreement(const std::vector<RationaleSet> &a,
                                            const std::vector<RationaleSet> &b) {
  if (a.size() != b.size()) throw ValidationError("rationale lists differ in length");
  if (a.empty()) throw ValidationError("rationale agreement needs at least one pair");
  std::size_t exact = 0;
  double jaccard = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    exact += a[i] == b[i];
    std::size_t common = 0;
    for (const SentenceRef &ref : a[i]) common += b[i].count(ref);
    std::size_t united = a[i].size() + b[i].size() - common;
    jaccard += united == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(united);
  }
  const double n = static_cast<double>(a.size());
  return {static_cast<double>(exact) / n, jaccard / n};
}

AgreementReport ComputeAgreement(const std::vector<AnnotationRecord> &latest,
                                 const std::string &a, const std::string &b) {
  AgreementReport report;
  report.annotator_a = a;
  report.annotator_b = b;
  std::map<std::string, const AnnotationRecord *> of_a, of_b;
  for (const AnnotationRecord &r : latest) {
    for (auto [name, side] : {std::pair{&a, &of_a}, std::pair{&b, &of_b}}) {
      if (r.annotator_id != *name) continue;
      const AnnotationRecord *&slot = (*side)[r.pmid];
      if (!slot || slot->seq < r.seq) slot = &r;
    }
  }
  std::vector<std::string> common;
  for (const auto &[pmid, r] : of_a) {
    if (of_b.contains(pmid)) common.push_back(pmid);
  }
  std::sort(common.begin(), common.end(), PmidLess);
  report.n_common = common.size();
  if (common.empty()) return report;
  std::vector<std::string> pa, pb;
  std::vector<RationaleSet> ra, rb;
  for (const std::string &pmid : common) {
    pa.emplace_back(PolarityName(of_a[pmid]->polarity));
    pb.emplace_back(PolarityName(of_b[pmid]->polarity));
    ra.push_back(of_a[pmid]->rationale_sentences);
    rb.push_back(of_b[pmid]->rationale_sentences);
  }
  report.kappa_polarity = CohenKappa(pa, pb);
  RationaleAgreementResult rationale = RationaleAgreement(ra, rb);
  report.rationale_exact_rate = rationale.exact_rate;
  report.rationale_mean_jaccard = rationale.mean_jaccard;
  return report;
}

nlohmann::json AgreementReportToJson(const AgreementReport &r) {
  auto opt = [](const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"annotator_a", r.annotator_a},
          {"annotator_b", r.annotator_b},
          {"n_common", r.n_common},
          {"kappa_polarity", opt(r.kappa_polarity)},
          {"rationale_exact_rate", opt(r.rationale_exact_rate)},
          {"rationale_mean_jaccard", opt(r.rationale_mean_jaccard)}};
}

// ---------------------------------------------------------------------------
// Gold export

std::vector<GoldRow> ExportGold(const std::vector<AnnotationRecord> &latest,
                                bool require_agreement) {
  std::map<std::string, std::vector<const AnnotationRecord *>> by_pmid;
  for (const AnnotationRecord &r : latest) by_pmid[r.pmid].push_back(&r);
  std::vector<std::string> pmids;
  for (const auto &[pmid, records] : by_pmid) pmids.push_back(pmid);
  std::sort(pmids.begin(), pmids.end(), PmidLess);

  std::vector<GoldRow> rows;
  for (const std::string &pmid : pmids) {
    const auto &records = by_pmid[pmid];
    const AnnotationRecord *newest = records.front();
    bool unanimous = true;
    GoldRow row;
    row.pmid = pmid;
    std::set<std::string> annotators;
    for (const AnnotationRecord *r : records) {
      if (r->seq > newest->seq) newest = r;
      unanimous = unanimous && r->polarity == records.front()->polarity;
      annotators.insert(r->annotator_id);
      row.rationale_sentences.insert(r->rationale_sentences.begin(), r->rationale_sentences.end());
    }
    if (require_agreement && !unanimous) continue;
    row.polarity = newest->polarity;
    row.annotators.assign(annotators.begin(), annotators.end());
    row.unanimous = unanimous;
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json GoldRowToJson(const GoldRow &row, const CorpusIndex *corpus) {
  nlohmann::json j = {{"pmid", row.pmid},
                      {"polarity", std::string(PolarityName(row.polarity))},
                      {"rationale_sentences", RationaleToJson(row.rationale_sentences)},
                      {"annotators", row.annotators},
                      {"unanimous", row.unanimous}};
  const AbstractRecord *record = corpus ? corpus->Find(row.pmid) : nullptr;
  if (record) {
    j["title"] = record->title;
    nlohmann::json texts = nlohmann::json::array();
    for (const SentenceRef &ref : row.rationale_sentences) {
      if (corpus->CheckReference(row.pmid, ref)) continue;
      const Section &s = record->sections[ref.section];
      const Span &span = s.sentence_spans[ref.sentence];
      texts.push_back(s.text.substr(span.begin, span.length()));
    }
    j["rationale_text"] = texts;
  }
  return j;
}

}  // namespace effcorp
