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

#ifndef EFFCORP_ANNOTATION_H_
#define EFFCORP_ANNOTATION_H_

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "effcorp/evaluate.h"
#include "effcorp/record.h"

namespace effcorp {

using RationaleSet = std::set<SentenceRef>;

struct AnnotationRecord {
  uint64_t seq = 0;
  std::string pmid;
  std::string annotator_id;
  Polarity polarity = Polarity::kNeutral;
  RationaleSet rationale_sentences;
  std::optional<std::string> note;
  std::string timestamp;  // ISO-8601 UTC

  bool operator==(const AnnotationRecord &) const = default;
};

nlohmann::json RationaleToJson(const RationaleSet &rationale);
RationaleSet RationaleFromJson(const nlohmann::json &json);

nlohmann::json AnnotationToJson(const AnnotationRecord &record);
// Accepts submissions without seq and timestamp. Throws ValidationError.
AnnotationRecord AnnotationFromJson(const nlohmann::json &json);

// Read-only view of the corpus used to validate sentence references.
// Records are kept in ascending pmid order with sentence spans filled in.
class CorpusIndex {
 public:
  CorpusIndex() = default;
  explicit CorpusIndex(std::vector<AbstractRecord> records);

  const AbstractRecord *Find(const std::string &pmid) const;
  const std::vector<AbstractRecord> &records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // Reason the reference is invalid for `pmid`, if it is.
  std::optional<std::string> CheckReference(const std::string &pmid, SentenceRef ref) const;

 private:
  std::vector<AbstractRecord> records_;
  std::map<std::string, std::size_t> index_;
};

struct AnnotationPolicy {
  std::optional<std::size_t> max_rationales;  // unlimited when unset
  bool polarity_only = false;                 // rationale may be empty
};

nlohmann::json AnnotationPolicyToJson(const AnnotationPolicy &policy);

using Clock = std::function<std::string()>;

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string UtcNow();

// Append-only annotation log. Every accepted annotation is written as one
// JSON line and flushed before it becomes visible to readers. Re-annotation
// supersedes: reads return the highest seq per (annotator, pmid).
class AnnotationStore {
 public:
  // In-memory store.
  explicit AnnotationStore(Clock clock = UtcNow);
  ~AnnotationStore();
  AnnotationStore(const AnnotationStore &) = delete;
  AnnotationStore &operator=(const AnnotationStore &) = delete;

  // Replays the log at `path` (created when missing) and appends to it.
  // Throws IoError, ParseError (location = line number), or
  // ValidationError when seq is not strictly increasing.
  static std::unique_ptr<AnnotationStore> Open(const std::string &path, Clock clock = UtcNow);

  // Replays a log without opening it for writing.
  static std::vector<AnnotationRecord> ReadLog(const std::string &path);

  // Checks a submission; returns the reasons it would be rejected.
  static std::vector<std::string> Check(const AnnotationRecord &submission,
                                        const CorpusIndex &corpus,
                                        const AnnotationPolicy &policy);

  // Assigns seq and timestamp and appends. Throws ValidationError listing
  // every reason for rejection; the store is unchanged then.
  AnnotationRecord Record(const AnnotationRecord &submission, const CorpusIndex &corpus,
                          const AnnotationPolicy &policy);

  std::vector<AnnotationRecord> Log() const;
  std::optional<AnnotationRecord> Latest(const std::string &annotator,
                                         const std::string &pmid) const;
  // Latest record per (annotator, pmid), ordered by pmid then annotator.
  std::vector<AnnotationRecord> LatestAll() const;
  std::vector<std::string> Annotators() const;
  std::size_t size() const;

 private:
  void Apply(AnnotationRecord record);

  mutable std::shared_mutex mu_;
  Clock clock_;
  std::FILE *file_ = nullptr;
  std::optional<std::string> path_;
  std::vector<AnnotationRecord> log_;
  std::map<std::pair<std::string, std::string>, std::size_t> latest_;  // (annotator, pmid)
  uint64_t last_seq_ = 0;
};

// Highest-seq record per (annotator, pmid) of a replayed log, ordered by
// pmid then annotator.
std::vector<AnnotationRecord> LatestOf(const std::vector<AnnotationRecord> &log);

// ---------------------------------------------------------------------------
// Agreement

// Cohen's kappa over aligned label lists. When chance agreement is 1 the
// result is 1 for perfect observed agreement. Throws ValidationError on
// empty or unequal-length input.
double CohenKappa(const std::vector<std::string> &a, const std::vector<std::string> &b);

struct RationaleAgreementResult {
  double exact_rate = 0.0;
  double mean_jaccard = 0.0;
};

// Jaccard of two empty sets counts as 1.
RationaleAgreementResult RationaleAgreement(const std::vector<RationaleSet> &a,
                                            const std::vector<RationaleSet> &b);

struct AgreementReport {
  std::string annotator_a;
  std::string annotator_b;
  std::size_t n_common = 0;
  // Unset when the annotators share no abstract.
  std::optional<double> kappa_polarity;
  std::optional<double> rationale_exact_rate;
  std::optional<double> rationale_mean_jaccard;
};

// Over the abstracts both annotators have a latest annotation for.
AgreementReport ComputeAgreement(const std::vector<AnnotationRecord> &latest,
                                 const std::string &a, const std::string &b);

nlohmann::json AgreementReportToJson(const AgreementReport &report);

// ---------------------------------------------------------------------------
// Gold export

struct GoldRow {
  std::string pmid;
  Polarity polarity = Polarity::kNeutral;
  RationaleSet rationale_sentences;  // union over annotators
  std::vector<std::string> annotators;
  bool unanimous = false;
};

// One row per annotated pmid in ascending pmid order. With
// `require_agreement`, pmids whose annotators disagree on polarity are
// dropped; otherwise the polarity of the latest annotation wins.
std::vector<GoldRow> ExportGold(const std::vector<AnnotationRecord> &latest,
                                bool require_agreement);

// Adds "title" and "rationale_text" when `corpus` has the record.
nlohmann::json GoldRowToJson(const GoldRow &row, const CorpusIndex *corpus = nullptr);

}  // namespace effcorp

#endif  // EFFCORP_ANNOTATION_H_
