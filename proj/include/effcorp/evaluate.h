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

#ifndef EFFCORP_EVALUATE_H_
#define EFFCORP_EVALUATE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "effcorp/concept.h"
#include "effcorp/model.h"
#include "effcorp/record.h"
#include "effcorp/text.h"

namespace effcorp {

// ---------------------------------------------------------------------------
// Baselines

struct MajorityResult {
  std::string label;
  double accuracy = 0.0;
};

// Modal label; ties go to the earlier class in DeriveClasses order.
// Throws ValidationError for no labels.
MajorityResult MajorityBaseline(const std::vector<std::string> &labels);

// Case-insensitive counts of "(positive|negative|no|neutral)
// (effect|impact|influence)" per polarity.
std::array<std::size_t, 3> CountSignalPhrases(std::string_view text);

// Polarity with the most signal phrases in the abstract body; `fallback`
// on a tie for the maximum or when there are no phrases.
std::string SignalPhraseBaseline(const AbstractRecord &record, const std::string &fallback);

// ---------------------------------------------------------------------------
// Best sentence

struct SentenceRef {
  std::size_t section = 0;
  std::size_t sentence = 0;

  bool operator==(const SentenceRef &) const = default;
  auto operator<=>(const SentenceRef &) const = default;
};

struct BestSentenceResult {
  SentenceRef ref;
  Span span;  // within the section text
  std::string text;
  std::size_t overlap = 0;
};

// Sentences of sections carrying a label in `scope`, split on the fly when
// a section has no sentence spans.
std::vector<std::pair<SentenceRef, Span>> ScopeSentences(const AbstractRecord &record,
                                                         LabelSet scope);

// Sentence in scope sharing the most distinct non-stopword tokens with the
// title; the earliest wins ties. nullopt when the scope has no sentences.
std::optional<BestSentenceResult> BestSentence(const AbstractRecord &record, LabelSet scope,
                                               const StopwordSet &stopwords);

LabelSet DefaultBestSentenceScope();

// ---------------------------------------------------------------------------
// Document text

struct TextScope {
  enum class Kind : uint8_t { kFull, kLabels, kBestSentence };
  Kind kind = Kind::kFull;
  LabelSet labels = DefaultBestSentenceScope();

  // "full", "labels", "labels:Results,Conclusions", "best-sentence" or
  // "best-sentence:Results".
  static std::optional<TextScope> Parse(std::string_view spec);
  std::string ToString() const;
};

std::string ScopeText(const AbstractRecord &record, const TextScope &scope,
                      bool include_title, const StopwordSet &stopwords);

// Polarity of the title's effect phrase for every record. Throws
// ValidationError naming the first record without one.
std::vector<std::string> TitleLabels(const std::vector<AbstractRecord> &records);

// pmid -> polarity from a gold JSONL export.
std::map<std::string, std::string> ParseGoldLabels(std::string_view contents);

// Labels for `records` from `gold`; throws ValidationError for a record
// missing from it.
std::vector<std::string> LabelsFromGold(const std::vector<AbstractRecord> &records,
                                        const std::map<std::string, std::string> &gold);

// ---------------------------------------------------------------------------
// Cross-validation

enum class Normalization : uint8_t {
  kNone,
  kTitleTags,  // title concepts replaced by X_i
  kConcepts,   // every dictionary mention replaced by its concept id
};

std::string_view NormalizationName(Normalization n);
std::optional<Normalization> ParseNormalization(std::string_view name);

// Every dictionary mention replaced by its concept id (as one token).
std::string ReplaceConcepts(std::string_view text, const ConceptDictionary &dict);
AbstractRecord ReplaceConcepts(const AbstractRecord &record, const ConceptDictionary &dict);

struct Experiment {
  std::string name;
  TextScope scope;
  bool include_title = false;
  bool remove_stopwords = false;
  Normalization normalization = Normalization::kNone;
  GroupFilter groups;
  ModelKind kind = ModelKind::kLinearSvm;
  TrainConfig train;
  std::size_t min_df = 1;
  std::size_t folds = 10;
  uint64_t seed = 42;
  std::optional<std::string> reference;  // key into ReferenceAccuracies()
};

nlohmann::json ExperimentToJson(const Experiment &experiment);
// Missing keys take their values from `defaults`.
Experiment ExperimentFromJson(const nlohmann::json &json, const Experiment &defaults = {});

struct EvalReport {
  Experiment experiment;
  std::vector<std::string> classes;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][predicted]
  std::vector<std::string> fold_model_digests;      // SHA-256 of each fold model
  std::size_t records = 0;
};

nlohmann::json EvalReportToJson(const EvalReport &report);

// Fold of every document: each class is shuffled with one generator seeded
// by `seed` (classes in DeriveClasses order) and dealt round robin, the
// dealing position carrying over from one class to the next. Throws
// ValidationError when folds < 2 or a class has fewer members than folds.
std::vector<std::size_t> StratifiedFolds(const std::vector<std::string> &labels,
                                         std::size_t folds, uint64_t seed);

// Trains one model per fold on the other folds. Vocabulary and model
// statistics come from training documents only.
EvalReport CrossValidate(const std::vector<std::vector<std::string>> &documents,
                         const std::vector<std::string> &labels,
                         const Experiment &experiment, unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Experiment matrix

struct ReferenceAccuracy {
  std::string key;
  std::string description;
  double percent;
};

// Accuracies reported for the original 750-abstract corpus. Printed for
// comparison, never asserted.
const std::vector<ReferenceAccuracy> &ReferenceAccuracies();

struct MatrixConfig {
  std::vector<Experiment> experiments;
  std::optional<std::string> dictionary;  // TSV path, needed for normalization
  std::optional<std::string> stopwords;   // defaults to the built-in list
};

// JSON: {"dictionary"?, "stopwords"?, "defaults"?: {...},
//        "experiments": [{...}, ...]}. Relative paths resolve against
// `base_dir`. `base` supplies values for keys that neither an experiment
// nor "defaults" sets.
MatrixConfig ParseMatrixConfig(const nlohmann::json &json, const std::string &base_dir,
                               const Experiment &base = {});
MatrixConfig LoadMatrixConfig(const std::string &path, const Experiment &base = {});

struct MatrixReport {
  MajorityResult majority;
  double signal_accuracy = 0.0;
  std::vector<EvalReport> experiments;
};

// Documents for one experiment.
std::vector<std::vector<std::string>> ExperimentDocuments(
    const std::vector<AbstractRecord> &records, const Experiment &experiment,
    const ConceptDictionary *dictionary, const StopwordSet &stopwords, unsigned jobs = 1);

MatrixReport RunMatrix(const std::vector<AbstractRecord> &records,
                       const std::vector<std::string> &labels, const MatrixConfig &config,
                       unsigned jobs = 1);

nlohmann::json MatrixReportToJson(const MatrixReport &report);
std::string MatrixReportToText(const MatrixReport &report);

}  // namespace effcorp

#endif  // EFFCORP_EVALUATE_H_
