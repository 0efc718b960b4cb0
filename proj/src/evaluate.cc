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

#include "effcorp/evaluate.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>

#include "effcorp/corpus_io.h"
#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/features.h"
#include "effcorp/parallel.h"
#include "effcorp/random.h"
#include "effcorp/segmenter.h"
#include "effcorp/title_grammar.h"
#include "effcorp/unicode.h"

namespace effcorp {

namespace {

bool WhitespaceBetween(std::string_view text, std::size_t begin, std::size_t end) {
  return Trim(text.substr(begin, end - begin)).empty();
}

std::string Percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", 100.0 * fraction);
  return buffer;
}

std::string Pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string PadLeft(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string ConceptToken(const std::string &id) {
  std::string token;
  for (char c : id) {
    bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    token += word ? c : '_';
  }
  return token;
}

}  // namespace

// ---------------------------------------------------------------------------
// Baselines

MajorityResult MajorityBaseline(const std::vector<std::string> &labels) {
  if (labels.empty()) throw ValidationError("majority baseline needs at least one label");
  MajorityResult best;
  std::size_t best_count = 0;
  for (const std::string &c : DeriveClasses(labels)) {
    std::size_t count = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), c));
    if (count > best_count) {
      best_count = count;
      best.label = c;
    }
  }
  best.accuracy = static_cast<double>(best_count) / static_cast<double>(labels.size());
  return best;
}

std::array<std::size_t, 3> CountSignalPhrases(std::string_view text) {
  std::array<std::size_t, 3> counts{};
  std::vector<Token> tokens = Tokenize(text);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (!WhitespaceBetween(text, tokens[i].span.end, tokens[i + 1].span.begin)) continue;
    if (auto match = MatchEffectBigram(tokens[i].normalized, tokens[i + 1].normalized)) {
      ++counts[static_cast<std::size_t>(match->first)];
    }
  }
  return counts;
}

std::string SignalPhraseBaseline(const AbstractRecord &record, const std::string &fallback) {
  std::array<std::size_t, 3> counts = CountSignalPhrases(AbstractBody(record));
  std::size_t top = *std::max_element(counts.begin(), counts.end());
  if (top == 0 || std::count(counts.begin(), counts.end(), top) > 1) return fallback;
  for (Polarity p : kAllPolarities) {
    if (counts[static_cast<std::size_t>(p)] == top) return std::string(PolarityName(p));
  }
  return fallback;
}

// ---------------------------------------------------------------------------
// Best sentence

LabelSet DefaultBestSentenceScope() {
  return LabelSet{CanonicalLabel::kResults, CanonicalLabel::kConclusions};
}

std::vector<std::pair<SentenceRef, Span>> ScopeSentences(const AbstractRecord &record,
                                                         LabelSet scope) {
  std::vector<std::pair<SentenceRef, Span>> out;
  for (std::size_t s = 0; s < record.sections.size(); ++s) {
    const Section &section = record.sections[s];
    if (!section.label_canonical.Intersects(scope)) continue;
    std::vector<Span> spans =
        section.sentence_spans.empty() ? SplitSentences(section.text) : section.sentence_spans;
    for (std::size_t i = 0; i < spans.size(); ++i) out.push_back({{s, i}, spans[i]});
  }
  return out;
}

std::optional<BestSentenceResult> BestSentence(const AbstractRecord &record, LabelSet scope,
                                               const StopwordSet &stopwords) {
  std::vector<std::string> title_tokens = TokenStrings(record.title, &stopwords);
  std::set<std::string> title(title_tokens.begin(), title_tokens.end());
  std::optional<BestSentenceResult> best;
  for (const auto &[ref, span] : ScopeSentences(record, scope)) {
    std::string_view text =
        std::string_view(record.sections[ref.section].text).substr(span.begin, span.length());
    std::set<std::string> sentence;
    for (std::string &t : TokenStrings(text, &stopwords)) sentence.insert(std::move(t));
    std::size_t overlap = 0;
    for (const std::string &t : sentence) overlap += title.count(t);
    if (!best || overlap > best->overlap) best = BestSentenceResult{ref, span, std::string(text), overlap};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Document text

std::optional<TextScope> TextScope::Parse(std::string_view spec) {
  TextScope scope;
  std::string_view head = spec.substr(0, spec.find(':'));
  std::optional<std::string_view> list;
  if (head.size() < spec.size()) list = spec.substr(head.size() + 1);
  if (head == "full" && !list) {
    scope.kind = Kind::kFull;
  } else if (head == "labels") {
    scope.kind = Kind::kLabels;
  } else if (head == "best-sentence") {
    scope.kind = Kind::kBestSentence;
  } else {
    return std::nullopt;
  }
  if (list) {
    auto labels = LabelSet::Parse(*list);
    if (!labels || labels->empty()) return std::nullopt;
    scope.labels = *labels;
  }
  return scope;
}

std::string TextScope::ToString() const {
  switch (kind) {
    case Kind::kFull: return "full";
    case Kind::kLabels: return "labels:" + labels.ToString();
    case Kind::kBestSentence: return "best-sentence:" + labels.ToString();
  }
  return "";
}

std::string ScopeText(const AbstractRecord &record, const TextScope &scope,
                      bool include_title, const StopwordSet &stopwords) {
  std::string text;
  switch (scope.kind) {
    case TextScope::Kind::kFull:
      text = AbstractBody(record);
      break;
    case TextScope::Kind::kLabels:
      text = SelectText(record, scope.labels);
      break;
    case TextScope::Kind::kBestSentence:
      if (auto best = BestSentence(record, scope.labels, stopwords)) text = best->text;
      break;
  }
  if (!include_title) return text;
  return text.empty() ? record.title : record.title + " " + text;
}

std::vector<std::string> TitleLabels(const std::vector<AbstractRecord> &records) {
  std::vector<std::string> labels;
  labels.reserve(records.size());
  for (const AbstractRecord &r : records) {
    auto parse = ParseTitle(r.title);
    if (!parse) throw ValidationError("record " + r.pmid + ": title has no effect phrase");
    labels.emplace_back(PolarityName(parse->polarity));
  }
  return labels;
}

std::map<std::string, std::string> ParseGoldLabels(std::string_view contents) {
  std::map<std::string, std::string> gold;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      std::string polarity = j.at("polarity").get<std::string>();
      if (!ParsePolarity(polarity)) throw ValidationError("unknown polarity " + polarity);
      gold[j.at("pmid").get<std::string>()] = polarity;
    } catch (const std::exception &e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  return gold;
}

std::vector<std::string> LabelsFromGold(const std::vector<AbstractRecord> &records,
                                        const std::map<std::string, std::string> &gold) {
  std::vector<std::string> labels;
  for (const AbstractRecord &r : records) {
    auto it = gold.find(r.pmid);
    if (it == gold.end()) throw ValidationError("no gold label for pmid " + r.pmid);
    labels.push_back(it->second);
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Cross-validation

std::string_view NormalizationName(Normalization n) {
  switch (n) {
    case Normalization::kNone: return "none";
    case Normalization::kTitleTags: return "title_tags";
    case Normalization::kConcepts: return "concepts";
  }
  return "";
}

std::optional<Normalization> ParseNormalization(std::string_view name) {
  if (name == "none") return Normalization::kNone;
  if (name == "title_tags") return Normalization::kTitleTags;
  if (name == "concepts") return Normalization::kConcepts;
  return std::nullopt;
}

std::string ReplaceConcepts(std::string_view text, const ConceptDictionary &dict) {
  std::string out;
  std::size_t copied = 0;
  for (const ConceptMention &m : Recognize(text, dict)) {
    out.append(text.substr(copied, m.span.begin - copied));
    out += ConceptToken(m.concept_id);
    copied = m.span.end;
  }
  out.append(text.substr(copied));
  return out;
}

AbstractRecord ReplaceConcepts(const AbstractRecord &record, const ConceptDictionary &dict) {
  AbstractRecord out = record;
  out.title = ReplaceConcepts(record.title, dict);
  for (Section &s : out.sections) s.text = ReplaceConcepts(s.text, dict);
  FillSentenceSpans(&out);
  return out;
}

nlohmann::json ExperimentToJson(const Experiment &e) {
  nlohmann::json j;
  j["name"] = e.name;
  j["scope"] = e.scope.ToString();
  j["include_title"] = e.include_title;
  j["remove_stopwords"] = e.remove_stopwords;
  j["normalization"] = std::string(NormalizationName(e.normalization));
  j["groups"] = e.groups ? nlohmann::json(*e.groups) : nlohmann::json(nullptr);
  j["model"] = std::string(ModelKindName(e.kind));
  j["alpha"] = e.train.alpha;
  j["lambda"] = e.train.lambda;
  j["epochs"] = e.train.epochs;
  j["min_df"] = e.min_df;
  j["folds"] = e.folds;
  j["seed"] = e.seed;
  j["reference"] = e.reference ? nlohmann::json(*e.reference) : nlohmann::json(nullptr);
  return j;
}

Experiment ExperimentFromJson(const nlohmann::json &j, const Experiment &defaults) {
  Experiment e = defaults;
  try {
    if (!j.is_object()) throw ValidationError("experiment must be a JSON object");
    static const std::set<std::string> kKeys = {
        "name", "scope", "include_title", "remove_stopwords", "normalization", "groups",
        "model", "alpha", "lambda", "epochs", "min_df", "folds", "seed", "reference"};
    for (const auto &item : j.items()) {
      if (!kKeys.contains(item.key())) {
        throw ValidationError("unknown experiment key '" + item.key() + "'");
      }
    }
    if (j.contains("name")) e.name = j["name"].get<std::string>();
    if (j.contains("scope")) {
      auto scope = TextScope::Parse(j["scope"].get<std::string>());
      if (!scope) throw ValidationError("bad scope " + j["scope"].dump());
      e.scope = *scope;
    }
    if (j.contains("include_title")) e.include_title = j["include_title"].get<bool>();
    if (j.contains("remove_stopwords")) e.remove_stopwords = j["remove_stopwords"].get<bool>();
    if (j.contains("normalization")) {
      auto n = ParseNormalization(j["normalization"].get<std::string>());
      if (!n) throw ValidationError("bad normalization " + j["normalization"].dump());
      e.normalization = *n;
    }
    if (j.contains("groups")) {
      if (j["groups"].is_null()) {
        e.groups.reset();
      } else {
        e.groups = j["groups"].get<std::set<std::string>>();
      }
    }
    if (j.contains("model")) {
      auto kind = ParseModelKind(j["model"].get<std::string>());
      if (!kind) throw ValidationError("bad model " + j["model"].dump());
      e.kind = *kind;
    }
    if (j.contains("alpha")) e.train.alpha = j["alpha"].get<double>();
    if (j.contains("lambda")) e.train.lambda = j["lambda"].get<double>();
    if (j.contains("epochs")) e.train.epochs = j["epochs"].get<int>();
    if (j.contains("min_df")) e.min_df = j["min_df"].get<std::size_t>();
    if (j.contains("folds")) e.folds = j["folds"].get<std::size_t>();
    if (j.contains("seed")) e.seed = j["seed"].get<uint64_t>();
    if (j.contains("reference")) {
      if (j["reference"].is_null()) {
        e.reference.reset();
      } else {
        e.reference = j["reference"].get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception &ex) {
    throw ValidationError(std::string("bad experiment: ") + ex.what());
  }
  e.train.seed = e.seed;
  return e;
}

nlohmann::json EvalReportToJson(const EvalReport &r) {
  return {{"experiment", ExperimentToJson(r.experiment)},
          {"protocol", "stratified " + std::to_string(r.experiment.folds) +
                           "-fold cross-validation, seed " + std::to_string(r.experiment.seed)},
          {"classes", r.classes},
          {"fold_accuracy", r.fold_accuracy},
          {"mean_accuracy", r.mean_accuracy},
          {"confusion", r.confusion},
          {"fold_model_digests", r.fold_model_digests},
          {"records", r.records}};
}

std::vector<std::size_t> StratifiedFolds(const std::vector<std::string> &labels,
                                         std::size_t folds, uint64_t seed) {
  if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> fold_of(labels.size(), 0);
  std::mt19937_64 rng(seed);
  std::size_t position = 0;
  for (const std::string &c : DeriveClasses(labels)) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    if (members.size() < folds) {
      throw ValidationError("class '" + c + "' has " + std::to_string(members.size()) +
                            " records, fewer than " + std::to_string(folds) + " folds");
    }
    SeededShuffle(&members, &rng);
    for (std::size_t k = 0; k < members.size(); ++k) fold_of[members[k]] = (position + k) % folds;
    position += members.size();
  }
  return fold_of;
}

EvalReport CrossValidate(const std::vector<std::vector<std::string>> &documents,
                         const std::vector<std::string> &labels,
                         const Experiment &experiment, unsigned jobs) {
  if (documents.size() != labels.size()) {
    throw ValidationError("documents and labels differ in length");
  }
  const std::size_t folds = experiment.folds;
  std::vector<std::size_t> fold_of = StratifiedFolds(labels, folds, experiment.seed);
  EvalReport report;
  report.experiment = experiment;
  report.classes = DeriveClasses(labels);
  report.records = documents.size();
  const std::size_t k = report.classes.size();
  auto class_index = [&](const std::string &label) {
    return static_cast<std::size_t>(
        std::find(report.classes.begin(), report.classes.end(), label) - report.classes.begin());
  };

  std::vector<std::vector<std::vector<std::size_t>>> confusion(
      folds, std::vector<std::vector<std::size_t>>(k, std::vector<std::size_t>(k, 0)));
  std::vector<double> accuracy(folds, 0.0);
  std::vector<std::string> digests(folds);
  ParallelFor(folds, jobs, [&](std::size_t f) {
    std::vector<std::vector<std::string>> train_docs;
    std::vector<std::string> train_labels;
    for (std::size_t i = 0; i < documents.size(); ++i) {
      if (fold_of[i] == f) continue;
      train_docs.push_back(documents[i]);
      train_labels.push_back(labels[i]);
    }
    Vocabulary vocabulary = Vocabulary::Build(train_docs, experiment.min_df);
    FeatureMode mode = ModeFor(experiment.kind);
    std::vector<FeatureVector> vectors;
    vectors.reserve(train_docs.size());
    for (const auto &doc : train_docs) vectors.push_back(Vectorize(doc, vocabulary, mode));
    TrainConfig config = experiment.train;
    config.seed = experiment.seed;
    Model model = Model::Train(experiment.kind, vectors, train_labels, std::move(vocabulary),
                               config, report.classes);
    digests[f] = Sha256Hex(model.Serialize());
    std::size_t correct = 0, total = 0;
    for (std::size_t i = 0; i < documents.size(); ++i) {
      if (fold_of[i] != f) continue;
      Prediction p = model.Predict(model.Featurize(documents[i]));
      ++confusion[f][class_index(labels[i])][class_index(p.label)];
      correct += p.label == labels[i];
      ++total;
    }
    accuracy[f] = static_cast<double>(correct) / static_cast<double>(total);
  });

  report.fold_accuracy = accuracy;
  report.fold_model_digests = digests;
  report.confusion.assign(k, std::vector<std::size_t>(k, 0));
  double sum = 0.0;
  for (std::size_t f = 0; f < folds; ++f) {
    sum += accuracy[f];
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) report.confusion[a][b] += confusion[f][a][b];
    }
  }
  report.mean_accuracy = sum / static_cast<double>(folds);
  return report;
}

// ---------------------------------------------------------------------------
// Experiment matrix

const std::vector<ReferenceAccuracy> &ReferenceAccuracies() {
  static const std::vector<ReferenceAccuracy> kReferences = {
      {"majority", "majority baseline", 57.87},
      {"signal", "signal-phrase baseline", 61.60},
      {"best_sentence", "best sentence", 74.50},
      {"full_svm", "full abstract, linear SVM", 76.27},
      {"full_groups", "full abstract, concepts limited by semantic group", 76.80},
      {"title_tags_svm", "title-concept tags, semantic groups, linear SVM", 78.80},
  };
  return kReferences;
}

MatrixConfig ParseMatrixConfig(const nlohmann::json &json, const std::string &base_dir,
                               const Experiment &base) {
  MatrixConfig config;
  auto resolve = [&](const std::string &path) {
    std::filesystem::path p(path);
    return p.is_absolute() || base_dir.empty() ? p.string()
                                               : (std::filesystem::path(base_dir) / p).string();
  };
  try {
    if (!json.is_object()) throw ValidationError("matrix config must be a JSON object");
    for (const auto &item : json.items()) {
      if (item.key() != "dictionary" && item.key() != "stopwords" && item.key() != "defaults" &&
          item.key() != "experiments") {
        throw ValidationError("unknown matrix config key '" + item.key() + "'");
      }
    }
    if (json.contains("dictionary")) config.dictionary = resolve(json["dictionary"].get<std::string>());
    if (json.contains("stopwords")) config.stopwords = resolve(json["stopwords"].get<std::string>());
    Experiment defaults = base;
    if (json.contains("defaults")) defaults = ExperimentFromJson(json["defaults"], base);
    const nlohmann::json &experiments = json.at("experiments");
    if (!experiments.is_array() || experiments.empty()) {
      throw ValidationError("matrix config needs a non-empty experiments array");
    }
    for (const nlohmann::json &e : experiments) {
      config.experiments.push_back(ExperimentFromJson(e, defaults));
      Experiment &added = config.experiments.back();
      if (added.name.empty()) added.name = "experiment_" + std::to_string(config.experiments.size());
      if (added.reference) {
        const auto &refs = ReferenceAccuracies();
        bool known = std::any_of(refs.begin(), refs.end(), [&](const ReferenceAccuracy &r) {
          return r.key == *added.reference;
        });
        if (!known) throw ValidationError("unknown reference '" + *added.reference + "'");
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("bad matrix config: ") + e.what());
  }
  return config;
}

MatrixConfig LoadMatrixConfig(const std::string &path, const Experiment &base) {
  std::string contents = ReadFile(path);
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(contents);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
  return ParseMatrixConfig(json, std::filesystem::path(path).parent_path().string(), base);
}

std::vector<std::vector<std::string>> ExperimentDocuments(
    const std::vector<AbstractRecord> &records, const Experiment &experiment,
    const ConceptDictionary *dictionary, const StopwordSet &stopwords, unsigned jobs) {
  if (experiment.normalization != Normalization::kNone && !dictionary) {
    throw ValidationError("experiment '" + experiment.name + "' needs a concept dictionary");
  }
  std::vector<std::vector<std::string>> documents(records.size());
  ParallelFor(records.size(), jobs, [&](std::size_t i) {
    AbstractRecord record;
    switch (experiment.normalization) {
      case Normalization::kNone: record = records[i]; break;
      case Normalization::kTitleTags: record = NormalizeRecord(records[i], *dictionary).record; break;
      case Normalization::kConcepts: record = ReplaceConcepts(records[i], *dictionary); break;
    }
    std::string text = ScopeText(record, experiment.scope, experiment.include_title, stopwords);
    documents[i] = BagOfWords(text, experiment.remove_stopwords ? &stopwords : nullptr);
  });
  return documents;
}

MatrixReport RunMatrix(const std::vector<AbstractRecord> &records,
                       const std::vector<std::string> &labels, const MatrixConfig &config,
                       unsigned jobs) {
  if (records.size() != labels.size()) throw ValidationError("records and labels differ in length");
  MatrixReport report;
  report.majority = MajorityBaseline(labels);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    hits += SignalPhraseBaseline(records[i], report.majority.label) == labels[i];
  }
  report.signal_accuracy = static_cast<double>(hits) / static_cast<double>(records.size());

  StopwordSet stopwords = config.stopwords ? LoadStopwords(*config.stopwords) : DefaultStopwords();
  std::map<std::string, ConceptDictionary> dictionaries;
  for (const Experiment &e : config.experiments) {
    const ConceptDictionary *dict = nullptr;
    if (e.normalization != Normalization::kNone) {
      if (!config.dictionary) {
        throw ValidationError("experiment '" + e.name + "' needs \"dictionary\" in the config");
      }
      std::string key = e.groups ? nlohmann::json(*e.groups).dump() : "*";
      auto it = dictionaries.find(key);
      if (it == dictionaries.end()) {
        it = dictionaries.emplace(key, ConceptDictionary::Load(*config.dictionary, e.groups)).first;
      }
      dict = &it->second;
    }
    auto documents = ExperimentDocuments(records, e, dict, stopwords, jobs);
    report.experiments.push_back(CrossValidate(documents, labels, e, jobs));
  }
  return report;
}

nlohmann::json MatrixReportToJson(const MatrixReport &report) {
  nlohmann::json references = nlohmann::json::array();
  for (const ReferenceAccuracy &r : ReferenceAccuracies()) {
    references.push_back({{"key", r.key}, {"description", r.description}, {"percent", r.percent}});
  }
  nlohmann::json experiments = nlohmann::json::array();
  for (const EvalReport &e : report.experiments) experiments.push_back(EvalReportToJson(e));
  return {{"baselines",
           {{"majority", {{"label", report.majority.label}, {"accuracy", report.majority.accuracy}}},
            {"signal_phrase", {{"accuracy", report.signal_accuracy}}}}},
          {"experiments", experiments},
          {"reference_accuracies", references}};
}

std::string MatrixReportToText(const MatrixReport &report) {
  auto reference = [](const std::optional<std::string> &key) -> std::string {
    if (!key) return "-";
    for (const ReferenceAccuracy &r : ReferenceAccuracies()) {
      if (r.key == *key) return Percent(r.percent / 100.0);
    }
    return "-";
  };
  const std::size_t w_name = 24, w_scope = 34, w_norm = 12, w_model = 16, w_num = 10;
  std::string out;
  auto row = [&](std::string name, std::string scope, std::string norm, std::string model,
                 std::string protocol, std::string acc, std::string ref) {
    out += Pad(std::move(name), w_name) + Pad(std::move(scope), w_scope) +
           Pad(std::move(norm), w_norm) + Pad(std::move(model), w_model) +
           Pad(std::move(protocol), w_num) + PadLeft(std::move(acc), w_num) +
           PadLeft(std::move(ref), w_num) + "\n";
  };
  row("experiment", "text scope", "norm", "model", "protocol", "acc %", "ref %");
  row("majority baseline", "-", "-", "-", "-", Percent(report.majority.accuracy),
      reference(std::string("majority")));
  row("signal-phrase baseline", "full", "-", "-", "-", Percent(report.signal_accuracy),
      reference(std::string("signal")));
  for (const EvalReport &e : report.experiments) {
    std::string scope = e.experiment.scope.ToString();
    if (e.experiment.include_title) scope += "+title";
    row(e.experiment.name, scope, std::string(NormalizationName(e.experiment.normalization)),
        std::string(ModelKindName(e.experiment.kind)),
        std::to_string(e.experiment.folds) + "cv/" + std::to_string(e.experiment.seed),
        Percent(e.mean_accuracy), reference(e.experiment.reference));
  }
  out += "\nref %: accuracies reported for the original 750-abstract corpus, for comparison only.\n";
  return out;
}

}  // namespace effcorp
