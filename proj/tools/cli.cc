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

#include "cli.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "effcorp/annotation.h"
#include "effcorp/concept.h"
#include "effcorp/corpus_io.h"
#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/evaluate.h"
#include "effcorp/features.h"
#include "effcorp/model.h"
#include "effcorp/parallel.h"
#include "effcorp/pubmed_xml.h"
#include "effcorp/record.h"
#include "effcorp/segmenter.h"
#include "effcorp/service.h"
#include "effcorp/text.h"
#include "effcorp/title_grammar.h"
#include "effcorp/unicode.h"

namespace effcorp::cli {
namespace {

struct Globals {
  unsigned jobs = 1;
  uint64_t seed = 42;
};

std::string JsonLines(const std::vector<nlohmann::json> &rows) {
  std::string out;
  for (const nlohmann::json &row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::string> SplitList(const std::string &list) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    std::string trimmed(Trim(item));
    if (!trimmed.empty()) out.push_back(trimmed);
  }
  return out;
}

GroupFilter ParseGroups(const std::optional<std::string> &list) {
  if (!list) return std::nullopt;
  auto items = SplitList(*list);
  if (items.empty()) throw ValidationError("--groups names no group");
  return std::set<std::string>(items.begin(), items.end());
}

ExclusionLexicon LexiconFrom(const std::optional<std::string> &path) {
  return path ? ExclusionLexicon::Load(*path) : ExclusionLexicon::Default();
}

std::vector<std::string> LabelsFor(const std::vector<AbstractRecord> &records,
                                   const std::optional<std::string> &gold_path) {
  if (gold_path) return LabelsFromGold(records, ParseGoldLabels(ReadFile(*gold_path)));
  return TitleLabels(records);
}

void PrintManifest(std::ostream &out, const CorpusManifest &manifest, nlohmann::json extra = {}) {
  nlohmann::json j = {{"manifest", ManifestToJson(manifest)}};
  if (extra.is_object()) j.update(extra);
  out << j.dump() << '\n';
}

std::string FormatPercent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f%%", 100.0 * fraction);
  return buffer;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions {
  std::vector<std::string> inputs;
  std::string out;
  bool english_only = false;
  std::optional<std::string> skipped;
};

bool LooksLikeXml(std::string_view bytes) {
  for (char c : bytes) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '<';
  }
  return false;
}

int Ingest(const IngestOptions &o, std::ostream &out) {
  std::vector<AbstractRecord> records;
  std::vector<nlohmann::json> skipped;
  std::set<std::string> seen;
  auto skip = [&](const std::string &file, std::optional<std::size_t> index,
                  const std::string &pmid, const std::string &reason) {
    nlohmann::json row = {{"file", file}, {"pmid", pmid}, {"reason", reason}};
    row["article_index"] = index ? nlohmann::json(*index) : nlohmann::json(nullptr);
    skipped.push_back(std::move(row));
  };
  for (const std::string &path : o.inputs) {
    std::string bytes = MaybeGunzip(ReadFile(path));
    std::vector<AbstractRecord> batch;
    if (LooksLikeXml(bytes)) {
      PubmedParseResult parsed = ParsePubmedXml(bytes);
      for (const SkippedArticle &s : parsed.skipped) skip(path, s.article_index, s.pmid, s.reason);
      batch = std::move(parsed.records);
    } else {
      batch = ParseCorpus(bytes);
    }
    for (AbstractRecord &r : batch) {
      if (!seen.insert(r.pmid).second) {
        skip(path, std::nullopt, r.pmid, "duplicate pmid");
        continue;
      }
      if (o.english_only && !IsEnglish(r)) {
        skip(path, std::nullopt, r.pmid, "language " + r.language.value_or("unknown"));
        continue;
      }
      records.push_back(std::move(r));
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const AbstractRecord &a, const AbstractRecord &b) {
    return PmidLess(a.pmid, b.pmid);
  });
  CorpusManifest manifest = WriteCorpus(records, o.out, CorpusStage::kRaw);
  if (o.skipped) WriteFile(*o.skipped, JsonLines(skipped));
  PrintManifest(out, manifest, {{"skipped", skipped.size()}});
  return 0;
}

// ---------------------------------------------------------------------------
// filter, tabulate

struct FilterOptions {
  std::string in;
  int stage = 3;
  std::optional<std::string> lexicon;
  std::string out;
  std::optional<std::string> audit;
};

int Filter(const FilterOptions &o, const Globals &g, std::ostream &out) {
  ExclusionLexicon lexicon = LexiconFrom(o.lexicon);
  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  FilterStage target = static_cast<FilterStage>(o.stage);
  FilterResult result = FilterCorpus(records, target, lexicon, g.jobs);
  static constexpr CorpusStage kStages[] = {CorpusStage::kRaw, CorpusStage::kStage1,
                                            CorpusStage::kStage2, CorpusStage::kStage3};
  CorpusManifest manifest = WriteCorpus(result.kept, o.out, kStages[o.stage]);
  if (o.audit) {
    std::vector<nlohmann::json> rows;
    for (const FilterAudit &a : result.audit) rows.push_back(FilterAuditToJson(a));
    WriteFile(*o.audit, JsonLines(rows));
  }
  PrintManifest(out, manifest, {{"input", records.size()}, {"kept", result.kept.size()}});
  return 0;
}

struct TabulateOptions {
  std::string in;
  std::optional<std::string> lexicon;
  std::string format = "text";
  std::optional<std::string> json;
};

int TabulateVerb(const TabulateOptions &o, std::ostream &out) {
  ExclusionLexicon lexicon = LexiconFrom(o.lexicon);
  CountTable table = Tabulate(ReadCorpus(o.in), lexicon);
  if (o.format == "json") {
    out << table.ToJson().dump(2) << '\n';
  } else {
    out << table.ToText();
  }
  if (o.json) WriteFile(*o.json, table.ToJson().dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// segment, abbrev

struct SegmentOptions {
  std::string in;
  std::string out;
  std::optional<std::string> label_map;
  std::string combined = "union";
};

int Segment(const SegmentOptions &o, const Globals &g, std::ostream &out) {
  LabelMap map = o.label_map ? LabelMap::Load(*o.label_map) : LabelMap::Default();
  map.set_combined_mode(o.combined == "exclusive" ? LabelMap::CombinedMode::kExclusive
                                                  : LabelMap::CombinedMode::kUnion);
  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  std::vector<AbstractRecord> segmented(records.size());
  ParallelFor(records.size(), g.jobs,
              [&](std::size_t i) { segmented[i] = DetectSections(records[i], map); });
  PrintManifest(out, WriteCorpus(segmented, o.out, CorpusStage::kSegmented));
  return 0;
}

struct AbbrevOptions {
  std::string in;
  std::string out;
};

int Abbrev(const AbbrevOptions &o, const Globals &g, std::ostream &out) {
  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  std::vector<std::vector<AbbrevPair>> pairs(records.size());
  ParallelFor(records.size(), g.jobs,
              [&](std::size_t i) { pairs[i] = ExtractAbbreviations(records[i]); });
  std::string tsv;
  std::size_t n = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const AbbrevPair &p : pairs[i]) {
      tsv += records[i].pmid + '\t' + p.short_form + '\t' + p.long_form + '\n';
      ++n;
    }
  }
  WriteFile(o.out, tsv);
  out << nlohmann::json({{"records", records.size()}, {"pairs", n}}).dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// normalize

struct NormalizeOptions {
  std::string in;
  std::string dict;
  std::optional<std::string> groups;
  std::optional<std::string> import;
  std::string out;
  std::string audit;
};

int NormalizeVerb(const NormalizeOptions &o, const Globals &g, std::ostream &out,
                  std::ostream &err) {
  GroupFilter groups = ParseGroups(o.groups);
  std::vector<std::string> warnings;
  ConceptDictionary dict = ConceptDictionary::Load(o.dict, groups, &warnings);
  for (const std::string &w : warnings) err << "warning: " << w << '\n';
  std::map<std::string, std::vector<ExternalAnnotation>> imported;
  if (o.import) {
    for (ExternalAnnotation &a : ParseExternalAnnotations(ReadFile(*o.import))) {
      imported[a.pmid].push_back(std::move(a));
    }
  }
  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  for (const auto &[pmid, anns] : imported) {
    bool known = std::any_of(records.begin(), records.end(),
                             [&](const AbstractRecord &r) { return r.pmid == pmid; });
    if (!known) err << "warning: annotations for unknown pmid " << pmid << " ignored\n";
  }
  std::vector<NormalizeResult> results(records.size());
  ParallelFor(records.size(), g.jobs, [&](std::size_t i) {
    auto it = imported.find(records[i].pmid);
    if (it == imported.end()) {
      results[i] = NormalizeRecord(records[i], dict);
    } else {
      results[i] = NormalizeRecord(records[i], WithAnnotations(dict, records[i], it->second, groups));
    }
  });
  std::vector<AbstractRecord> normalized;
  std::vector<nlohmann::json> audit;
  for (NormalizeResult &r : results) {
    normalized.push_back(std::move(r.record));
    for (const TagAudit &a : r.audit) audit.push_back(TagAuditToJson(a));
  }
  CorpusManifest manifest = WriteCorpus(normalized, o.out, CorpusStage::kNormalized);
  WriteFile(o.audit, JsonLines(audit));
  PrintManifest(out, manifest, {{"replacements", audit.size()}});
  return 0;
}

// ---------------------------------------------------------------------------
// train, predict

struct TrainOptions {
  std::string in;
  std::string text_scope = "full";
  std::string model_kind = "svm";
  std::string out;
  bool include_title = false;
  bool remove_stopwords = false;
  std::optional<std::string> labels;
  std::optional<std::string> stopwords;
  TrainConfig config;
  std::size_t min_df = 1;
};

nlohmann::json StopwordsJson(const std::optional<std::string> &path) {
  if (!path) return nullptr;
  StopwordSet set = LoadStopwords(*path);
  std::vector<std::string> words(set.begin(), set.end());
  std::sort(words.begin(), words.end());
  return words;
}

StopwordSet StopwordsFromJson(const nlohmann::json &j) {
  if (j.is_null()) return DefaultStopwords();
  auto words = j.get<std::vector<std::string>>();
  return StopwordSet(words.begin(), words.end());
}

int Train(const TrainOptions &o, const Globals &g, std::ostream &out) {
  auto scope = TextScope::Parse(o.text_scope);
  if (!scope) throw ValidationError("unknown text scope '" + o.text_scope + "'");
  auto kind = ParseModelKind(o.model_kind);
  if (!kind) throw ValidationError("unknown model kind '" + o.model_kind + "'");
  nlohmann::json stopword_list = StopwordsJson(o.stopwords);
  StopwordSet stopwords = StopwordsFromJson(stopword_list);

  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  std::vector<std::string> labels = LabelsFor(records, o.labels);
  Experiment e;
  e.name = "train";
  e.scope = *scope;
  e.include_title = o.include_title;
  e.remove_stopwords = o.remove_stopwords;
  auto documents = ExperimentDocuments(records, e, nullptr, stopwords, g.jobs);

  Vocabulary vocab = Vocabulary::Build(documents, o.min_df);
  std::vector<FeatureVector> vectors;
  vectors.reserve(documents.size());
  for (const auto &doc : documents) vectors.push_back(Vectorize(doc, vocab, ModeFor(*kind)));
  TrainConfig config = o.config;
  config.seed = g.seed;
  Model model = Model::Train(*kind, vectors, labels, std::move(vocab), config);
  model.set_preprocessing({{"text_scope", scope->ToString()},
                           {"include_title", o.include_title},
                           {"remove_stopwords", o.remove_stopwords},
                           {"stopwords", stopword_list}});
  model.Save(o.out);

  std::size_t correct = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    correct += model.Predict(vectors[i]).label == labels[i];
  }
  out << nlohmann::json({{"kind", ModelKindName(*kind)},
                         {"classes", model.classes()},
                         {"documents", vectors.size()},
                         {"vocabulary", model.vocabulary().size()},
                         {"training_accuracy", static_cast<double>(correct) / vectors.size()},
                         {"model_sha256", Sha256Hex(model.Serialize())}})
             .dump()
      << '\n';
  return 0;
}

struct PredictOptions {
  std::string model;
  std::string in;
  std::string out;
};

int Predict(const PredictOptions &o, const Globals &g, std::ostream &out) {
  Model model = Model::Load(o.model);
  const nlohmann::json &pre = model.preprocessing();
  Experiment e;
  try {
    auto scope = TextScope::Parse(pre.value("text_scope", std::string("full")));
    if (!scope) throw ValidationError("model has an unknown text scope");
    e.scope = *scope;
    e.include_title = pre.value("include_title", false);
    e.remove_stopwords = pre.value("remove_stopwords", false);
  } catch (const nlohmann::json::exception &ex) {
    throw ValidationError(std::string("bad preprocessing block in model: ") + ex.what());
  }
  StopwordSet stopwords = StopwordsFromJson(pre.value("stopwords", nlohmann::json(nullptr)));

  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  auto documents = ExperimentDocuments(records, e, nullptr, stopwords, g.jobs);
  std::vector<Prediction> predictions(records.size());
  ParallelFor(records.size(), g.jobs, [&](std::size_t i) {
    predictions[i] = model.Predict(model.Featurize(documents[i]));
  });
  std::string tsv = "pmid\tlabel";
  for (const std::string &c : model.classes()) tsv += '\t' + c;
  tsv += '\n';
  char buffer[40];
  for (std::size_t i = 0; i < records.size(); ++i) {
    tsv += records[i].pmid + '\t' + predictions[i].label;
    for (double s : predictions[i].scores) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", s);
      tsv += '\t';
      tsv += buffer;
    }
    tsv += '\n';
  }
  WriteFile(o.out, tsv);
  out << nlohmann::json({{"records", records.size()}}).dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// baseline, eval

struct BaselineOptions {
  std::string in;
  std::string kind;
  std::optional<std::string> labels;
  std::optional<std::string> json;
};

int Baseline(const BaselineOptions &o, std::ostream &out) {
  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  std::vector<std::string> labels = LabelsFor(records, o.labels);
  MajorityResult majority = MajorityBaseline(labels);
  std::size_t correct = 0;
  std::string predicts;
  if (o.kind == "majority") {
    correct = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), majority.label));
    predicts = majority.label;
  } else {
    for (std::size_t i = 0; i < records.size(); ++i) {
      correct += SignalPhraseBaseline(records[i], majority.label) == labels[i];
    }
    predicts = "signal phrases, fallback " + majority.label;
  }
  double accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  out << o.kind << " baseline (" << predicts << "): accuracy " << FormatPercent(accuracy) << " ("
      << correct << "/" << labels.size() << ")\n";
  if (o.json) {
    nlohmann::json j = {{"kind", o.kind},          {"accuracy", accuracy},
                        {"correct", correct},      {"total", labels.size()},
                        {"fallback", majority.label}};
    WriteFile(*o.json, j.dump(2) + "\n");
  }
  return 0;
}

struct EvalOptions {
  std::string in;
  std::string matrix;
  std::optional<std::string> labels;
  std::optional<std::string> out;
};

int Eval(const EvalOptions &o, const Globals &g, std::ostream &out) {
  Experiment base;
  base.seed = g.seed;
  base.train.seed = g.seed;
  MatrixConfig config = LoadMatrixConfig(o.matrix, base);
  std::vector<AbstractRecord> records = ReadCorpus(o.in);
  std::vector<std::string> labels = LabelsFor(records, o.labels);
  MatrixReport report = RunMatrix(records, labels, config, g.jobs);
  out << MatrixReportToText(report);
  if (o.out) WriteFile(*o.out, MatrixReportToJson(report).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// serve

struct ServeOptions {
  std::string in;
  std::string store;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> ui_dir;
  std::optional<std::size_t> max_rationales;
  bool polarity_only = false;
  bool no_suggestions = false;
  bool hide_title_phrase = false;
  std::optional<uint64_t> shuffle_seed;
};

int Serve(const ServeOptions &o, std::ostream &out) {
  ServiceConfig config;
  config.policy.max_rationales = o.max_rationales;
  config.policy.polarity_only = o.polarity_only;
  config.suggestions = !o.no_suggestions;
  config.show_title_phrase = !o.hide_title_phrase;
  config.shuffle_seed = o.shuffle_seed;
  config.ui_dir = o.ui_dir;

  CorpusIndex corpus(ReadCorpus(o.in));
  std::unique_ptr<AnnotationStore> store = AnnotationStore::Open(o.store);
  AnnotationService service(std::move(corpus), store.get(), config);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  HttpServer server(&service);
  int port = server.Bind(o.host, o.port);
  out << "listening on http://" << o.host << ":" << port << std::endl;

  std::atomic<bool> signalled{false};
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    server.Stop();
  });
  server.Listen();
  if (!signalled) pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "stopped after " << store->size() << " annotations" << std::endl;
  return 0;
}

// ---------------------------------------------------------------------------
// agreement, export-gold

struct AgreementOptions {
  std::string store;
  std::string annotators;
};

int AgreementVerb(const AgreementOptions &o, std::ostream &out) {
  std::vector<std::string> ids = SplitList(o.annotators);
  if (ids.size() != 2) throw ValidationError("--annotators takes exactly two ids, as a,b");
  auto latest = LatestOf(AnnotationStore::ReadLog(o.store));
  out << AgreementReportToJson(ComputeAgreement(latest, ids[0], ids[1])).dump(2) << '\n';
  return 0;
}

struct ExportOptions {
  std::string store;
  std::string policy;
  std::string out;
  std::optional<std::string> in;
};

int ExportGoldVerb(const ExportOptions &o, std::ostream &out) {
  std::optional<CorpusIndex> corpus;
  if (o.in) corpus.emplace(ReadCorpus(*o.in));
  auto latest = LatestOf(AnnotationStore::ReadLog(o.store));
  std::vector<GoldRow> rows = ExportGold(latest, o.policy == "require-agreement");
  std::vector<nlohmann::json> lines;
  for (const GoldRow &row : rows) lines.push_back(GoldRowToJson(row, corpus ? &*corpus : nullptr));
  WriteFile(o.out, JsonLines(lines));
  out << nlohmann::json({{"rows", rows.size()}, {"policy", o.policy}}).dump() << '\n';
  return 0;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Effect-phrase corpus construction and polarity classification", "effcorp"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--jobs", globals.jobs, "Worker threads for record-parallel steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", globals.seed, "Seed for every random choice")->capture_default_str();

  IngestOptions ingest;
  CLI::App *ingest_cmd = app.add_subcommand("ingest", "Parse PubMed XML or JSONL into a corpus");
  ingest_cmd->add_option("--in", ingest.inputs, "Input files (XML, XML.gz or JSONL)")->required();
  ingest_cmd->add_option("--out", ingest.out, "Output corpus JSONL")->required();
  ingest_cmd->add_flag("--english-only", ingest.english_only, "Drop records not flagged English");
  ingest_cmd->add_option("--skipped", ingest.skipped, "Write skipped articles as JSONL");

  FilterOptions filter;
  CLI::App *filter_cmd = app.add_subcommand("filter", "Keep records whose title reaches a stage");
  filter_cmd->add_option("--in", filter.in, "Input corpus JSONL")->required();
  filter_cmd->add_option("--stage", filter.stage, "Stage 1, 2 or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  filter_cmd->add_option("--lexicon", filter.lexicon, "Exclusion words, one per line");
  filter_cmd->add_option("--out", filter.out, "Output corpus JSONL")->required();
  filter_cmd->add_option("--audit", filter.audit, "Per-record stage decisions as JSONL");

  TabulateOptions tabulate;
  CLI::App *tabulate_cmd = app.add_subcommand("tabulate", "Count titles per stage, polarity and effect word");
  tabulate_cmd->add_option("--in", tabulate.in, "Input corpus JSONL")->required();
  tabulate_cmd->add_option("--lexicon", tabulate.lexicon, "Exclusion words, one per line");
  tabulate_cmd->add_option("--format", tabulate.format, "Standard output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  tabulate_cmd->add_option("--json", tabulate.json, "Also write the JSON table here");

  SegmentOptions segment;
  CLI::App *segment_cmd = app.add_subcommand("segment", "Assign canonical section labels");
  segment_cmd->add_option("--in", segment.in, "Input corpus JSONL")->required();
  segment_cmd->add_option("--out", segment.out, "Output corpus JSONL")->required();
  segment_cmd->add_option("--label-map", segment.label_map, "raw_label<TAB>canonical[,canonical]");
  segment_cmd->add_option("--combined", segment.combined, "Combined headings: union or exclusive")
      ->check(CLI::IsMember({"union", "exclusive"}))
      ->capture_default_str();

  AbbrevOptions abbrev;
  CLI::App *abbrev_cmd = app.add_subcommand("abbrev", "Extract abbreviation definitions");
  abbrev_cmd->add_option("--in", abbrev.in, "Input corpus JSONL")->required();
  abbrev_cmd->add_option("--out", abbrev.out, "Output TSV: pmid, short, long")->required();

  NormalizeOptions normalize;
  CLI::App *normalize_cmd = app.add_subcommand("normalize", "Replace title concepts with X_i tags");
  normalize_cmd->add_option("--in", normalize.in, "Input corpus JSONL")->required();
  normalize_cmd->add_option("--dict", normalize.dict, "Concept dictionary TSV")->required();
  normalize_cmd->add_option("--groups", normalize.groups, "Semantic groups to keep, as g1,g2");
  normalize_cmd->add_option("--import", normalize.import, "External concept annotations JSONL");
  normalize_cmd->add_option("--out", normalize.out, "Output corpus JSONL")->required();
  normalize_cmd->add_option("--audit", normalize.audit, "Replacement audit JSONL")->required();

  TrainOptions train;
  CLI::App *train_cmd = app.add_subcommand("train", "Train a polarity classifier");
  train_cmd->add_option("--in", train.in, "Input corpus JSONL")->required();
  train_cmd->add_option("--text-scope", train.text_scope,
                        "full, labels[:L,...] or best-sentence[:L,...]")
      ->capture_default_str();
  train_cmd->add_option("--model-kind", train.model_kind, "mnb, bnb or svm")
      ->check(CLI::IsMember({"mnb", "bnb", "svm", "multinomial_nb", "bernoulli_nb", "linear_svm"}))
      ->capture_default_str();
  train_cmd->add_option("--out", train.out, "Model JSON")->required();
  train_cmd->add_flag("--include-title", train.include_title, "Add title tokens to the document");
  train_cmd->add_flag("--remove-stopwords", train.remove_stopwords, "Drop stopwords from features");
  train_cmd->add_option("--labels", train.labels, "Gold JSONL; default is the title polarity");
  train_cmd->add_option("--stopwords", train.stopwords, "Stopword file, one word per line");
  train_cmd->add_option("--alpha", train.config.alpha, "Naive Bayes smoothing")->capture_default_str();
  train_cmd->add_option("--lambda", train.config.lambda, "SVM regularization")->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs, "SVM epochs")->capture_default_str();
  train_cmd->add_option("--min-df", train.min_df, "Minimum document frequency")->capture_default_str();

  PredictOptions predict;
  CLI::App *predict_cmd = app.add_subcommand("predict", "Label a corpus with a trained model");
  predict_cmd->add_option("--model", predict.model, "Model JSON")->required();
  predict_cmd->add_option("--in", predict.in, "Input corpus JSONL")->required();
  predict_cmd->add_option("--out", predict.out, "Output TSV: pmid, label, class scores")->required();

  BaselineOptions baseline;
  CLI::App *baseline_cmd = app.add_subcommand("baseline", "Score a non-learning baseline");
  baseline_cmd->add_option("--in", baseline.in, "Input corpus JSONL")->required();
  baseline_cmd->add_option("--kind", baseline.kind, "majority or signal")
      ->required()
      ->check(CLI::IsMember({"majority", "signal"}));
  baseline_cmd->add_option("--labels", baseline.labels, "Gold JSONL; default is the title polarity");
  baseline_cmd->add_option("--json", baseline.json, "Also write the result as JSON here");

  EvalOptions eval;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Cross-validate an experiment matrix");
  eval_cmd->add_option("--in", eval.in, "Input corpus JSONL")->required();
  eval_cmd->add_option("--matrix", eval.matrix, "Experiment matrix JSON")->required();
  eval_cmd->add_option("--labels", eval.labels, "Gold JSONL; default is the title polarity");
  eval_cmd->add_option("--out", eval.out, "JSON report");

  ServeOptions serve;
  CLI::App *serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  serve_cmd->add_option("--in", serve.in, "Corpus JSONL to annotate")->required();
  serve_cmd->add_option("--store", serve.store, "Annotation log JSONL")->required();
  serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port, 0 for any")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Static frontend bundle served at /");
  serve_cmd->add_option("--max-rationales", serve.max_rationales, "Cap on rationale sentences")
      ->check(CLI::PositiveNumber);
  serve_cmd->add_flag("--polarity-only", serve.polarity_only, "Allow an empty rationale");
  serve_cmd->add_flag("--no-suggestions", serve.no_suggestions, "Omit the suggested sentence");
  serve_cmd->add_flag("--hide-title-phrase", serve.hide_title_phrase, "Omit the title phrase span");
  serve_cmd->add_option("--shuffle-seed", serve.shuffle_seed, "Seeded task order per annotator");

  AgreementOptions agreement;
  CLI::App *agreement_cmd = app.add_subcommand("agreement", "Inter-annotator agreement");
  agreement_cmd->add_option("--store", agreement.store, "Annotation log JSONL")->required();
  agreement_cmd->add_option("--annotators", agreement.annotators, "Two ids, as a,b")->required();

  ExportOptions export_gold;
  CLI::App *export_cmd = app.add_subcommand("export-gold", "Write adjudicated gold labels");
  export_cmd->add_option("--store", export_gold.store, "Annotation log JSONL")->required();
  export_cmd->add_option("--policy", export_gold.policy, "require-agreement or latest")
      ->required()
      ->check(CLI::IsMember({"require-agreement", "latest"}));
  export_cmd->add_option("--out", export_gold.out, "Gold JSONL")->required();
  export_cmd->add_option("--in", export_gold.in, "Corpus JSONL, adds title and rationale text");

  std::vector<const char *> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("effcorp");
  for (const std::string &a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    const CLI::App *target = &app;
    for (const CLI::App *sub : app.get_subcommands()) target = sub;
    std::string message = e.what();
    if (target == &app && !app.remaining().empty()) {
      message = "unknown verb '" + app.remaining().front() + "'";
    }
    err << "error: " << message << "\n\n" << target->help();
    return 1;
  }

  try {
    if (*ingest_cmd) return Ingest(ingest, out);
    if (*filter_cmd) return Filter(filter, globals, out);
    if (*tabulate_cmd) return TabulateVerb(tabulate, out);
    if (*segment_cmd) return Segment(segment, globals, out);
    if (*abbrev_cmd) return Abbrev(abbrev, globals, out);
    if (*normalize_cmd) return NormalizeVerb(normalize, globals, out, err);
    if (*train_cmd) return Train(train, globals, out);
    if (*predict_cmd) return Predict(predict, globals, out);
    if (*baseline_cmd) return Baseline(baseline, out);
    if (*eval_cmd) return Eval(eval, globals, out);
    if (*serve_cmd) return Serve(serve, out);
    if (*agreement_cmd) return AgreementVerb(agreement, out);
    if (*export_cmd) return ExportGoldVerb(export_gold, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << '\n';
    for (const std::string &v : e.violations()) {
      if (v != e.what()) err << "  " << v << '\n';
    }
    return 1;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 1;
}

}  // namespace effcorp::cli
