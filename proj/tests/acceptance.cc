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

// Acceptance runner: one PASS/FAIL line per criterion. argv[1] is the
// effcorp binary used for the command-line checks.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "effcorp/concept.h"
#include "effcorp/corpus_io.h"
#include "effcorp/digest.h"
#include "effcorp/model.h"
#include "effcorp/text.h"
#include "effcorp/title_grammar.h"
#include "oracles.h"
#include "test_util.h"

namespace effcorp {
namespace {

using testing::DataPath;
using testing::TempDir;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Quote(const std::string &s) { return "'" + s + "'"; }

// Runs the binary, returning its exit code and stdout.
std::pair<int, std::string> Exec(const std::string &binary, const std::vector<std::string> &args) {
  std::string command = Quote(binary);
  for (const std::string &a : args) command += " " + Quote(a);
  command += " 2>/dev/null";
  std::FILE *pipe = ::popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome MajorityBaseline(const std::string &binary) {
  TempDir dir;
  std::vector<AbstractRecord> records;
  const std::pair<const char *, int> classes[] = {
      {"Positive effect", 162}, {"Negative effect", 154}, {"No effect", 434}};
  for (const auto &[phrase, n] : classes) {
    for (int i = 0; i < n; ++i) {
      AbstractRecord r;
      r.pmid = std::to_string(20000000 + records.size());
      r.title = std::string(phrase) + " of compound " + std::to_string(i) + " on recovery";
      r.sections.push_back({"", LabelSet{CanonicalLabel::kOthers}, "Recovery was measured.", {}});
      records.push_back(r);
    }
  }
  WriteCorpus(records, dir / "gold.jsonl", CorpusStage::kStage3);
  auto start = Clock::now();
  auto [code, out] = Exec(binary, {"baseline", "--in", dir / "gold.jsonl", "--kind", "majority"});
  double elapsed = Seconds(start);
  std::smatch m;
  if (code != 0 || !std::regex_search(out, m, std::regex(R"(accuracy ([0-9.]+)%)"))) {
    return {false, "baseline exited " + std::to_string(code) + ": " + out};
  }
  double percent = std::stod(m[1]);
  bool pass = std::fabs(percent - 57.87) <= 0.01 && elapsed < 1.0;
  char detail[128];
  std::snprintf(detail, sizeof detail, "reported %.2f%% (expected 57.87%%) in %.3f s", percent, elapsed);
  return {pass, detail};
}

Outcome FilterFidelity() {
  struct Case {
    const char *title;
    FilterStage reached;
  };
  const Case cases[] = {
      {"Positive effect of direct current on cytotoxicity of human lymphocytes", FilterStage::kStage3},
      {"The mumps and rubella vaccination: no effect of feedback of vaccination scores in general practice",
       FilterStage::kStage1},
      {"Positive effect of treatment with synthetic steroid hormone tibolon on intimal hyperplasia and "
       "restenosis after experimental endothelial injury of rabbit carotid artery",
       FilterStage::kStage1},
      {"Negative effect of age, but not of latent cytomegalovirus infection on the antibody response to a "
       "novel Influenza vaccine strain in healthy adults",
       FilterStage::kStage1},
      {"Calcium influx inhibition: possible mechanism of the negative effect of tetrahydropalmatine on left "
       "ventricular pressure in isolated rat heart",
       FilterStage::kStage2},
      {"Positive effect of etidronate therapy is maintained after drug is terminated in patients using "
       "corticosteroids",
       FilterStage::kStage3},
      {"Association of cystic fibrosis transmembrane-conductance regulator gene mutation with negative "
       "outcome of intracytoplasmic sperm injection pregnancy in cases of congenital bilateral absence of "
       "vas deferens",
       FilterStage::kNone},
      {"No effect of negative mood on the alcohol cue reactivity of in-patient alcoholics", FilterStage::kStage3},
  };
  auto start = Clock::now();
  ExclusionLexicon lexicon = ExclusionLexicon::Default();
  int correct = 0, passing = 0;
  std::string wrong;
  for (const Case &c : cases) {
    FilterDecision d = ClassifyStage(c.title, lexicon);
    if (d.stage_reached == c.reached) {
      ++correct;
    } else {
      wrong += std::string(" [") + c.title + "]";
    }
    passing += d.stage_reached == FilterStage::kStage3;
  }
  double elapsed = Seconds(start);
  return {correct == 8 && passing == 3 && elapsed < 1.0,
          std::to_string(correct) + "/8 routed as documented, " + std::to_string(passing) +
              " pass stage 3" + wrong};
}

Outcome Monotonicity() {
  std::mt19937_64 rng(2024);
  auto pick = [&](const std::vector<std::string> &v) { return v[rng() % v.size()]; };
  const std::vector<std::string> polarity = {"Positive", "Negative", "No", "Neutral", "Adverse"};
  const std::vector<std::string> effect = {"effect", "impact", "influence", "effects"};
  const std::vector<std::string> lead = {"", "The ", "A ", "Evidence of the ", "Dominant "};
  const std::vector<std::string> prep = {" on ", " in ", " for ", " "};
  const std::vector<std::string> exclusion = {"and", "or", "but", "review", "study", "meta-analysis"};
  const std::vector<std::string> nouns = {"aspirin", "sleep", "growth", "memory", "heat", "insulin"};
  std::vector<AbstractRecord> records;
  for (int i = 0; i < 1000; ++i) {
    std::string title = pick(lead) + pick(polarity) + " " + pick(effect) + " of " + pick(nouns) + pick(prep) +
                        pick(nouns);
    if (rng() % 3 == 0) title += " " + pick(exclusion) + " " + pick(nouns);
    AbstractRecord r;
    r.pmid = std::to_string(i + 1);
    r.title = title;
    records.push_back(r);
  }
  ExclusionLexicon lexicon = ExclusionLexicon::Default();
  std::array<std::set<std::string>, 4> kept;
  for (int s = 1; s <= 3; ++s) {
    for (const AbstractRecord &r : FilterCorpus(records, static_cast<FilterStage>(s), lexicon).kept) {
      kept[s].insert(r.pmid);
    }
  }
  std::size_t violations = 0;
  for (const std::string &p : kept[3]) violations += !kept[2].contains(p);
  for (const std::string &p : kept[2]) violations += !kept[1].contains(p);
  return {violations == 0, "1000 titles, stage sizes " + std::to_string(kept[1].size()) + " >= " +
                               std::to_string(kept[2].size()) + " >= " + std::to_string(kept[3].size()) +
                               ", " + std::to_string(violations) + " violations"};
}

Outcome Abbreviations() {
  std::set<std::pair<std::string, std::string>> found;
  for (const AbstractRecord &r : {testing::AchdRecord(), testing::TonerRecord()}) {
    for (const AbbrevPair &p : ExtractAbbreviations(r)) found.insert({p.short_form, p.long_form});
  }
  const std::set<std::pair<std::string, std::string>> expected = {
      {"ACHD", "adults with congenital heart disease"},
      {"8-OH-Gua", "8-hydroxydeoxyguanosine"},
      {"HPLC", "high-performance liquid chromatography"},
  };
  bool mg_pair = false;
  for (const auto &[s, l] : found) mg_pair = mg_pair || s.find("mg") != std::string::npos;
  std::string listed;
  for (const auto &[s, l] : found) listed += " (" + s + ", " + l + ")";
  return {found == expected && !mg_pair, std::to_string(found.size()) + " pairs:" + listed};
}

Outcome NbOracle() {
  auto start = Clock::now();
  testing::NbOracleResult m = testing::NbOracle(ModelKind::kMultinomialNb);
  testing::NbOracleResult b = testing::NbOracle(ModelKind::kBernoulliNb);
  double elapsed = Seconds(start);
  double worst = std::max(m.max_error, b.max_error);
  char detail[160];
  std::snprintf(detail, sizeof detail, "%zu corpora, %zu posteriors per variant, max error %.3g, %.2f s",
                m.corpora, m.predictions, worst, elapsed);
  return {worst <= 1e-9 && m.corpora > 0 && elapsed < 30.0, detail};
}

Outcome SvmSeparability() {
  testing::SeparableSet set = testing::MakeSeparableSet();
  TrainConfig config;
  config.epochs = 200;
  Model a = Model::Train(ModelKind::kLinearSvm, set.vectors, set.labels, set.vocabulary, config);
  Model b = Model::Train(ModelKind::kLinearSvm, set.vectors, set.labels, set.vocabulary, config);
  double accuracy = testing::TrainingAccuracy(a, set.vectors, set.labels);
  bool same = a.Serialize() == b.Serialize();
  char detail[128];
  std::snprintf(detail, sizeof detail, "training accuracy %.2f%% on 300 points, rerun %s", 100 * accuracy,
                same ? "byte-identical" : "differs");
  return {accuracy == 1.0 && same, detail};
}

// Every file in `dir` plus the captured stdout of each step.
std::vector<std::pair<std::string, std::string>> Pipeline(const std::string &binary, const std::string &dir,
                                                          bool *ok) {
  auto path = [&](const std::string &name) { return (std::filesystem::path(dir) / name).string(); };
  const std::vector<std::vector<std::string>> steps = {
      {"ingest", "--in", DataPath("corpus30.xml"), "--out", path("raw.jsonl")},
      {"filter", "--in", path("raw.jsonl"), "--stage", "3", "--out", path("stage3.jsonl"), "--audit",
       path("filter_audit.jsonl")},
      {"segment", "--in", path("stage3.jsonl"), "--out", path("segmented.jsonl")},
      {"normalize", "--in", path("segmented.jsonl"), "--dict", DataPath("dict_corpus30.tsv"), "--out",
       path("normalized.jsonl"), "--audit", path("tag_audit.jsonl")},
      {"--jobs", "4", "eval", "--in", path("normalized.jsonl"), "--matrix", DataPath("matrix30.json"), "--out",
       path("eval.json")},
  };
  std::vector<std::pair<std::string, std::string>> outputs;
  *ok = true;
  for (const auto &step : steps) {
    auto [code, out] = Exec(binary, step);
    *ok = *ok && code == 0;
    outputs.push_back({"stdout:" + step[0], out});
  }
  for (const char *name : {"raw.jsonl", "stage3.jsonl", "filter_audit.jsonl", "segmented.jsonl",
                           "normalized.jsonl", "tag_audit.jsonl", "eval.json"}) {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    *ok = *ok && in.good();
    outputs.push_back({name, ss.str()});
  }
  return outputs;
}

Outcome EndToEnd(const std::string &binary) {
  TempDir first, second;
  bool ok1 = false, ok2 = false;
  auto a = Pipeline(binary, first.path().string(), &ok1);
  auto b = Pipeline(binary, second.path().string(), &ok2);
  std::size_t differing = 0;
  std::string names;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Reports echo the working paths; compare with them removed.
    std::string x = a[i].second, y = b[i].second;
    for (auto [s, d] : {std::pair{&x, first.path().string()}, std::pair{&y, second.path().string()}}) {
      for (std::size_t p = s->find(d); p != std::string::npos; p = s->find(d, p)) s->replace(p, d.size(), "<dir>");
    }
    if (x != y) {
      ++differing;
      names += " " + a[i].first;
    }
  }
  bool nonempty = a.size() == 12 && !a.back().second.empty();
  return {ok1 && ok2 && nonempty && differing == 0,
          std::to_string(a.size()) + " outputs compared, " + std::to_string(differing) + " differ" + names +
              (ok1 && ok2 ? "" : " (a step failed)")};
}

std::size_t Occurrences(const std::string &text, const std::string &needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + needle.size())) ++n;
  return n;
}

std::string AllText(const AbstractRecord &r) {
  std::string text = r.title;
  for (const Section &s : r.sections) text += "\n" + s.text;
  return text;
}

Outcome NormalizationAudit() {
  AbstractRecord record = testing::AchdRecord();
  ConceptDictionary dict = ConceptDictionary::Load(DataPath("dict_one.tsv"));
  NormalizeResult result = NormalizeRecord(record, dict);
  std::string before = AllText(record), after = AllText(result.record);
  std::size_t terms = Occurrences(before, "congenital heart disease");
  std::size_t achd = Occurrences(before, "ACHD");
  std::size_t audited_terms = 0, audited_achd = 0, other = 0;
  for (const TagAudit &a : result.audit) {
    if (a.tag != "X_1") {
      ++other;
    } else if (a.surface == "congenital heart disease") {
      ++audited_terms;
    } else if (a.surface == "ACHD") {
      ++audited_achd;
    } else {
      ++other;
    }
  }
  bool gone = Occurrences(after, "ACHD") == 0 && Occurrences(after, "congenital heart disease") == 0;
  bool restored = StripTags(result.record, result.audit) == record;
  bool pass = terms > 0 && achd > 0 && audited_terms == terms && audited_achd == achd && other == 0 && gone &&
              Occurrences(after, "X_1") == terms + achd && restored;
  return {pass, std::to_string(audited_terms) + "/" + std::to_string(terms) + " term and " +
                    std::to_string(audited_achd) + "/" + std::to_string(achd) + " ACHD occurrences tagged X_1, " +
                    (restored ? "strip restores the original" : "strip does not restore the original")};
}

}  // namespace
}  // namespace effcorp

int main(int argc, char **argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to effcorp binary>\n";
    return 2;
  }
  const std::string binary = argv[1];
  using effcorp::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"majority baseline reproduction", [&] { return effcorp::MajorityBaseline(binary); }},
      {"filter fidelity", effcorp::FilterFidelity},
      {"stage monotonicity fuzz", effcorp::Monotonicity},
      {"abbreviation fixtures", effcorp::Abbreviations},
      {"naive Bayes oracle equivalence", effcorp::NbOracle},
      {"SVM separability", effcorp::SvmSeparability},
      {"end-to-end determinism", [&] { return effcorp::EndToEnd(binary); }},
      {"normalization audit", effcorp::NormalizationAudit},
  };
  int failed = 0;
  for (const auto &[name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
