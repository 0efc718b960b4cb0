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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "effcorp/annotation.h"
#include "effcorp/error.h"
#include "effcorp/segmenter.h"
#include "effcorp/text.h"
#include "test_util.h"

namespace effcorp {
namespace {

using testing::TempDir;

// Counts every label pair; p_e from the product of the two marginals.
double KappaOracle(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  std::set<std::string> labels(a.begin(), a.end());
  labels.insert(b.begin(), b.end());
  double n = static_cast<double>(a.size()), p_o = 0, p_e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) p_o += a[i] == b[i] ? 1 / n : 0;
  for (const std::string &l : labels) {
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ma += a[i] == l;
      mb += b[i] == l;
    }
    p_e += (ma / n) * (mb / n);
  }
  return (p_o - p_e) / (1 - p_e);
}

Clock FixedClock() {
  return [] { return std::string("2026-01-02T03:04:05Z"); };
}

CorpusIndex SmallCorpus() {
  std::vector<AbstractRecord> records;
  for (AbstractRecord r : {testing::TonerRecord(), testing::AchdRecord()}) {
    r = DetectSections(r, LabelMap::Default());
    FillSentenceSpans(&r);
    records.push_back(r);
  }
  return CorpusIndex(records);
}

AnnotationRecord Submission(const std::string &annotator, const std::string &pmid, Polarity p,
                            RationaleSet rationale = {{0, 0}}) {
  AnnotationRecord r;
  r.annotator_id = annotator;
  r.pmid = pmid;
  r.polarity = p;
  r.rationale_sentences = std::move(rationale);
  return r;
}

constexpr char kAchd[] = "25391256";
constexpr char kToner[] = "16195210";

TEST_CASE("kappa worked examples") {
  CHECK(CohenKappa({"positive", "positive", "negative", "neutral"},
                   {"positive", "negative", "negative", "neutral"}) ==
        doctest::Approx((0.75 - 0.3125) / (1 - 0.3125)));
  CHECK(CohenKappa({"positive", "positive", "negative", "neutral"},
                   {"positive", "negative", "negative", "neutral"}) ==
        doctest::Approx(0.6363636363636364));
  CHECK(CohenKappa({"positive", "positive", "negative", "negative"},
                   {"negative", "negative", "positive", "positive"}) == doctest::Approx(-1.0));
  CHECK(CohenKappa({"neutral", "neutral"}, {"neutral", "neutral"}) == 1.0);
  CHECK_THROWS_AS(CohenKappa({"neutral"}, {"neutral", "positive"}), ValidationError);
  CHECK_THROWS_AS(CohenKappa({}, {}), ValidationError);
}

TEST_CASE("kappa is symmetric, matches the oracle and is 1 on itself") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> names = {"positive", "negative", "neutral"};
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + rng() % 12;
    std::vector<std::string> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(names[rng() % 3]);
      b.push_back(names[rng() % 3]);
    }
    CHECK(CohenKappa(a, a) == 1.0);
    std::set<std::string> la(a.begin(), a.end()), lb(b.begin(), b.end());
    if (la.size() == 1 && la == lb) continue;  // p_e = 1
    double k = CohenKappa(a, b);
    CHECK(k == doctest::Approx(CohenKappa(b, a)).epsilon(1e-12));
    CHECK(k == doctest::Approx(KappaOracle(a, b)).epsilon(1e-12));
    CHECK(k >= -1.0 - 1e-12);
    CHECK(k <= 1.0 + 1e-12);
  }
}

TEST_CASE("rationale agreement") {
  RationaleSet s1{{0, 1}}, s12{{0, 1}, {0, 2}}, s3{{1, 0}};
  auto same = RationaleAgreement({s1, s3}, {s1, s3});
  CHECK(same.exact_rate == 1.0);
  CHECK(same.mean_jaccard == 1.0);
  auto half = RationaleAgreement({s1}, {s12});
  CHECK(half.exact_rate == 0.0);
  CHECK(half.mean_jaccard == 0.5);
  auto disjoint = RationaleAgreement({s1}, {s3});
  CHECK(disjoint.mean_jaccard == 0.0);
  CHECK(RationaleAgreement({{}}, {{}}).mean_jaccard == 1.0);
  CHECK_THROWS_AS(RationaleAgreement({s1}, {}), ValidationError);
}

TEST_CASE("store supersedes and keeps every record") {
  AnnotationStore store(FixedClock());
  CorpusIndex corpus = SmallCorpus();
  AnnotationPolicy policy;
  AnnotationRecord first = store.Record(Submission("ann", kAchd, Polarity::kNegative), corpus, policy);
  CHECK(first.seq == 1);
  CHECK(first.timestamp == "2026-01-02T03:04:05Z");
  AnnotationRecord second =
      store.Record(Submission("ann", kAchd, Polarity::kNeutral, {{1, 0}}), corpus, policy);
  CHECK(second.seq == 2);
  CHECK(store.Latest("ann", kAchd)->polarity == Polarity::kNeutral);
  store.Record(Submission("other", kAchd, Polarity::kNegative), corpus, policy);
  CHECK(store.Latest("other", kAchd)->polarity == Polarity::kNegative);
  CHECK(store.Latest("ann", kAchd)->seq == 2);
  CHECK(store.size() == 3);
  CHECK(store.LatestAll().size() == 2);
  CHECK(store.Annotators() == std::vector<std::string>{"ann", "other"});
  CHECK_FALSE(store.Latest("ann", kToner).has_value());
}

TEST_CASE("store rejects invalid submissions with reasons") {
  AnnotationStore store(FixedClock());
  CorpusIndex corpus = SmallCorpus();
  AnnotationPolicy policy;
  auto reasons = [&](const AnnotationRecord &r, const AnnotationPolicy &p) {
    return AnnotationStore::Check(r, corpus, p);
  };
  CHECK(reasons(Submission("a", "999", Polarity::kPositive), policy).size() >= 1);
  CHECK(reasons(Submission("a", kAchd, Polarity::kPositive, {{0, 40}}), policy).size() == 1);
  CHECK(reasons(Submission("a", kAchd, Polarity::kPositive, {{9, 0}}), policy).size() == 1);
  CHECK(reasons(Submission("", kAchd, Polarity::kPositive), policy).size() == 1);
  CHECK(reasons(Submission("a", kAchd, Polarity::kPositive, {}), policy).size() == 1);
  AnnotationPolicy polarity_only;
  polarity_only.polarity_only = true;
  CHECK(reasons(Submission("a", kAchd, Polarity::kPositive, {}), polarity_only).empty());
  AnnotationPolicy one;
  one.max_rationales = 1;
  CHECK(reasons(Submission("a", kAchd, Polarity::kPositive, {{0, 0}, {0, 1}}), one).size() == 1);
  CHECK(reasons(Submission("a", kAchd, Polarity::kPositive, {{0, 0}}), one).empty());

  try {
    store.Record(Submission("", kAchd, Polarity::kPositive, {{0, 40}}), corpus, policy);
    FAIL("accepted an invalid submission");
  } catch (const ValidationError &e) {
    CHECK(e.violations().size() == 2);
  }
  CHECK(store.size() == 0);
}

TEST_CASE("log replay reproduces the store and the file only grows") {
  TempDir dir;
  std::string path = dir / "log.jsonl";
  CorpusIndex corpus = SmallCorpus();
  AnnotationPolicy policy;
  std::vector<AnnotationRecord> expected_latest;
  {
    auto store = AnnotationStore::Open(path, FixedClock());
    std::uintmax_t size = 0;
    std::mt19937_64 rng(3);
    const std::vector<std::string> pmids = {kAchd, kToner};
    for (int i = 0; i < 40; ++i) {
      AnnotationRecord s = Submission("ann" + std::to_string(rng() % 3), pmids[rng() % 2],
                                      static_cast<Polarity>(rng() % 3), {{0, rng() % 2}});
      if (i % 7 == 0) s.rationale_sentences = {{5, 5}};  // rejected
      try {
        store->Record(s, corpus, policy);
      } catch (const ValidationError &) {
      }
      std::uintmax_t now = std::filesystem::file_size(path);
      CHECK(now >= size);
      size = now;
    }
    expected_latest = store->LatestAll();
    CHECK(AnnotationStore::ReadLog(path) == store->Log());
  }
  auto reopened = AnnotationStore::Open(path, FixedClock());
  CHECK(reopened->LatestAll() == expected_latest);
  CHECK(LatestOf(AnnotationStore::ReadLog(path)) == expected_latest);
  AnnotationRecord next = reopened->Record(Submission("z", kToner, Polarity::kPositive), corpus, policy);
  CHECK(next.seq == reopened->Log()[reopened->size() - 2].seq + 1);
}

TEST_CASE("replay refuses a log whose seq does not increase") {
  TempDir dir;
  std::string path = dir / "log.jsonl";
  std::ofstream(path) << R"({"seq":2,"pmid":"1","annotator_id":"a","polarity":"neutral","rationale_sentences":[[0,0]],"note":null,"timestamp":"t"})"
                      << "\n"
                      << R"({"seq":2,"pmid":"1","annotator_id":"a","polarity":"neutral","rationale_sentences":[[0,0]],"note":null,"timestamp":"t"})"
                      << "\n";
  CHECK_THROWS_AS(AnnotationStore::ReadLog(path), ValidationError);
  std::ofstream(path) << "{not json\n";
  try {
    AnnotationStore::ReadLog(path);
    FAIL("parsed garbage");
  } catch (const ParseError &e) {
    CHECK(e.location() == 1);
  }
}

TEST_CASE("annotation JSON") {
  AnnotationRecord r = Submission("a", "7", Polarity::kNegative, {{1, 2}, {0, 3}});
  r.seq = 4;
  r.note = "hard one";
  r.timestamp = "2026-01-01T00:00:00Z";
  nlohmann::json j = AnnotationToJson(r);
  CHECK(j["rationale_sentences"] == nlohmann::json::parse("[[0,3],[1,2]]"));
  CHECK(AnnotationFromJson(j) == r);
  CHECK_THROWS_AS(AnnotationFromJson({{"pmid", "1"}, {"annotator_id", "a"}, {"polarity", "great"}}),
                  ValidationError);
  CHECK_THROWS_AS(AnnotationFromJson({{"pmid", "1"}, {"annotator_id", "a"}, {"polarity", "neutral"}, {"x", 1}}),
                  ValidationError);
  CHECK_THROWS_AS(AnnotationFromJson({{"pmid", "1"}, {"annotator_id", "a"}, {"polarity", "neutral"},
                                      {"rationale_sentences", {1, 2}}}),
                  ValidationError);
}

TEST_CASE("agreement covers only common abstracts") {
  AnnotationStore store(FixedClock());
  CorpusIndex corpus = SmallCorpus();
  AnnotationPolicy policy;
  store.Record(Submission("a", kAchd, Polarity::kNegative, {{0, 0}}), corpus, policy);
  store.Record(Submission("a", kToner, Polarity::kNeutral), corpus, policy);
  store.Record(Submission("b", kAchd, Polarity::kNegative, {{0, 0}, {0, 1}}), corpus, policy);
  AgreementReport r = ComputeAgreement(store.LatestAll(), "a", "b");
  CHECK(r.n_common == 1);
  CHECK(*r.kappa_polarity == 1.0);
  CHECK(*r.rationale_exact_rate == 0.0);
  CHECK(*r.rationale_mean_jaccard == 0.5);
  AgreementReport none = ComputeAgreement(store.LatestAll(), "a", "c");
  CHECK(none.n_common == 0);
  CHECK_FALSE(none.kappa_polarity.has_value());
  CHECK(AgreementReportToJson(none)["kappa_polarity"].is_null());
}

TEST_CASE("gold export policies") {
  AnnotationStore store(FixedClock());
  std::vector<AbstractRecord> records;
  for (int i = 1; i <= 4; ++i) {
    AbstractRecord r;
    r.pmid = std::to_string(i);
    r.title = "t";
    r.sections.push_back({"", LabelSet{CanonicalLabel::kOthers}, "One. Two.", {}});
    records.push_back(r);
  }
  CorpusIndex corpus(records);
  AnnotationPolicy policy;
  CHECK(ExportGold(store.LatestAll(), true).empty());
  for (const char *pmid : {"1", "2", "3", "4"}) {
    store.Record(Submission("a", pmid, Polarity::kPositive, {{0, 0}}), corpus, policy);
  }
  CHECK(ExportGold(store.LatestAll(), false).size() == 4);
  for (const char *pmid : {"1", "2", "3"}) {
    store.Record(Submission("b", pmid, Polarity::kPositive, {{0, 1}}), corpus, policy);
  }
  store.Record(Submission("b", "4", Polarity::kNegative, {{0, 1}}), corpus, policy);

  std::vector<GoldRow> agreed = ExportGold(store.LatestAll(), true);
  CHECK(agreed.size() == 3);
  CHECK(agreed[0].rationale_sentences == RationaleSet{{0, 0}, {0, 1}});
  CHECK(agreed[0].annotators == std::vector<std::string>{"a", "b"});
  CHECK(agreed[0].unanimous);

  std::vector<GoldRow> latest = ExportGold(store.LatestAll(), false);
  CHECK(latest.size() == 4);
  CHECK(latest[3].polarity == Polarity::kNegative);
  CHECK_FALSE(latest[3].unanimous);

  nlohmann::json j = GoldRowToJson(agreed[0], &corpus);
  CHECK(j["title"] == "t");
  CHECK(j["rationale_text"] == nlohmann::json::array({"One.", "Two."}));
}

TEST_CASE("corpus index") {
  CorpusIndex corpus = SmallCorpus();
  CHECK(corpus.records()[0].pmid == kToner);
  CHECK(corpus.Find(kAchd) != nullptr);
  CHECK(corpus.Find("1") == nullptr);
  CHECK_FALSE(corpus.CheckReference(kAchd, {0, 0}).has_value());
  CHECK(corpus.CheckReference(kAchd, {0, 99}).has_value());
  std::vector<AbstractRecord> dup = {testing::AchdRecord(), testing::AchdRecord()};
  CHECK_THROWS_AS(CorpusIndex{dup}, ValidationError);
}

}  // namespace
}  // namespace effcorp
