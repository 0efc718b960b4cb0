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

#include <cctype>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "effcorp/corpus_io.h"
#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/title_grammar.h"
#include "effcorp/unicode.h"
#include "test_util.h"

namespace effcorp {
namespace {

using testing::DataPath;

const ExclusionLexicon &Lexicon() {
  static const ExclusionLexicon lexicon = ExclusionLexicon::Default();
  return lexicon;
}

TEST_CASE("ParseTitle: full parse at the start") {
  auto p = ParseTitle("Positive effect of direct current on cytotoxicity of human lymphocytes");
  REQUIRE(p);
  CHECK(p->polarity == Polarity::kPositive);
  CHECK(p->effect_word == EffectWord::kEffect);
  CHECK(p->catalyst_x == "direct current");
  CHECK(p->target_y == "cytotoxicity of human lymphocytes");
  CHECK(p->preposition == Preposition::kOn);
  CHECK(p->at_start);
  CHECK(p->match_start == 0);
  CHECK(p->full());
}

TEST_CASE("ParseTitle: 'no effect' wins over a later 'negative'") {
  auto p = ParseTitle("No effect of negative mood on the alcohol cue reactivity of in-patient alcoholics");
  REQUIRE(p);
  CHECK(p->polarity == Polarity::kNeutral);
  CHECK(p->catalyst_x == "negative mood");
  CHECK(p->at_start);
}

TEST_CASE("ParseTitle: plural without polarity does not match") {
  CHECK_FALSE(ParseTitle("Effects of exercise on mood"));
  CHECK_FALSE(ParseTitle(""));
  CHECK_FALSE(ParseTitle("Positive effects of exercise on mood"));
}

TEST_CASE("ParseTitle: mid-title phrase is not at start") {
  auto p = ParseTitle(
      "Calcium influx inhibition: possible mechanism of the negative effect of tetrahydropalmatine "
      "on left ventricular pressure in isolated rat heart");
  REQUIRE(p);
  CHECK(p->polarity == Polarity::kNegative);
  CHECK(p->effect_word == EffectWord::kEffect);
  CHECK_FALSE(p->at_start);
}

TEST_CASE("ParseTitle: articles, quotes and brackets before the phrase") {
  for (const char *title : {"The negative impact of noise on sleep", "A positive influence of sun on mood",
                            "“No effect of A on B”", "[Positive effect of C on D]",
                            "  (The no effect of E in F)"}) {
    CAPTURE(title);
    auto p = ParseTitle(title);
    REQUIRE(p);
    CHECK(p->at_start);
    CHECK(p->full());
  }
  auto neutral = ParseTitle("Neutral effect of X for Y");
  REQUIRE(neutral);
  CHECK(neutral->polarity == Polarity::kNeutral);
  CHECK(neutral->preposition == Preposition::kFor);
}

TEST_CASE("ParseTitle: Y stops at a colon or period") {
  auto p = ParseTitle("Negative effect of smoking on lung function: a cohort. Extra words");
  REQUIRE(p);
  CHECK(p->target_y == "lung function");
}

TEST_CASE("ClassifyStage: documented routes") {
  struct Case {
    const char *title;
    FilterStage stage;
    std::optional<RejectionReason> reason;
    std::optional<std::string> word;
  };
  const Case cases[] = {
      {"The mumps and rubella vaccination: no effect of feedback of vaccination scores in general practice",
       FilterStage::kStage1, RejectionReason::kExclusionWord, "and"},
      {"Negative effect of age, but not of latent cytomegalovirus infection on the antibody response to a "
       "novel Influenza vaccine strain in healthy adults",
       FilterStage::kStage1, RejectionReason::kExclusionWord, "but"},
      {"Positive effect of etidronate therapy is maintained after drug is terminated in patients using "
       "corticosteroids",
       FilterStage::kStage3, std::nullopt, std::nullopt},
      {"Mutant p53 exerts a dominant negative effect on wild-type p53 in tumor cells",
       FilterStage::kStage2, RejectionReason::kNotAtStart, std::nullopt},
      {"Effects of exercise on mood", FilterStage::kNone, RejectionReason::kNoEffectPhrase, std::nullopt},
      {"Positive effect of caffeine", FilterStage::kStage2, RejectionReason::kNoXyParse, std::nullopt},
  };
  for (const Case &c : cases) {
    CAPTURE(c.title);
    FilterDecision d = ClassifyStage(c.title, Lexicon());
    CHECK(d.stage_reached == c.stage);
    CHECK(d.rejection_reason == c.reason);
    CHECK(d.exclusion_word == c.word);
  }
}

TEST_CASE("exclusion matching is whole-token and case-insensitive") {
  CHECK(ClassifyStage("Positive effect of android apps on sleep", Lexicon()).stage_reached ==
        FilterStage::kStage3);
  CHECK(ClassifyStage("Positive effect of apps on sleep: A STUDY", Lexicon()).exclusion_word == "study");
  CHECK(ClassifyStage("No effect of tea on mood: a meta-analysis", Lexicon()).exclusion_word ==
        "meta-analysis");
  CHECK(ClassifyStage("No effect of tea on mood: a meta analysis", Lexicon()).exclusion_word ==
        "meta analysis");
  CHECK(ClassifyStage("No effect of tea on mood: a meta-analytic view", Lexicon()).stage_reached ==
        FilterStage::kStage3);
}

TEST_CASE("12-title fixture keeps exactly the three constructed passes") {
  auto records = ReadCorpus(DataPath("titles12.jsonl"));
  REQUIRE(records.size() == 12);
  FilterResult r = FilterCorpus(records, FilterStage::kStage3, Lexicon());
  REQUIRE(r.kept.size() == 3);
  CHECK(r.kept[0].pmid == "10000001");
  CHECK(r.kept[1].pmid == "10000006");
  CHECK(r.kept[2].pmid == "10000008");
  CHECK(r.audit.size() == 12);
  CHECK(FilterCorpus(records, FilterStage::kStage3, Lexicon(), 4).kept == r.kept);
}

TEST_CASE("corpus without effect phrases keeps nothing") {
  std::vector<AbstractRecord> records(3);
  for (int i = 0; i < 3; ++i) {
    records[i].pmid = std::to_string(i + 1);
    records[i].title = "Effects of treatment number " + std::to_string(i);
  }
  FilterResult r = FilterCorpus(records, FilterStage::kStage1, Lexicon());
  CHECK(r.kept.empty());
  for (const FilterAudit &a : r.audit) {
    CHECK(a.decision.rejection_reason == RejectionReason::kNoEffectPhrase);
  }
}

TEST_CASE("Tabulate: six effect titles fill one column") {
  std::vector<AbstractRecord> records;
  const char *titles[] = {"Positive effect of A on B", "Positive effect of C on D", "Negative effect of E on F",
                          "Negative effect of G in H", "No effect of I on J", "No effect of K for L"};
  int n = 0;
  for (const char *t : titles) {
    AbstractRecord r;
    r.pmid = std::to_string(++n);
    r.title = t;
    records.push_back(r);
  }
  CountTable table = Tabulate(records, Lexicon());
  for (FilterStage s : {FilterStage::kStage1, FilterStage::kStage2, FilterStage::kStage3}) {
    CHECK(table.ColumnTotal(s, EffectWord::kEffect) == 6);
    CHECK(table.ColumnTotal(s, EffectWord::kImpact) == 0);
    CHECK(table.ColumnTotal(s, EffectWord::kInfluence) == 0);
    for (Polarity p : kAllPolarities) CHECK(table.RowTotal(s, p) == 2);
    CHECK(table.GrandTotal(s) == 6);
  }
  nlohmann::json j = table.ToJson();
  CHECK(j["stages"][2]["counts"]["total"]["effect"] == 6);
  CHECK(table.ToText().find("Effect of") != std::string::npos);
}

// Titles assembled from parts whose filter outcome is known by construction.
struct GeneratedTitle {
  std::string text;
  FilterStage expected;
};

GeneratedTitle Generate(std::mt19937_64 &rng) {
  auto pick = [&](const std::vector<std::string> &v) { return v[rng() % v.size()]; };
  const std::vector<std::string> polarity = {"positive", "negative", "no", "neutral", "strong", "adverse"};
  const std::vector<std::string> effect = {"effect", "impact", "influence", "effects", "outcome"};
  const std::vector<std::string> prefix = {"", "The ", "A ", "An ", "\"", "(",
                                           "Mechanism of the ", "Dominant ", "Evidence for a "};
  const std::vector<std::string> prep = {"on", "in", "for", ""};
  const std::vector<std::string> exclusion = {"and", "or", "but", "review", "study", "meta-analysis",
                                              "meta analysis"};
  const std::vector<std::string> decoy = {"android", "orange", "studying", "reviewer", "butter", ""};
  const std::vector<std::string> nouns = {"caffeine", "sleep", "exercise", "lithium", "memory",
                                          "aspirin", "vision", "heat", "growth", "insulin"};

  std::string pol = pick(polarity);
  std::string eff = pick(effect);
  std::string pre = pick(prefix);
  std::string pr = pick(prep);
  bool with_exclusion = rng() % 3 == 0;
  std::string x = pick(nouns);
  std::string y = pick(nouns) + " " + pick(decoy);
  if (with_exclusion) y += " " + pick(exclusion) + " " + pick(nouns);
  std::string title = pre + pol + " " + eff + " of " + x;
  if (!pr.empty()) title += " " + pr + " " + y;
  else title += " " + y;

  // Random case per character.
  for (char &c : title) {
    if (rng() % 4 == 0) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }

  bool phrase = (pol == "positive" || pol == "negative" || pol == "no" || pol == "neutral") &&
                (eff == "effect" || eff == "impact" || eff == "influence");
  bool excluded = with_exclusion;
  bool at_start = pre.empty() || pre == "The " || pre == "A " || pre == "An " || pre == "\"" || pre == "(";
  FilterStage expected = FilterStage::kNone;
  if (phrase) {
    expected = FilterStage::kStage1;
    if (!excluded) {
      expected = FilterStage::kStage2;
      if (at_start && !pr.empty()) expected = FilterStage::kStage3;
    }
  }
  return {title, expected};
}

TEST_CASE("fuzz: stages are nested and match the construction") {
  std::mt19937_64 rng(42);
  std::vector<AbstractRecord> records;
  std::vector<FilterStage> expected;
  for (int i = 0; i < 1000; ++i) {
    GeneratedTitle g = Generate(rng);
    AbstractRecord r;
    r.pmid = std::to_string(i + 1);
    r.title = g.text;
    records.push_back(r);
    expected.push_back(g.expected);
  }
  std::vector<std::set<std::string>> kept(4);
  for (int s = 1; s <= 3; ++s) {
    for (const AbstractRecord &r : FilterCorpus(records, static_cast<FilterStage>(s), Lexicon()).kept) {
      kept[s].insert(r.pmid);
    }
  }
  std::size_t violations = 0;
  for (const std::string &pmid : kept[3]) violations += !kept[2].contains(pmid);
  for (const std::string &pmid : kept[2]) violations += !kept[1].contains(pmid);
  CHECK(violations == 0);

  for (std::size_t i = 0; i < records.size(); ++i) {
    CAPTURE(records[i].title);
    FilterDecision d = ClassifyStage(records[i].title, Lexicon());
    CHECK(d.stage_reached == expected[i]);
    CHECK(d.rejection_reason.has_value() == (d.stage_reached != FilterStage::kStage3));
    // Case invariance.
    FilterDecision upper = ClassifyStage(ToUpper(records[i].title), Lexicon());
    CHECK(upper.stage_reached == d.stage_reached);
    CHECK(upper.rejection_reason == d.rejection_reason);
    // A larger lexicon never raises the stage.
    ExclusionLexicon larger({"and", "or", "but", "review", "study", "meta-analysis", "meta analysis",
                             "sleep", "heat"});
    CHECK(ClassifyStage(records[i].title, larger).stage_reached <= d.stage_reached);
    if (d.parse && d.parse->at_start) {
      CHECK(d.parse->match_start == ContentStart(records[i].title));
    }
  }
  CHECK(kept[3].size() > 50);
  CHECK(kept[1].size() > kept[2].size());
  CHECK(kept[2].size() > kept[3].size());
}

TEST_CASE("at_start is false after a non-article word") {
  for (const char *t : {"Dominant negative effect of X on Y", "Strong positive effect of X on Y",
                        "Thea negative effect of X on Y"}) {
    auto p = ParseTitle(t);
    REQUIRE(p);
    CHECK_FALSE(p->at_start);
  }
}

TEST_CASE("lexicon file") {
  testing::TempDir dir;
  WriteFile(dir / "lex.txt", "# comment\nAND\n\nsystematic review\n");
  ExclusionLexicon lex = ExclusionLexicon::Load(dir / "lex.txt");
  CHECK(lex.FindIn("positive effect of a AND b") == "and");
  CHECK(lex.FindIn("a systematic  review of x") == "systematic review");
  CHECK_FALSE(lex.FindIn("a review of x"));
  CHECK_THROWS_AS(ExclusionLexicon::Load(dir / "missing.txt"), IoError);
}

}  // namespace
}  // namespace effcorp
