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

#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "effcorp/concept.h"
#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/segmenter.h"
#include "effcorp/text.h"
#include "test_util.h"

namespace effcorp {
namespace {

using testing::DataPath;
using testing::AchdRecord;
using testing::TonerRecord;

ConceptDictionary OneEntry() { return ConceptDictionary::Load(DataPath("dict_one.tsv")); }

std::string ReplaceAll(std::string s, const std::string &from, const std::string &to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

const char kThreeLines[] =
    "C1\theart disease\tcardiopathy\tDisorders\n"
    "C2\taspirin\tacetylsalicylic acid\tChemicals\n"
    "C3\tdiabetes\tdiabetes mellitus\tDisorders\n";

TEST_CASE("dictionary loading and group filter") {
  CHECK(ConceptDictionary::Parse(kThreeLines).size() == 3);
  CHECK(ConceptDictionary::Parse(kThreeLines, std::set<std::string>{"Disorders"}).size() == 2);
  CHECK(ConceptDictionary::Parse(kThreeLines, std::set<std::string>{}).size() == 0);
  ConceptDictionary dict = ConceptDictionary::Parse(kThreeLines);
  const ConceptEntry *c2 = dict.Find("C2");
  REQUIRE(c2);
  CHECK(c2->canonical_name == "aspirin");
  CHECK(c2->semantic_group == "Chemicals");
  CHECK(c2->synonyms.size() == 2);
  REQUIRE(dict.Lookup(SurfaceKey("Acetylsalicylic  ACID")));
  CHECK(*dict.Lookup(SurfaceKey("Acetylsalicylic  ACID")) == "C2");
  CHECK(dict.max_tokens() == 2);
}

TEST_CASE("dictionary errors and warnings") {
  try {
    ConceptDictionary::Parse("C1\ta\tb\tG\nC2\tonly three\tG\n");
    FAIL("expected parse error");
  } catch (const ParseError &e) {
    CHECK(e.location() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(ConceptDictionary::Parse("\tname\tsyn\tG\n"), ParseError);
  std::vector<std::string> warnings;
  ConceptDictionary dict = ConceptDictionary::Parse(
      "C1\tfever\tpyrexia\tFindings\nC1\tfever\tpyrexia\tFindings\nC2\tchill\tpyrexia\tFindings\n",
      std::nullopt, &warnings);
  CHECK(warnings.size() == 2);
  CHECK(*dict.Lookup("pyrexia") == "C1");  // first wins
  CHECK_THROWS_AS(ConceptDictionary::Load(DataPath("no-such.tsv")), IoError);
}

TEST_CASE("recognize: longest match, repetition, empty") {
  ConceptDictionary dict = ConceptDictionary::Parse(
      "C1\tcongenital heart disease\t\tDisorders\nC2\theart disease\t\tDisorders\n");
  auto m = Recognize("congenital heart disease in adults", dict);
  REQUIRE(m.size() == 1);
  CHECK(m[0].concept_id == "C1");
  CHECK(m[0].span == Span{0, 24});
  auto two = Recognize("heart disease and heart disease", dict);
  REQUIRE(two.size() == 2);
  CHECK(two[0].span == Span{0, 13});
  CHECK(two[1].span == Span{18, 31});
  CHECK(Recognize("nothing relevant here", dict).empty());
  CHECK(Recognize("HEART  Disease", dict).size() == 1);
  CHECK(Recognize("heartdisease", dict).empty());
  CHECK(Recognize("heart-disease", dict).empty());
}

TEST_CASE("recognize: spans sorted and disjoint on random text") {
  ConceptDictionary dict = ConceptDictionary::Parse(
      "C1\ta b\t\tG\nC2\tb c\t\tG\nC3\tb\t\tG\nC4\ta b c d\t\tG\n");
  std::mt19937_64 rng(42);
  const char *words[] = {"a", "b", "c", "d", "e", "A", "B."};
  for (int i = 0; i < 500; ++i) {
    std::string text;
    int n = static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) text += std::string(k ? " " : "") + words[rng() % 7];
    auto mentions = Recognize(text, dict);
    std::size_t last = 0;
    for (const ConceptMention &mention : mentions) {
      CHECK(mention.span.begin >= last);
      CHECK(mention.span.begin < mention.span.end);
      CHECK(text.substr(mention.span.begin, mention.span.length()) == mention.surface);
      last = mention.span.end;
    }
  }
}

TEST_CASE("title tags: ACHD record links ACHD to X_1") {
  AbstractRecord achd = DetectSections(AchdRecord(), LabelMap::Default());
  auto tags = TitleTags(achd, OneEntry(), ExtractAbbreviations(achd));
  REQUIRE(tags.size() == 1);
  CHECK(tags[0].index == 1);
  CHECK(tags[0].Name() == "X_1");
  CHECK(tags[0].concept_id == "C0152021");
  CHECK(tags[0].short_forms == std::vector<std::string>{"ACHD"});
}

TEST_CASE("title tags: none, repeated, first-appearance order") {
  ConceptDictionary dict = ConceptDictionary::Parse(
      "C1\tinsulin\t\tChemicals\nC2\tglucose\t\tChemicals\n");
  AbstractRecord r;
  r.pmid = "1";
  r.title = "No effect of exercise on mood";
  CHECK(TitleTags(r, dict, {}).empty());
  r.title = "Negative effect of glucose on insulin and glucose";
  auto tags = TitleTags(r, dict, {});
  REQUIRE(tags.size() == 2);
  CHECK(tags[0].concept_id == "C2");
  CHECK(tags[1].concept_id == "C1");
  CHECK(tags[1].Name() == "X_2");
}

TEST_CASE("normalize the ACHD record with the one-entry dictionary") {
  AbstractRecord achd = DetectSections(AchdRecord(), LabelMap::Default());
  NormalizeResult result = NormalizeRecord(achd, OneEntry());
  CHECK(result.record.title == "Negative effect of aging on psychosocial functioning of adults with X_1");
  for (std::size_t i = 0; i < achd.sections.size(); ++i) {
    std::string expected = ReplaceAll(ReplaceAll(achd.sections[i].text, "congenital heart disease", "X_1"),
                                      "ACHD", "X_1");
    CHECK(result.record.sections[i].text == expected);
    CHECK(result.record.sections[i].sentence_spans.size() == achd.sections[i].sentence_spans.size());
  }
  CHECK(result.record.sections[0].text.find("adults with X_1 (X_1) provide") != std::string::npos);

  std::size_t linked = 0, dictionary = 0;
  for (const TagAudit &a : result.audit) {
    CHECK(a.pmid == "25391256");
    CHECK(a.tag == "X_1");
    const std::string &out = a.section ? result.record.sections[*a.section].text : result.record.title;
    CHECK(out.substr(a.output.begin, a.output.length()) == "X_1");
    const std::string &in = a.section ? achd.sections[*a.section].text : achd.title;
    CHECK(in.substr(a.original.begin, a.original.length()) == a.surface);
    (a.via == MentionVia::kAbbreviationLink ? linked : dictionary)++;
  }
  CHECK(dictionary == 2);
  CHECK(linked == 8);
  CHECK(StripTags(result.record, result.audit) == achd);
}

TEST_CASE("normalize: identity without tags, idempotent, audit JSON round trip") {
  AbstractRecord toner = DetectSections(TonerRecord(), LabelMap::Default());
  NormalizeResult none = NormalizeRecord(toner, OneEntry());
  CHECK(none.record == toner);
  CHECK(none.audit.empty());

  AbstractRecord achd = DetectSections(AchdRecord(), LabelMap::Default());
  NormalizeResult once = NormalizeRecord(achd, OneEntry());
  NormalizeResult twice = NormalizeRecord(once.record, OneEntry());
  CHECK(twice.record == once.record);
  CHECK(twice.audit.empty());
  for (const TagAudit &a : once.audit) {
    TagAudit back = TagAuditFromJson(TagAuditToJson(a));
    CHECK(TagAuditToJson(back) == TagAuditToJson(a));
  }
  CHECK(TagAuditToJson(once.audit[0])["via"] == "dictionary");
}

TEST_CASE("normalize: token-boundary safety, other concepts block shorter tagged ones") {
  ConceptDictionary dict = ConceptDictionary::Parse(
      "C1\theart disease\t\tDisorders\nC2\tcongenital heart disease\t\tDisorders\n");
  AbstractRecord r;
  r.pmid = "7";
  r.title = "No effect of salt on heart disease";
  r.sections.push_back({"", LabelSet{CanonicalLabel::kOthers},
                        "Heart disease, heart diseases and congenital heart disease differ. "
                        "Superheart disease is made up.",
                        {}});
  NormalizeResult result = NormalizeRecord(r, dict);
  CHECK(result.record.title == "No effect of salt on X_1");
  CHECK(result.record.sections[0].text ==
        "X_1, heart diseases and congenital heart disease differ. Superheart disease is made up.");
  CHECK(StripTags(result.record, result.audit) == r);
}

TEST_CASE("property: strip restores, output tags trace to audit") {
  ConceptDictionary dict = ConceptDictionary::Parse(
      "C1\talpha beta\tab\tG\nC2\tgamma\t\tG\nC3\tbeta\t\tG\n");
  std::mt19937_64 rng(42);
  const char *words[] = {"alpha", "beta", "gamma", "ab", "AB", "delta", "(GB)", ",", "Alpha", "x"};
  for (int i = 0; i < 300; ++i) {
    auto text = [&] {
      std::string s;
      int n = 1 + static_cast<int>(rng() % 14);
      for (int k = 0; k < n; ++k) s += std::string(k ? " " : "") + words[rng() % 10];
      return s;
    };
    AbstractRecord r;
    r.pmid = std::to_string(i);
    r.title = "Effect of " + text();
    r.sections.push_back({"", LabelSet{CanonicalLabel::kOthers}, text() + ". " + text() + ".", {}});
    r.sections.push_back({"", LabelSet{CanonicalLabel::kResults}, "gamma globulin (GG) " + text(), {}});
    FillSentenceSpans(&r);
    NormalizeResult result = NormalizeRecord(r, dict);
    CHECK(StripTags(result.record, result.audit) == r);
    CHECK(ValidateRecord(result.record).empty());
    std::size_t tags_in_output = 0;
    for (const Section &s : result.record.sections) {
      for (const Token &t : Tokenize(s.text)) tags_in_output += t.surface.rfind("X_", 0) == 0;
    }
    for (const Token &t : Tokenize(result.record.title)) tags_in_output += t.surface.rfind("X_", 0) == 0;
    CHECK(tags_in_output == result.audit.size());
    CHECK(NormalizeRecord(result.record, dict).record == result.record);
  }
}

TEST_CASE("StripTags rejects a mismatched audit") {
  AbstractRecord achd = DetectSections(AchdRecord(), LabelMap::Default());
  NormalizeResult result = NormalizeRecord(achd, OneEntry());
  std::vector<TagAudit> audit = result.audit;
  audit[0].output.begin += 1;
  audit[0].output.end += 1;
  CHECK_THROWS_AS(StripTags(result.record, audit), ValidationError);
}

TEST_CASE("external annotations feed a per-record dictionary") {
  AbstractRecord achd = DetectSections(AchdRecord(), LabelMap::Default());
  std::string text = AnnotationText(achd);
  std::size_t start = text.find("psychosocial functioning");
  std::string jsonl = "{\"pmid\":\"25391256\",\"start\":" + std::to_string(start) +
                      ",\"end\":" + std::to_string(start + 24) +
                      ",\"concept_id\":\"C0033213\",\"semantic_group\":\"Findings\"}\n";
  auto anns = ParseExternalAnnotations(jsonl);
  REQUIRE(anns.size() == 1);
  ConceptDictionary dict = WithAnnotations(OneEntry(), achd, anns);
  auto tags = TitleTags(achd, dict, ExtractAbbreviations(achd));
  REQUIRE(tags.size() == 2);
  CHECK(tags[0].concept_id == "C0033213");
  CHECK(tags[1].concept_id == "C0152021");
  NormalizeResult result = NormalizeRecord(achd, dict);
  CHECK(result.record.title == "Negative effect of aging on X_1 of adults with X_2");
  CHECK(result.record.sections[1].text.find("psychosocial functioning") == std::string::npos);

  ConceptDictionary filtered = WithAnnotations(OneEntry(), achd, anns, std::set<std::string>{"Disorders"});
  CHECK(TitleTags(achd, filtered, {}).size() == 1);

  std::vector<ExternalAnnotation> crossing = {{"25391256", achd.title.size() - 3, achd.title.size() + 3, "C9", "G"}};
  CHECK_THROWS_AS(WithAnnotations(OneEntry(), achd, crossing), ValidationError);
  std::vector<ExternalAnnotation> outside = {{"25391256", text.size(), text.size() + 4, "C9", "G"}};
  CHECK_THROWS_AS(WithAnnotations(OneEntry(), achd, outside), ValidationError);
  CHECK_THROWS_AS(ParseExternalAnnotations("{\"pmid\":\"1\"}\n"), ParseError);
  CHECK_THROWS_AS(ParseExternalAnnotations("{\"pmid\":\"1\",\"start\":5,\"end\":5,\"concept_id\":\"c\","
                                           "\"semantic_group\":\"g\"}\n"),
                  ParseError);
}

}  // namespace
}  // namespace effcorp
