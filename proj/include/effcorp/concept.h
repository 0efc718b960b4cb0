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

// Dictionary concept recognition and title-concept normalization. Concepts
// found in a title are numbered X_1..X_n by first appearance; every mention
// of them in the title and sections, including abbreviations defined for
// them, is replaced by the tag.

#ifndef EFFCORP_CONCEPT_H_
#define EFFCORP_CONCEPT_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "effcorp/record.h"
#include "effcorp/text.h"

namespace effcorp {

struct ConceptEntry {
  std::string id;
  std::string canonical_name;
  std::vector<std::string> synonyms;
  std::string semantic_group;
};

using GroupFilter = std::optional<std::set<std::string>>;

// Concept surface forms keyed by their case-folded token sequence.
//
// TSV format, one synonym per line:
//   concept_id <TAB> canonical_name <TAB> synonym <TAB> semantic_group
// The canonical name is a surface form as well. Blank lines and '#'
// comments are skipped.
class ConceptDictionary {
 public:
  // Throws IoError, or ParseError (location = line number) on a malformed
  // line. Duplicate surfaces produce a warning and the first one wins.
  static ConceptDictionary Load(const std::string &path,
                                const GroupFilter &groups = std::nullopt,
                                std::vector<std::string> *warnings = nullptr);
  static ConceptDictionary Parse(std::string_view contents,
                                 const GroupFilter &groups = std::nullopt,
                                 std::vector<std::string> *warnings = nullptr);

  // Returns false with a reason in `warning` when the surface is empty or
  // already taken.
  bool Add(const std::string &id, const std::string &canonical,
           const std::string &surface, const std::string &group,
           std::string *warning = nullptr);

  const ConceptEntry *Find(std::string_view id) const;
  // Concept id for a folded, space-joined token key.
  const std::string *Lookup(const std::string &key) const;

  const std::map<std::string, ConceptEntry> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_tokens() const { return max_tokens_; }

 private:
  std::map<std::string, ConceptEntry> entries_;
  std::unordered_map<std::string, std::string> surfaces_;
  std::size_t max_tokens_ = 0;
};

// Folded tokens of `surface` joined by single spaces.
std::string SurfaceKey(std::string_view surface);

enum class MentionVia : uint8_t { kDictionary, kAbbreviationLink };

std::string_view MentionViaName(MentionVia via);

struct ConceptMention {
  std::string concept_id;
  Span span;
  std::string surface;
  MentionVia via = MentionVia::kDictionary;
};

// Greedy longest match, left to right, over whole tokens separated by
// whitespace only. Spans are sorted and non-overlapping.
std::vector<ConceptMention> Recognize(std::string_view text,
                                      const ConceptDictionary &dict);

struct ConceptTag {
  std::size_t index = 0;  // 1-based
  std::string concept_id;
  std::vector<std::string> short_forms;  // linked abbreviations

  std::string Name() const { return "X_" + std::to_string(index); }
};

// Distinct title concepts numbered by first appearance. An abbreviation
// links to a tag when its long form ends with a mention of the tagged
// concept ("adults with congenital heart disease (ACHD)").
std::vector<ConceptTag> TitleTags(const AbstractRecord &record,
                                  const ConceptDictionary &dict,
                                  const std::vector<AbbrevPair> &abbrevs);

struct TagAudit {
  std::string pmid;
  std::optional<std::size_t> section;  // nullopt for the title
  Span original;                       // span in the input text
  Span output;                         // span of "X_i" in the output text
  std::string surface;
  std::string tag;
  std::string concept_id;
  MentionVia via = MentionVia::kDictionary;
};

nlohmann::json TagAuditToJson(const TagAudit &audit);
TagAudit TagAuditFromJson(const nlohmann::json &json);

struct NormalizeResult {
  AbstractRecord record;
  std::vector<TagAudit> audit;
};

// Replaces mentions of tagged concepts and their linked short forms with
// "X_i". Short forms match case-sensitively as whole tokens. A longer
// dictionary hit on an untagged concept blocks the shorter tagged one.
// Sentence spans are carried over to the new text.
NormalizeResult Normalize(const AbstractRecord &record,
                          const std::vector<ConceptTag> &tags,
                          const ConceptDictionary &dict);

// Abbreviation extraction, tagging and normalization in one step.
NormalizeResult NormalizeRecord(const AbstractRecord &record,
                                const ConceptDictionary &dict);

// Inverse of Normalize given its audit.
AbstractRecord StripTags(const AbstractRecord &normalized,
                         const std::vector<TagAudit> &audit);

// Precomputed concept annotation. Offsets index the record text
// title + "\n" + section texts joined by "\n".
struct ExternalAnnotation {
  std::string pmid;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string concept_id;
  std::string semantic_group;
};

// JSONL {pmid, start, end, concept_id, semantic_group}. Throws ParseError
// (location = line number).
std::vector<ExternalAnnotation> ParseExternalAnnotations(std::string_view contents);

std::string AnnotationText(const AbstractRecord &record);

// `base` extended with the annotated surfaces of one record, so that every
// occurrence of an annotated surface is recognized. Throws ValidationError
// for spans that are out of range or cross a field boundary.
ConceptDictionary WithAnnotations(const ConceptDictionary &base,
                                  const AbstractRecord &record,
                                  const std::vector<ExternalAnnotation> &annotations,
                                  const GroupFilter &groups = std::nullopt);

}  // namespace effcorp

#endif  // EFFCORP_CONCEPT_H_
