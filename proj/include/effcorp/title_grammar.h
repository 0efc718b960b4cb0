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

// Effect-title grammar
//
//   [the|a|an] (positive|negative|no|neutral) (effect|impact|influence)
//       of X (on|in|for) Y
//
// and the three-stage title filter built on it:
//
//   stage 1  the effect phrase occurs anywhere in the title
//   stage 2  ... and no exclusion-lexicon entry occurs in the title
//   stage 3  ... and the phrase opens the title and X and Y parse

#ifndef EFFCORP_TITLE_GRAMMAR_H_
#define EFFCORP_TITLE_GRAMMAR_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "effcorp/record.h"

namespace effcorp {

enum class EffectWord : uint8_t { kEffect = 0, kImpact = 1, kInfluence = 2 };

inline constexpr std::array<EffectWord, 3> kAllEffectWords = {
    EffectWord::kEffect, EffectWord::kImpact, EffectWord::kInfluence};

std::string_view EffectWordName(EffectWord word);

enum class Preposition : uint8_t { kOn, kIn, kFor };

std::string_view PrepositionName(Preposition prep);

// Polarity and effect word of a (positive|negative|no|neutral)
// (effect|impact|influence) bigram, if `first`/`second` form one.
// Both arguments must already be case-folded.
std::optional<std::pair<Polarity, EffectWord>> MatchEffectBigram(
    std::string_view first, std::string_view second);

struct TitleParse {
  Polarity polarity = Polarity::kNeutral;
  EffectWord effect_word = EffectWord::kEffect;
  // X, Y and the preposition are set only for a full parse.
  std::string catalyst_x;
  std::string target_y;
  std::optional<Preposition> preposition;
  std::size_t match_start = 0;  // byte offset of the polarity token
  std::size_t match_end = 0;    // byte offset past the effect word
  bool at_start = false;

  bool full() const { return preposition.has_value(); }
};

// Leftmost full match of the grammar, or, when no occurrence of the
// effect phrase has a parsable X/Y, the leftmost partial match. Matching is
// case-insensitive; "no" and "neutral" both map to Polarity::kNeutral.
std::optional<TitleParse> ParseTitle(std::string_view title);

// Byte offset of the first title character after leading whitespace,
// quotes, opening brackets and the articles the/a/an.
std::size_t ContentStart(std::string_view title);

class ExclusionLexicon {
 public:
  // {and, or, but, review, study, meta-analysis, meta analysis}
  static ExclusionLexicon Default();

  // One entry per line, '#' comments. Throws IoError, ValidationError when
  // the file has no entries.
  static ExclusionLexicon Load(const std::string &path);

  // Entries are case-folded and tokenized; multi-word entries match
  // consecutive tokens.
  explicit ExclusionLexicon(const std::vector<std::string> &entries);

  // First entry occurring as whole tokens in `text`, if any.
  std::optional<std::string> FindIn(std::string_view text) const;

  const std::vector<std::string> &entries() const { return entries_; }

 private:
  std::vector<std::string> entries_;
  std::vector<std::vector<std::string>> token_entries_;
};

enum class FilterStage : uint8_t { kNone = 0, kStage1 = 1, kStage2 = 2, kStage3 = 3 };

enum class RejectionReason : uint8_t {
  kNoEffectPhrase,
  kExclusionWord,
  kNotAtStart,
  kNoXyParse,
};

std::string_view FilterStageName(FilterStage stage);
std::string_view RejectionReasonName(RejectionReason reason);

struct FilterDecision {
  FilterStage stage_reached = FilterStage::kNone;
  std::optional<RejectionReason> rejection_reason;
  std::optional<std::string> exclusion_word;  // set for kExclusionWord
  std::optional<TitleParse> parse;
};

FilterDecision ClassifyStage(std::string_view title,
                             const ExclusionLexicon &lexicon);

struct FilterAudit {
  std::string pmid;
  FilterDecision decision;
};

struct FilterResult {
  std::vector<AbstractRecord> kept;  // input order preserved
  std::vector<FilterAudit> audit;    // one entry per input record
};

FilterResult FilterCorpus(const std::vector<AbstractRecord> &records,
                          FilterStage target, const ExclusionLexicon &lexicon,
                          unsigned jobs = 1);

nlohmann::json FilterAuditToJson(const FilterAudit &audit);

// counts[stage][polarity][effect word], stage index 0..2 for stages 1..3.
struct CountTable {
  std::array<std::array<std::array<std::size_t, 3>, 3>, 3> counts{};

  std::size_t Cell(FilterStage stage, Polarity p, EffectWord w) const;
  std::size_t RowTotal(FilterStage stage, Polarity p) const;
  std::size_t ColumnTotal(FilterStage stage, EffectWord w) const;
  std::size_t GrandTotal(FilterStage stage) const;

  // Three aligned text tables, one per stage.
  std::string ToText() const;
  nlohmann::json ToJson() const;
};

CountTable Tabulate(const std::vector<AbstractRecord> &records,
                    const ExclusionLexicon &lexicon);

}  // namespace effcorp

#endif  // EFFCORP_TITLE_GRAMMAR_H_
