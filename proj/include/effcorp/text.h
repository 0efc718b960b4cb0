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

// Sentence splitting, word tokenization, stopwords and abbreviation
// definitions for biomedical abstracts.

#ifndef EFFCORP_TEXT_H_
#define EFFCORP_TEXT_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "effcorp/record.h"

namespace effcorp {

struct Token {
  std::string surface;     // text.substr(span)
  std::string normalized;  // NFC + lowercase
  Span span;
};

using StopwordSet = std::unordered_set<std::string>;

// The built-in 150-entry English function-word list.
const StopwordSet &DefaultStopwords();

// One word per line; blank lines and '#' comments ignored; entries are
// case-folded. Throws IoError.
StopwordSet LoadStopwords(const std::string &path);

// Word tokens of `text`. A token is a maximal run of letters, digits and
// combining marks, where hyphens, apostrophes and underscores between word
// characters and '.'/',' between digits stay inside the token
// ("8-OH-Gua", "4.5", "X_1"). Punctuation is dropped. When `stopwords` is
// non-null, tokens whose normalized form is in the set are removed.
std::vector<Token> Tokenize(std::string_view text,
                            const StopwordSet *stopwords = nullptr);

// Normalized forms only.
std::vector<std::string> TokenStrings(std::string_view text,
                                      const StopwordSet *stopwords = nullptr);

// Sentence spans over `text`. Splits after '.', '?' or '!' (optionally
// followed by closing brackets/quotes) when whitespace or the end of the
// text follows, except after single capital initials and the abbreviations
// vs. e.g. i.e. Fig. Figs. al. cf. approx. ca. Spans are trimmed, ordered,
// non-overlapping and cover every non-whitespace character.
std::vector<Span> SplitSentences(std::string_view text);

// Recomputes sentence spans for every section.
void FillSentenceSpans(AbstractRecord *record);

// Short form / long form definition: "long form (SF)".
struct AbbrevPair {
  std::string short_form;
  std::string long_form;
  Span span_short;  // offsets into the text passed to ExtractAbbreviations
  Span span_long;

  bool operator==(const AbbrevPair &) const = default;
};

// Finds "long form (short form)" definitions. Short-form candidates are
// parenthesized, at most two words, 2-10 characters, start with a letter or
// digit, contain a letter and do not start with a purely numeric word. The
// long form is the shortest run of preceding words in the same sentence
// whose characters match every short-form letter and digit right to left,
// with the first short-form character at the start of a word. Hyphen
// separated chemical group symbols (OH, Me, Et, Ac, Ph) may match their
// spelled-out group names when plain character matching fails. At most one
// pair per parenthesis.
std::vector<AbbrevPair> ExtractAbbreviations(std::string_view text);

// Abbreviations defined anywhere in the record's sections.
std::vector<AbbrevPair> ExtractAbbreviations(const AbstractRecord &record);

// Group symbol expansions used by the long-form matcher.
const std::vector<std::pair<std::string, std::string>> &ChemicalGroupSymbols();

}  // namespace effcorp

#endif  // EFFCORP_TEXT_H_
