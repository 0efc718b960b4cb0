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

#include "effcorp/text.h"

#include <array>

#include "effcorp/unicode.h"

namespace effcorp {

namespace {

bool IsJoiner(char32_t c) {
  return IsHyphen(c) || IsApostrophe(c) || c == U'_';
}

// Abbreviations whose trailing period never ends a sentence.
constexpr std::array<std::string_view, 9> kNonTerminal = {
    "vs", "e.g", "i.e", "fig", "figs", "al", "cf", "approx", "ca"};

// The whitespace-delimited word ending right before the period at `dot`,
// without leading brackets or quotes.
std::string_view WordBefore(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0) {
    std::size_t prev = PreviousBoundary(text, begin);
    std::size_t ignored;
    char32_t c = DecodeAt(text, prev, &ignored);
    if (IsSpace(c)) break;
    begin = prev;
  }
  while (begin < dot) {
    std::size_t next;
    char32_t c = DecodeAt(text, begin, &next);
    if (!IsOpeningBracket(c) && !IsQuote(c)) break;
    begin = next;
  }
  return text.substr(begin, dot - begin);
}

bool IsNonTerminalPeriod(std::string_view text, std::size_t dot) {
  std::string_view word = WordBefore(text, dot);
  if (word.empty()) return false;
  std::size_t next;
  char32_t first = DecodeAt(word, 0, &next);
  if (next == word.size() && IsUpperLetter(first)) return true;
  std::string folded = FoldCase(word);
  for (std::string_view abbrev : kNonTerminal) {
    if (folded == abbrev) return true;
  }
  return false;
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text,
                            const StopwordSet *stopwords) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next;
    char32_t c = DecodeAt(text, pos, &next);
    if (!IsWordChar(c)) {
      pos = next;
      continue;
    }
    std::size_t begin = pos;
    std::size_t end = next;
    char32_t last = c;
    while (end < text.size()) {
      std::size_t after;
      char32_t d = DecodeAt(text, end, &after);
      if (IsWordChar(d)) {
        last = d;
        end = after;
        continue;
      }
      bool digit_joiner = (d == U'.' || d == U',') && IsDigit(last);
      if (!IsJoiner(d) && !digit_joiner) break;
      if (after >= text.size()) break;
      std::size_t after2;
      char32_t e = DecodeAt(text, after, &after2);
      if (digit_joiner ? !IsDigit(e) : !IsWordChar(e)) break;
      last = e;
      end = after2;
    }
    Token token;
    token.surface = std::string(text.substr(begin, end - begin));
    token.normalized = FoldCase(token.surface);
    token.span = {begin, end};
    pos = end;
    if (stopwords != nullptr && stopwords->contains(token.normalized)) continue;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> TokenStrings(std::string_view text,
                                      const StopwordSet *stopwords) {
  std::vector<std::string> out;
  for (Token &t : Tokenize(text, stopwords)) out.push_back(std::move(t.normalized));
  return out;
}

std::vector<Span> SplitSentences(std::string_view text) {
  std::vector<Span> spans;
  std::size_t start = std::string_view::npos;
  std::size_t last_content_end = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next;
    char32_t c = DecodeAt(text, pos, &next);
    if (IsSpace(c)) {
      pos = next;
      continue;
    }
    if (start == std::string_view::npos) start = pos;
    last_content_end = next;
    if (c == U'.' || c == U'?' || c == U'!') {
      // Absorb runs of terminals and closing brackets/quotes.
      std::size_t end = next;
      while (end < text.size()) {
        std::size_t after;
        char32_t d = DecodeAt(text, end, &after);
        if (d == U'.' || d == U'?' || d == U'!' || IsClosingBracket(d) ||
            IsQuote(d)) {
          end = after;
        } else {
          break;
        }
      }
      bool boundary = end >= text.size();
      if (!boundary) {
        std::size_t ignored;
        boundary = IsSpace(DecodeAt(text, end, &ignored));
      }
      if (boundary && c == U'.' && IsNonTerminalPeriod(text, pos)) {
        boundary = false;
      }
      if (boundary && c == U'.' && pos > 0 && end < text.size()) {
        std::size_t ignored;
        char32_t before = DecodeAt(text, PreviousBoundary(text, pos), &ignored);
        char32_t after = DecodeAt(text, next, &ignored);
        if (IsDigit(before) && IsDigit(after)) boundary = false;
      }
      last_content_end = end;
      if (boundary) {
        spans.push_back({start, end});
        start = std::string_view::npos;
      }
      pos = end;
      continue;
    }
    pos = next;
  }
  if (start != std::string_view::npos) spans.push_back({start, last_content_end});
  return spans;
}

void FillSentenceSpans(AbstractRecord *record) {
  for (Section &section : record->sections) {
    section.sentence_spans = SplitSentences(section.text);
  }
}

}  // namespace effcorp
