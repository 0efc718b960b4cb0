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

// Short-form / long-form alignment in the style of Schwartz & Hearst:
// the long form is found by scanning right to left, matching each
// short-form character in turn, the first one only at a word start.

#include <unicode/uchar.h>

#include <optional>

#include "effcorp/text.h"
#include "effcorp/unicode.h"

namespace effcorp {

namespace {

constexpr std::size_t kMinShortChars = 2;
constexpr std::size_t kMaxShortChars = 10;
constexpr std::size_t kMaxShortWords = 2;

// Lowercased code points with their byte offsets.
struct CharSeq {
  std::u32string chars;
  std::vector<std::size_t> offsets;  // offsets[i] = byte offset of chars[i]
};

CharSeq Decode(std::string_view text) {
  CharSeq seq;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t next;
    char32_t c = DecodeAt(text, pos, &next);
    seq.chars.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
    seq.offsets.push_back(pos);
    pos = next;
  }
  return seq;
}

// A short-form unit: one character, or a group symbol's expansion.
struct Unit {
  std::u32string pattern;
  bool first = false;
};

std::vector<std::string_view> SplitWords(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next;
    char32_t c = DecodeAt(text, pos, &next);
    if (IsSpace(c)) {
      pos = next;
      continue;
    }
    std::size_t begin = pos;
    while (pos < text.size()) {
      char32_t d = DecodeAt(text, pos, &next);
      if (IsSpace(d)) break;
      pos = next;
    }
    words.push_back(text.substr(begin, pos - begin));
  }
  return words;
}

bool HasLetter(std::string_view text) {
  for (std::size_t pos = 0; pos < text.size();) {
    if (IsLetter(DecodeAt(text, pos, &pos))) return true;
  }
  return false;
}

bool IsCandidateShortForm(std::string_view sf) {
  std::size_t length = CodePointLength(sf);
  if (length < kMinShortChars || length > kMaxShortChars) return false;
  auto words = SplitWords(sf);
  if (words.empty() || words.size() > kMaxShortWords) return false;
  std::size_t ignored;
  if (!IsWordChar(DecodeAt(sf, 0, &ignored))) return false;
  // Measurements such as "15.2 mg/m3" are not abbreviations.
  if (!HasLetter(words.front())) return false;
  return HasLetter(sf);
}

std::vector<Unit> CharUnits(std::string_view sf) {
  std::vector<Unit> units;
  for (std::size_t pos = 0; pos < sf.size();) {
    char32_t c = DecodeAt(sf, pos, &pos);
    if (!IsWordChar(c)) continue;
    units.push_back(
        {std::u32string(1, static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)))),
         units.empty()});
  }
  return units;
}

// Units with group symbols expanded; nullopt when no segment is a symbol.
std::optional<std::vector<Unit>> GroupUnits(std::string_view sf) {
  std::vector<Unit> units;
  bool expanded = false;
  std::size_t pos = 0;
  while (pos <= sf.size()) {
    std::size_t hyphen = sf.find('-', pos);
    if (hyphen == std::string_view::npos) hyphen = sf.size();
    std::string_view segment = sf.substr(pos, hyphen - pos);
    bool matched = false;
    for (const auto &[symbol, name] : ChemicalGroupSymbols()) {
      if (segment == symbol) {
        units.push_back({Decode(name).chars, units.empty()});
        matched = expanded = true;
        break;
      }
    }
    if (!matched) {
      for (Unit &u : CharUnits(segment)) {
        u.first = units.empty();
        units.push_back(std::move(u));
      }
    }
    pos = hyphen + 1;
  }
  if (!expanded) return std::nullopt;
  return units;
}

bool AtWordStart(const std::u32string &chars, std::size_t i) {
  return i == 0 || !IsWordChar(chars[i - 1]);
}

// Index in `lf` of the leftmost matched character, or nullopt.
std::optional<std::size_t> MatchUnits(const std::vector<Unit> &units,
                                      const std::u32string &lf) {
  long l = static_cast<long>(lf.size()) - 1;
  for (auto it = units.rbegin(); it != units.rend(); ++it) {
    const std::u32string &p = it->pattern;
    long found = -1;
    for (long start = l - static_cast<long>(p.size()) + 1; start >= 0; --start) {
      if (lf.compare(static_cast<std::size_t>(start), p.size(), p) != 0) continue;
      if (it->first && !AtWordStart(lf, static_cast<std::size_t>(start))) continue;
      found = start;
      break;
    }
    if (found < 0) return std::nullopt;
    l = found - 1;
  }
  return static_cast<std::size_t>(l + 1);
}

std::optional<AbbrevPair> Define(std::string_view text, Span sentence,
                                 std::size_t open, Span sf_span) {
  std::string_view sf = text.substr(sf_span.begin, sf_span.length());
  if (!IsCandidateShortForm(sf)) return std::nullopt;

  std::string_view prefix =
      Trim(text.substr(sentence.begin, open - sentence.begin));
  if (prefix.empty()) return std::nullopt;
  std::size_t prefix_begin = static_cast<std::size_t>(prefix.data() - text.data());
  auto words = SplitWords(prefix);
  std::size_t sf_chars = CodePointLength(sf);
  std::size_t max_words = std::min(sf_chars + 5, sf_chars * 2);
  std::size_t first_word = words.size() > max_words ? words.size() - max_words : 0;
  std::size_t window_begin =
      static_cast<std::size_t>(words[first_word].data() - text.data());
  std::string_view window =
      text.substr(window_begin, prefix_begin + prefix.size() - window_begin);
  CharSeq lf = Decode(window);

  std::optional<std::size_t> match = MatchUnits(CharUnits(sf), lf.chars);
  if (!match) {
    if (auto units = GroupUnits(sf)) match = MatchUnits(*units, lf.chars);
  }
  if (!match) return std::nullopt;

  std::size_t start = *match;
  while (start > 0 && !IsSpace(lf.chars[start - 1])) --start;
  std::size_t lf_begin = window_begin + lf.offsets[start];
  std::size_t lf_end = window_begin + window.size();
  std::string_view long_form = text.substr(lf_begin, lf_end - lf_begin);
  if (CodePointLength(long_form) < sf_chars || long_form == sf) return std::nullopt;

  return AbbrevPair{std::string(sf), std::string(long_form), sf_span,
                    Span{lf_begin, lf_end}};
}

}  // namespace

const std::vector<std::pair<std::string, std::string>> &ChemicalGroupSymbols() {
  static const std::vector<std::pair<std::string, std::string>> kSymbols = {
      {"OH", "hydroxy"}, {"Me", "methyl"}, {"Et", "ethyl"},
      {"Ac", "acetyl"},  {"Ph", "phenyl"},
  };
  return kSymbols;
}

std::vector<AbbrevPair> ExtractAbbreviations(std::string_view text) {
  std::vector<AbbrevPair> pairs;
  for (const Span &sentence : SplitSentences(text)) {
    std::size_t pos = sentence.begin;
    while (pos < sentence.end) {
      std::size_t open = text.find('(', pos);
      if (open == std::string_view::npos || open >= sentence.end) break;
      int depth = 0;
      std::size_t close = std::string_view::npos;
      for (std::size_t i = open; i < sentence.end; ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')' && --depth == 0) {
          close = i;
          break;
        }
      }
      if (close == std::string_view::npos) break;
      std::string_view inner = text.substr(open + 1, close - open - 1);
      for (std::string_view sep : {"; ", ", "}) {
        std::size_t cut = inner.find(sep);
        if (cut != std::string_view::npos) inner = inner.substr(0, cut);
      }
      std::string_view sf = Trim(inner);
      if (!sf.empty()) {
        std::size_t sf_begin = static_cast<std::size_t>(sf.data() - text.data());
        if (auto pair = Define(text, sentence, open, {sf_begin, sf_begin + sf.size()})) {
          pairs.push_back(std::move(*pair));
        }
      }
      pos = close + 1;
    }
  }
  return pairs;
}

std::vector<AbbrevPair> ExtractAbbreviations(const AbstractRecord &record) {
  std::vector<AbbrevPair> pairs;
  for (const Section &section : record.sections) {
    for (AbbrevPair &p : ExtractAbbreviations(section.text)) {
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

}  // namespace effcorp
